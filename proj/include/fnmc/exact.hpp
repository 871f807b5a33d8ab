#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "fnmc/amplitude.hpp"
#include "fnmc/bits.hpp"
#include "fnmc/hamiltonian.hpp"

namespace fnmc {

/// Default cap on the dimension of dense matrices.
inline constexpr std::size_t kDenseCap = 4096;

std::vector<BitConfiguration> full_basis(int n);
/// Weight-n/2 states in increasing index order.
std::vector<BitConfiguration> half_filling_basis(int n);
/// States of the full basis with nonzero amplitude.
std::vector<BitConfiguration> support_basis(const AmplitudeOracle& psi);

enum class DenseKind { kH, kF, kG };

/// A dense operator restricted to an ordered basis, with the ground-state
/// amplitudes on the same basis normalized to unit 2-norm.
///
/// matrix(i, j) = <basis[i]| A |basis[j]>. Entries leading outside the basis
/// are dropped, so the basis must be invariant under A.
struct DenseSector {
  std::vector<BitConfiguration> basis;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd amplitudes;
  double lambda1 = 0.0;  // row-sum ground energy used for kG
  std::unordered_map<BitConfiguration, std::size_t, BitConfigurationHash> index;

  std::size_t index_of(const BitConfiguration& x) const;
  Eigen::VectorXd distribution() const {
    return amplitudes.array().square().matrix();
  }
};

DenseSector build_dense(DenseKind kind, const RowOperator& h,
                        const AmplitudeOracle& psi,
                        std::vector<BitConfiguration> basis,
                        std::size_t cap = kDenseCap);

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k pairs with values[k]
};

/// Symmetric eigendecomposition; throws std::invalid_argument when
/// max|A - A^T| exceeds 1e-10 max(1, max|A|).
EigenSystem eig_sym(const Eigen::MatrixXd& a);

struct Gaps {
  double lambda1_h, lambda2_h;
  double lambda1_f, lambda2_f;
  double gamma() const { return lambda2_h - lambda1_h; }
  double gamma_f() const { return lambda2_f - lambda1_f; }
};

/// Lowest two eigenvalues of H and F on the basis. Throws
/// DegenerateGroundState if either gap is below 1e-10.
Gaps spectral_gaps(const RowOperator& h, const AmplitudeOracle& psi,
                   const std::vector<BitConfiguration>& basis,
                   std::size_t cap = kDenseCap);

/// pi_t = e^{G t} delta_{x_in}, evaluated as D e^{M t} D^{-1} delta_{x_in}
/// with M = D^{-1} G D symmetric. Decomposes M once for many (x_in, t).
class ExactEvolution {
 public:
  explicit ExactEvolution(const DenseSector& generator);

  Eigen::VectorXd distribution(std::size_t x_in, double t) const;
  /// Eigenvalues of M, ascending (largest is 0).
  const Eigen::VectorXd& spectrum() const noexcept { return eig_.values; }

 private:
  Eigen::VectorXd amplitudes_;
  EigenSystem eig_;
};

Eigen::VectorXd exact_evolution(const DenseSector& generator, std::size_t x_in,
                                double t);

/// -sum_{x != y} psi_x F_xy psi_y, the stationary flip rate of the chain.
double expected_flip_rate(const DenseSector& f);

/// sum_i |p_i - q_i| (twice the total variation distance).
double tv_distance(std::span<const double> p, std::span<const double> q);

/// Left-hand side of the four-qubit free-fermion condition
/// -a(0000)a(1111) + a(1100)a(0011) - a(1010)a(0101) + a(1001)a(0110),
/// for a 16-entry table indexed by BitConfiguration::to_index(). Throws
/// std::invalid_argument if any odd-weight amplitude is nonzero.
double wick_check(std::span<const double> amplitudes);

struct GapRow {
  int L;
  double gamma, gamma_f, lambda1;
};

/// CSV with header L,gamma,gamma_F,lambda1,inv_gamma,inv_gamma_F.
void write_gap_csv(std::ostream& os, const std::vector<GapRow>& rows);

}  // namespace fnmc
