#pragma once

#include <cstdint>
#include <vector>

#include "fnmc/amplitude.hpp"
#include "fnmc/hamiltonian.hpp"
#include "fnmc/random.hpp"

namespace fnmc::hs {

/// Haldane-Shastry ring of L qubits (L even).
///
/// Sites are 0-based internally; the coupling of a pair depends only on the
/// ring distance d through J(d) = 1 / (4 (L/pi sin(pi d/L))^2).
class Model {
 public:
  explicit Model(int L);

  int size() const noexcept { return L_; }
  /// Coupling between 0-based sites i != j.
  double coupling(int i, int j) const;
  /// log|sin(pi d / L)| for 0 < d < L.
  double log_sin(int d) const { return log_sin_[static_cast<std::size_t>(d)]; }

 private:
  int L_;
  std::vector<double> coupling_by_distance_;
  std::vector<double> log_sin_;
};

/// sum_{i<j} J_ij (X_i X_j + Y_i Y_j + Z_i Z_j) as 3 L(L-1)/2 Pauli terms.
SparseHamiltonian hamiltonian(int L);

/// Closed-form ground state: zero off half filling, otherwise sign
/// (-1)^{sum_k (k-1) x_k} (1-based k) and magnitude
/// prod_{i<j occupied} sin^2(pi (i-j)/L), unnormalized, in log form.
class GroundStateOracle : public AmplitudeOracle {
 public:
  explicit GroundStateOracle(const Model& model) : model_(model) {}

  int num_qubits() const override { return model_.size(); }
  SignedLogAmplitude amplitude(const BitConfiguration& x) const override;
  /// O(L) when y is x with one occupied and one empty site exchanged.
  SignedLogAmplitude log_ratio(const BitConfiguration& x,
                               const BitConfiguration& y) const override;

  /// Always the full O(L^2) evaluation of both amplitudes.
  SignedLogAmplitude log_ratio_from_scratch(const BitConfiguration& x,
                                            const BitConfiguration& y) const;

 private:
  const Model& model_;
};

/// Uniformly random state of weight L/2.
BitConfiguration random_half_filling(int L, RandomSource& rng);
/// Weight-L/2 state 1010...10.
BitConfiguration neel_state(int L);

/// Closed-form ZZ correlator at 1-based separation d (i - j = -d), evaluated
/// literally; see brute_zz() for the normalization used as ground truth.
double exact_zz(int L, int d);

/// Normalized probabilities over the half-filling sector, states in
/// increasing index order. L <= 24.
struct SectorDistribution {
  std::vector<BitConfiguration> states;
  std::vector<double> probabilities;
  std::vector<double> amplitudes;  // normalized, signed
};
SectorDistribution sector_distribution(int L);

/// <psi|Z_i Z_j|psi> by summation over the sector; 1-based sites, L <= 24.
double brute_zz(int L, int i, int j);
double brute_zz(const SectorDistribution& dist, int i, int j);

/// M_d(x) = (1/L) sum_{i=1..L} (-1)^{x_i + x_{Mod(i+d)}},
/// Mod(i+d) = ((i+d-1) mod L) + 1.
double m_d(const BitConfiguration& x, int d);

/// Ground state with i.i.d. Gaussian noise (standard deviation kappa / 2^L)
/// added to every normalized amplitude of the 2^L basis, then renormalized.
struct CorruptedState {
  TableOracle oracle;
  double tv_distance;  // sum_x |pi(x) - pi~(x)| (1-norm)
};
CorruptedState corrupt(const Model& model, double kappa, std::uint64_t seed);

}  // namespace fnmc::hs
