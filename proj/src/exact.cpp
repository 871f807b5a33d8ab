#include "fnmc/exact.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "fnmc/errors.hpp"
#include "fnmc/fixed_node.hpp"

namespace fnmc {

std::vector<BitConfiguration> full_basis(int n) {
  if (n < 0 || n > 30) throw std::invalid_argument("full_basis: n must be in [0, 30]");
  std::vector<BitConfiguration> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) out.emplace_back(n, v);
  return out;
}

std::vector<BitConfiguration> half_filling_basis(int n) {
  if (n < 2 || n % 2 || n > 62)
    throw std::invalid_argument("half_filling_basis: n must be even in [2, 62]");
  std::vector<BitConfiguration> out;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t v = (std::uint64_t{1} << (n / 2)) - 1; v < limit;) {
    out.emplace_back(n, v);
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
  return out;
}

std::vector<BitConfiguration> support_basis(const AmplitudeOracle& psi) {
  std::vector<BitConfiguration> out;
  for (auto& x : full_basis(psi.num_qubits()))
    if (!psi.amplitude(x).is_zero()) out.push_back(std::move(x));
  return out;
}

std::size_t DenseSector::index_of(const BitConfiguration& x) const {
  const auto it = index.find(x);
  if (it == index.end())
    throw std::out_of_range("state " + x.to_string() + " is not in the basis");
  return it->second;
}

DenseSector build_dense(DenseKind kind, const RowOperator& h,
                        const AmplitudeOracle& psi,
                        std::vector<BitConfiguration> basis, std::size_t cap) {
  const std::size_t dim = basis.size();
  if (dim == 0) throw std::invalid_argument("build_dense: empty basis");
  if (dim > cap)
    throw CapExceeded("build_dense: dimension " + std::to_string(dim) +
                      " exceeds cap " + std::to_string(cap));

  DenseSector s;
  s.basis = std::move(basis);
  s.index.reserve(dim);
  for (std::size_t k = 0; k < dim; ++k) s.index.emplace(s.basis[k], k);

  // amplitudes relative to the largest one, then normalized
  std::vector<SignedLogAmplitude> logs(dim);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dim; ++k) {
    logs[k] = psi.amplitude(s.basis[k]);
    max_log = std::max(max_log, logs[k].log_abs);
  }
  s.amplitudes.resize(static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k)
    s.amplitudes[static_cast<Eigen::Index>(k)] =
        logs[k].is_zero() ? 0.0 : logs[k].sign * std::exp(logs[k].log_abs - max_log);
  s.amplitudes.normalize();

  const auto n = static_cast<Eigen::Index>(dim);
  s.matrix = Eigen::MatrixXd::Zero(n, n);
  if (kind == DenseKind::kG) {
    std::size_t ref = 0;
    while (ref < dim && logs[ref].is_zero()) ++ref;
    if (ref == dim) throw ZeroAmplitude("build_dense: no support state in basis");
    s.lambda1 = ground_energy(h, psi, s.basis[ref]);
  }

  for (std::size_t j = 0; j < dim; ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    if (kind == DenseKind::kG) {
      const auto g = generator_rates(h, psi, s.lambda1, s.basis[j]);
      s.matrix(col, col) = -g.total_rate;
      for (const auto& r : g.outgoing) {
        const auto it = s.index.find(r.target);
        if (it != s.index.end())
          s.matrix(static_cast<Eigen::Index>(it->second), col) += r.rate;
      }
      continue;
    }
    const auto entries = kind == DenseKind::kH ? h.row(s.basis[j])
                                               : fixed_node_row(h, psi, s.basis[j]);
    for (const auto& e : entries) {
      const auto it = s.index.find(e.state);
      if (it != s.index.end())
        s.matrix(static_cast<Eigen::Index>(it->second), col) += e.value;
    }
  }
  return s;
}

EigenSystem eig_sym(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eig_sym: matrix not square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("eig_sym: matrix is not symmetric");
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_sym: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Gaps spectral_gaps(const RowOperator& h, const AmplitudeOracle& psi,
                   const std::vector<BitConfiguration>& basis, std::size_t cap) {
  if (basis.size() < 2) throw std::invalid_argument("spectral_gaps: need dimension >= 2");
  const auto eh = eig_sym(build_dense(DenseKind::kH, h, psi, basis, cap).matrix).values;
  const auto ef = eig_sym(build_dense(DenseKind::kF, h, psi, basis, cap).matrix).values;
  Gaps g{eh[0], eh[1], ef[0], ef[1]};
  if (g.gamma() < 1e-10 || g.gamma_f() < 1e-10)
    throw DegenerateGroundState("spectral_gaps: ground state is degenerate");
  return g;
}

ExactEvolution::ExactEvolution(const DenseSector& generator)
    : amplitudes_(generator.amplitudes) {
  if ((amplitudes_.array() == 0.0).any())
    throw ZeroAmplitude("exact evolution: zero amplitude in the basis");
  const Eigen::VectorXd& d = amplitudes_;
  const Eigen::MatrixXd m =
      d.cwiseInverse().asDiagonal() * generator.matrix * d.asDiagonal();
  eig_ = eig_sym(m);
}

Eigen::VectorXd ExactEvolution::distribution(std::size_t x_in, double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("exact evolution: t must be >= 0");
  const auto x = static_cast<Eigen::Index>(x_in);
  if (x >= amplitudes_.size()) throw std::out_of_range("exact evolution: x_in");
  // column x of e^{Mt}, then conjugate by D
  const Eigen::VectorXd weights =
      (eig_.values * t).array().exp() * eig_.vectors.row(x).transpose().array();
  Eigen::VectorXd p = eig_.vectors * weights;
  p = (p.array() * amplitudes_.array() / amplitudes_[x]).matrix();
  return p.cwiseMax(0.0);  // rounding noise only
}

Eigen::VectorXd exact_evolution(const DenseSector& generator, std::size_t x_in,
                                double t) {
  return ExactEvolution(generator).distribution(x_in, t);
}

double expected_flip_rate(const DenseSector& f) {
  Eigen::MatrixXd off = f.matrix;
  off.diagonal().setZero();
  return -f.amplitudes.dot(off * f.amplitudes);
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("tv_distance: length mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) acc += std::abs(p[k] - q[k]);
  return acc;
}

double wick_check(std::span<const double> amplitudes) {
  if (amplitudes.size() != 16)
    throw std::invalid_argument("wick_check: expected 16 amplitudes");
  for (std::uint64_t v = 0; v < 16; ++v)
    if ((std::popcount(v) & 1) && amplitudes[v] != 0.0)
      throw std::invalid_argument("wick_check: odd-weight amplitude is nonzero");
  const auto a = [&](const char* s) {
    return amplitudes[BitConfiguration::from_string(s).to_index()];
  };
  return -a("0000") * a("1111") + a("1100") * a("0011") -
         a("1010") * a("0101") + a("1001") * a("0110");
}

void write_gap_csv(std::ostream& os, const std::vector<GapRow>& rows) {
  os << "L,gamma,gamma_F,lambda1,inv_gamma,inv_gamma_F\n";
  const auto precision = os.precision(17);
  for (const auto& r : rows)
    os << r.L << ',' << r.gamma << ',' << r.gamma_f << ',' << r.lambda1 << ','
       << 1.0 / r.gamma << ',' << 1.0 / r.gamma_f << '\n';
  os.precision(precision);
}

}  // namespace fnmc
