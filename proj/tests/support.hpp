#pragma once

// Brute-force reference implementations used as independent oracles: dense
// Pauli strings via Kronecker products and dense eigensolves. Nothing here
// goes through the library's row-access code paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fnmc/amplitude.hpp"
#include "fnmc/bits.hpp"
#include "fnmc/hamiltonian.hpp"
#include "fnmc/random.hpp"

namespace testing {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

inline CMat pauli_matrix(char p) {
  CMat m(2, 2);
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Cplx(0, -1), Cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Qubit i is bit i of the basis index, so qubit n-1 is the leftmost factor.
inline CMat dense(const fnmc::SparseHamiltonian& h) {
  const int n = h.num_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMat total = CMat::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    std::vector<char> label(static_cast<std::size_t>(n), 'I');
    for (const auto& f : t.support())
      label[static_cast<std::size_t>(f.site)] = static_cast<char>(f.label);
    CMat m = pauli_matrix(label[static_cast<std::size_t>(n - 1)]);
    for (int q = n - 2; q >= 0; --q)
      m = kron(m, pauli_matrix(label[static_cast<std::size_t>(q)]));
    total += t.coefficient() * m;
  }
  return total;
}

inline Eigen::MatrixXd dense_real(const fnmc::SparseHamiltonian& h) {
  return dense(h).real();
}

// Dense matrix of any row operator, assembled from matrix_element only.
inline Eigen::MatrixXd dense_by_elements(const fnmc::RowOperator& h) {
  const int n = h.num_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      m(i, j) = h.matrix_element(fnmc::BitConfiguration(n, static_cast<std::uint64_t>(i)),
                                 fnmc::BitConfiguration(n, static_cast<std::uint64_t>(j)));
  return m;
}

inline fnmc::PauliTerm random_term(int n, int max_weight, fnmc::RandomSource& rng,
                                   bool real_only) {
  for (;;) {
    std::vector<fnmc::PauliFactor> support;
    int y = 0;
    for (int q = 0; q < n; ++q) {
      if (static_cast<int>(support.size()) >= max_weight) break;
      const auto r = rng.index(4);
      if (r == 0) continue;
      const auto p = r == 1 ? fnmc::Pauli::X : r == 2 ? fnmc::Pauli::Y : fnmc::Pauli::Z;
      if (p == fnmc::Pauli::Y) ++y;
      support.push_back({q, p});
    }
    if (support.empty() || (real_only && y % 2)) continue;
    return fnmc::PauliTerm(2.0 * rng.uniform() - 1.0 + (rng.uniform() < 0.5 ? 0.05 : -0.05),
                           std::move(support));
  }
}

inline fnmc::SparseHamiltonian random_hamiltonian(int n, int terms, int max_weight,
                                                  std::uint64_t seed, bool real_only) {
  fnmc::RandomSource rng(seed);
  std::vector<fnmc::PauliTerm> list;
  for (int k = 0; k < terms; ++k) list.push_back(random_term(n, max_weight, rng, real_only));
  return fnmc::SparseHamiltonian(n, std::move(list));
}

struct ComplexInstance {
  fnmc::SparseHamiltonian h;
  Eigen::VectorXd spectrum;
  fnmc::ComplexTableOracle oracle;
};

// Random complex (non-real) Pauli Hamiltonian whose ground state is simple
// and nowhere zero, with both parts of every reference ratio nonzero.
inline ComplexInstance complex_instance(int n, std::uint64_t seed) {
  for (;;) {
    auto h = random_hamiltonian(n, 4 * n, n, seed++, false);
    if (h.is_real()) continue;
    const Eigen::SelfAdjointEigenSolver<CMat> es(dense(h));
    if (es.eigenvalues()[1] - es.eigenvalues()[0] < 1e-2) continue;
    const Eigen::VectorXcd v = es.eigenvectors().col(0);
    if (v.cwiseAbs().minCoeff() < 1e-3) continue;
    // the reference ratio is 1, so only its imaginary part may vanish
    bool ok = true;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      const auto r = v[k] / v[0];
      ok = ok && std::abs(r.real()) > 1e-6 && (k == 0 || std::abs(r.imag()) > 1e-6);
    }
    if (!ok) continue;
    return {std::move(h), es.eigenvalues(),
            fnmc::ComplexTableOracle(
                n, std::vector<std::complex<double>>(v.data(), v.data() + v.size()))};
  }
}

inline fnmc::BitConfiguration bits(const char* s) {
  return fnmc::BitConfiguration::from_string(s);
}

}  // namespace testing
