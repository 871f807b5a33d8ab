#include <cmath>

#include "doctest.h"

#include "fnmc/errors.hpp"
#include "fnmc/exact.hpp"
#include "fnmc/fixed_node.hpp"
#include "fnmc/gillespie.hpp"
#include "fnmc/real_embedding.hpp"
#include "support.hpp"

using namespace fnmc;
using testing::bits;

using testing::complex_instance;

TEST_CASE("embedded operator is real symmetric with the right ground state") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int n = 2 + static_cast<int>(seed % 2);
    const auto inst = complex_instance(n, seed * 100);
    const auto emb = real_embedding(inst.h, inst.oracle);
    CHECK(emb.hamiltonian.num_qubits() == n + 1);
    const Eigen::MatrixXd hr = testing::dense_by_elements(emb.hamiltonian);
    CHECK((hr - hr.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    // rows agree with matrix elements
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << (n + 1)); ++j)
      for (const auto& e : emb.hamiltonian.row(BitConfiguration(n + 1, j)))
        CHECK(e.value == doctest::Approx(hr(static_cast<Eigen::Index>(e.state.to_index()),
                                            static_cast<Eigen::Index>(j))));

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hr);
    const double lambda1 = inst.spectrum[0];
    const double gamma = inst.spectrum[1] - inst.spectrum[0];
    CHECK(std::abs(es.eigenvalues()[0] - lambda1) < 1e-9);
    CHECK(es.eigenvalues()[1] - es.eigenvalues()[0] >= std::min(1.0, gamma) - 1e-9);

    // the embedded amplitudes are an eigenvector with eigenvalue lambda1
    Eigen::VectorXd phi(hr.rows());
    for (Eigen::Index k = 0; k < phi.size(); ++k)
      phi[k] = emb.oracle.amplitude(BitConfiguration(n + 1, static_cast<std::uint64_t>(k))).value();
    CHECK((hr * phi - lambda1 * phi).cwiseAbs().maxCoeff() < 1e-9 * phi.norm());
    CHECK(emb.hamiltonian.norm_bound() >= es.eigenvalues().cwiseAbs().maxCoeff() - 1e-12);

    // and the fixed-node chain on it is consistent
    FixedNodeChain chain(emb.hamiltonian, emb.oracle, BitConfiguration(n + 1, 0));
    CHECK(chain.lambda1() == doctest::Approx(lambda1).epsilon(1e-9));
  }
}

TEST_CASE("real input: gap is exactly min(1, gamma)") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (;;) {
      const auto h = testing::random_hamiltonian(2, 6, 2, seed * 7 + 3, true);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(testing::dense_real(h));
      const Eigen::VectorXd v = es.eigenvectors().col(0);
      ++seed;
      if (es.eigenvalues()[1] - es.eigenvalues()[0] < 1e-2 || v.cwiseAbs().minCoeff() < 1e-3)
        continue;
      std::vector<std::complex<double>> table(v.data(), v.data() + v.size());
      const ComplexTableOracle oracle(2, table);
      // a real ground state has all-zero imaginary parts: the embedding
      // oracle has zeros on ancilla 1, so only check the spectrum here
      const auto emb = real_embedding(h, oracle);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(
          testing::dense_by_elements(emb.hamiltonian));
      const double gamma = es.eigenvalues()[1] - es.eigenvalues()[0];
      CHECK(er.eigenvalues()[0] == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-9));
      CHECK(er.eigenvalues()[1] - er.eigenvalues()[0] ==
            doctest::Approx(std::min(1.0, gamma)).epsilon(1e-9));
      break;
    }
  }
}

TEST_CASE("embedding input validation") {
  const SparseHamiltonian h(2, {PauliTerm(1.0, {{0, Pauli::Y}})});
  std::vector<std::complex<double>> table(4, 1.0);
  table[2] = 0.0;
  const ComplexTableOracle oracle(2, table);
  const auto emb = real_embedding(h, oracle);
  CHECK_THROWS_AS(emb.hamiltonian.row(BitConfiguration(3, 2)), ZeroAmplitude);
  const ComplexTableOracle wrong_size(3, std::vector<std::complex<double>>(8, 1.0));
  CHECK_THROWS(real_embedding(h, wrong_size));
  CHECK_THROWS_AS(ComplexTableOracle(1, {0.0, 1.0}), ZeroAmplitude);
}
