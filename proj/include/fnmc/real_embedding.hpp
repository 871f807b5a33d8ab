#pragma once

#include "fnmc/amplitude.hpp"
#include "fnmc/hamiltonian.hpp"

namespace fnmc {

/// Real symmetric (n+1)-qubit operator whose unique ground state is
/// Re(psi)|0> + Im(psi)|1>, with the ancilla stored as qubit n.
///
/// Writing H = A + iK (A symmetric, K antisymmetric, both real), the operator
/// is A (x) I + K (x) [[0,-1],[1,0]] + sum_x |x><x| (x) |v_x><v_x| with
/// v_x = -sin(theta_x)|0> + cos(theta_x)|1> and theta_x the phase of
/// <x|psi>/<0^n|psi>. Rows are built lazily; each row makes one call to the
/// complex oracle. Both referenced objects must outlive this one.
class EmbeddedHamiltonian : public RowOperator {
 public:
  EmbeddedHamiltonian(const SparseHamiltonian& h,
                      const ComplexAmplitudeOracle& oracle);

  int num_qubits() const override { return h_.num_qubits() + 1; }
  std::vector<Entry> row(const BitConfiguration& x) const override;
  double matrix_element(const BitConfiguration& y,
                        const BitConfiguration& x) const override;
  double norm_bound() const override { return h_.norm_bound() + 1.0; }
  int max_row_degree() const override { return 2 * h_.max_row_degree() + 1; }

  /// Phase angle of <x|psi>/<0^n|psi> for an n-qubit x.
  double theta(const BitConfiguration& x) const;

 private:
  const SparseHamiltonian& h_;
  const ComplexAmplitudeOracle& oracle_;
};

/// Amplitudes of the embedded ground state, <x,a|phi> = Re/Im of
/// <x|psi>/<0^n|psi> for a = 0/1.
class EmbeddedOracle : public AmplitudeOracle {
 public:
  explicit EmbeddedOracle(const ComplexAmplitudeOracle& oracle)
      : oracle_(oracle) {}

  int num_qubits() const override { return oracle_.num_qubits() + 1; }
  SignedLogAmplitude amplitude(const BitConfiguration& x) const override;

 private:
  const ComplexAmplitudeOracle& oracle_;
};

struct RealEmbedding {
  EmbeddedHamiltonian hamiltonian;
  EmbeddedOracle oracle;
};

/// Builds the real embedding of a complex Hermitian Pauli Hamiltonian given an
/// oracle for its (nowhere-zero) ground state.
RealEmbedding real_embedding(const SparseHamiltonian& h,
                             const ComplexAmplitudeOracle& oracle);

}  // namespace fnmc
