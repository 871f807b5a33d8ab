#pragma once

#include <stdexcept>
#include <string>

namespace fnmc {

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Hamiltonian cannot be used by the requested operation (e.g. row access on
/// a term list containing imaginary entries).
class InvalidHamiltonian : public Error {
 public:
  using Error::Error;
};

/// A state in the chain has zero ground-state amplitude where a nonzero one is
/// required.
class ZeroAmplitude : public Error {
 public:
  using Error::Error;
};

/// The oracle is not an eigenvector of the Hamiltonian, or the ground energy
/// used by the chain is wrong; detected through rate-sum cross checks.
class OracleInconsistency : public Error {
 public:
  using Error::Error;
};

/// The chain reached a state with zero total escape rate.
class AbsorbingState : public Error {
 public:
  using Error::Error;
};

/// A dense or enumerative computation would exceed its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Exact diagonalization found a degenerate ground level.
class DegenerateGroundState : public Error {
 public:
  using Error::Error;
};

}  // namespace fnmc
