#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "fnmc/bits.hpp"

namespace fnmc {

/// Real amplitude stored as sign in {-1, 0, +1} and log of the magnitude.
struct SignedLogAmplitude {
  int sign = 0;
  double log_abs = -std::numeric_limits<double>::infinity();

  static SignedLogAmplitude from_value(double v) {
    if (v == 0.0) return {};
    return {v > 0 ? 1 : -1, std::log(std::abs(v))};
  }
  bool is_zero() const noexcept { return sign == 0; }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

/// Access to an (unnormalized) real ground state through its amplitudes.
///
/// ratio(x, y) is <y|psi>/<x|psi>. Implementations override log_ratio()
/// when a cheaper route than two full amplitude evaluations exists.
class AmplitudeOracle {
 public:
  virtual ~AmplitudeOracle() = default;

  virtual int num_qubits() const = 0;
  virtual SignedLogAmplitude amplitude(const BitConfiguration& x) const = 0;

  /// <y|psi>/<x|psi> in signed-log form; throws ZeroAmplitude if <x|psi> = 0.
  virtual SignedLogAmplitude log_ratio(const BitConfiguration& x,
                                       const BitConfiguration& y) const;

  /// Exactly 1 when x == y.
  double ratio(const BitConfiguration& x, const BitConfiguration& y) const;
};

/// Oracle backed by an explicit amplitude table.
///
/// Either a full 2^n table indexed by BitConfiguration::to_index() (n <= 30),
/// or an explicit list of basis states; absent states have amplitude zero.
class TableOracle : public AmplitudeOracle {
 public:
  TableOracle(int num_qubits, std::vector<double> full_table);
  TableOracle(int num_qubits, std::span<const BitConfiguration> basis,
              std::span<const double> amplitudes);

  int num_qubits() const override { return n_; }
  SignedLogAmplitude amplitude(const BitConfiguration& x) const override;
  double value(const BitConfiguration& x) const;

 private:
  int n_;
  std::vector<double> full_;
  std::unordered_map<BitConfiguration, double, BitConfigurationHash> sparse_;
};

/// Access to a complex ground state through ratios to the reference state 0^n.
class ComplexAmplitudeOracle {
 public:
  virtual ~ComplexAmplitudeOracle() = default;
  virtual int num_qubits() const = 0;
  /// <x|psi>/<0^n|psi>.
  virtual std::complex<double> ratio_to_reference(
      const BitConfiguration& x) const = 0;
};

/// Complex oracle backed by a full 2^n table (n <= 30).
class ComplexTableOracle : public ComplexAmplitudeOracle {
 public:
  ComplexTableOracle(int num_qubits, std::vector<std::complex<double>> table);

  int num_qubits() const override { return n_; }
  std::complex<double> ratio_to_reference(
      const BitConfiguration& x) const override;

 private:
  int n_;
  std::vector<std::complex<double>> table_;
};

}  // namespace fnmc
