#include "fnmc/amplitude.hpp"

#include <stdexcept>

#include "fnmc/errors.hpp"

namespace fnmc {

SignedLogAmplitude AmplitudeOracle::log_ratio(const BitConfiguration& x,
                                              const BitConfiguration& y) const {
  const auto ax = amplitude(x);
  if (ax.is_zero())
    throw ZeroAmplitude("amplitude ratio requested from zero-amplitude state " +
                        x.to_string());
  if (x == y) return {1, 0.0};
  const auto ay = amplitude(y);
  if (ay.is_zero()) return {};
  return {ax.sign * ay.sign, ay.log_abs - ax.log_abs};
}

double AmplitudeOracle::ratio(const BitConfiguration& x,
                              const BitConfiguration& y) const {
  if (x == y) {
    if (amplitude(x).is_zero())
      throw ZeroAmplitude("amplitude ratio requested from zero-amplitude state " +
                          x.to_string());
    return 1.0;
  }
  return log_ratio(x, y).value();
}

TableOracle::TableOracle(int num_qubits, std::vector<double> full_table)
    : n_(num_qubits), full_(std::move(full_table)) {
  if (n_ < 1 || n_ > 30)
    throw std::invalid_argument("TableOracle: full table needs 1 <= n <= 30");
  if (full_.size() != (std::size_t{1} << n_))
    throw std::invalid_argument("TableOracle: table size must be 2^n");
}

TableOracle::TableOracle(int num_qubits, std::span<const BitConfiguration> basis,
                         std::span<const double> amplitudes)
    : n_(num_qubits) {
  if (basis.size() != amplitudes.size())
    throw std::invalid_argument("TableOracle: basis/amplitude length mismatch");
  sparse_.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != n_)
      throw std::invalid_argument("TableOracle: basis state of wrong size");
    sparse_.emplace(basis[i], amplitudes[i]);
  }
}

double TableOracle::value(const BitConfiguration& x) const {
  if (!full_.empty()) return full_[x.to_index()];
  const auto it = sparse_.find(x);
  return it == sparse_.end() ? 0.0 : it->second;
}

SignedLogAmplitude TableOracle::amplitude(const BitConfiguration& x) const {
  return SignedLogAmplitude::from_value(value(x));
}

ComplexTableOracle::ComplexTableOracle(int num_qubits,
                                       std::vector<std::complex<double>> table)
    : n_(num_qubits), table_(std::move(table)) {
  if (n_ < 1 || n_ > 30)
    throw std::invalid_argument("ComplexTableOracle: needs 1 <= n <= 30");
  if (table_.size() != (std::size_t{1} << n_))
    throw std::invalid_argument("ComplexTableOracle: table size must be 2^n");
  if (table_[0] == 0.0)
    throw ZeroAmplitude("ComplexTableOracle: reference amplitude <0^n|psi> is zero");
}

std::complex<double> ComplexTableOracle::ratio_to_reference(
    const BitConfiguration& x) const {
  return table_[x.to_index()] / table_[0];
}

}  // namespace fnmc
