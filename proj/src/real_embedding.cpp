#include "fnmc/real_embedding.hpp"

#include <cmath>
#include <stdexcept>

#include "fnmc/errors.hpp"

namespace fnmc {

namespace {

BitConfiguration strip_ancilla(const BitConfiguration& x, int n) {
  BitConfiguration out(n);
  for (int i = 0; i < n; ++i)
    if (x.test(i)) out.set(i);
  return out;
}

BitConfiguration with_ancilla(const BitConfiguration& x, int n, int a) {
  BitConfiguration out(n + 1);
  for (int i = 0; i < n; ++i)
    if (x.test(i)) out.set(i);
  if (a) out.set(n);
  return out;
}

void accumulate(std::vector<Entry>& entries, const BitConfiguration& y,
                double v) {
  for (auto& e : entries)
    if (e.state == y) {
      e.value += v;
      return;
    }
  entries.push_back(Entry{y, v});
}

}  // namespace

EmbeddedHamiltonian::EmbeddedHamiltonian(const SparseHamiltonian& h,
                                         const ComplexAmplitudeOracle& oracle)
    : h_(h), oracle_(oracle) {
  if (h.num_qubits() != oracle.num_qubits())
    throw std::invalid_argument("real_embedding: oracle/Hamiltonian size mismatch");
  if (h.num_qubits() + 1 > BitConfiguration::kMaxQubits)
    throw std::invalid_argument("real_embedding: no room for the ancilla qubit");
}

double EmbeddedHamiltonian::theta(const BitConfiguration& x) const {
  const auto r = oracle_.ratio_to_reference(x);
  if (r == 0.0)
    throw ZeroAmplitude("real_embedding: zero amplitude at " + x.to_string());
  return std::atan2(r.imag(), r.real());
}

std::vector<Entry> EmbeddedHamiltonian::row(const BitConfiguration& xa) const {
  const int n = h_.num_qubits();
  const int a = xa.test(n) ? 1 : 0;
  const BitConfiguration x = strip_ancilla(xa, n);

  std::vector<Entry> entries;
  entries.push_back(Entry{xa, 0.0});

  // A (x) I + K (x) J with J|0> = |1>, J|1> = -|0>
  for (const auto& e : h_.complex_row(x)) {
    accumulate(entries, with_ancilla(e.state, n, a), e.value.real());
    if (e.value.imag() != 0.0)
      accumulate(entries, with_ancilla(e.state, n, 1 - a),
                 a == 0 ? e.value.imag() : -e.value.imag());
  }

  const double th = theta(x);
  const double v[2] = {-std::sin(th), std::cos(th)};
  accumulate(entries, xa, v[a] * v[a]);
  accumulate(entries, with_ancilla(x, n, 1 - a), v[a] * v[1 - a]);

  std::vector<Entry> out;
  out.reserve(entries.size());
  out.push_back(entries.front());
  for (std::size_t k = 1; k < entries.size(); ++k)
    if (std::abs(entries[k].value) > kEntryThreshold) out.push_back(entries[k]);
  return out;
}

double EmbeddedHamiltonian::matrix_element(const BitConfiguration& y,
                                           const BitConfiguration& x) const {
  for (const auto& e : row(x))
    if (e.state == y) return e.value;
  return 0.0;
}

SignedLogAmplitude EmbeddedOracle::amplitude(const BitConfiguration& xa) const {
  const int n = oracle_.num_qubits();
  const auto r = oracle_.ratio_to_reference(strip_ancilla(xa, n));
  return SignedLogAmplitude::from_value(xa.test(n) ? r.imag() : r.real());
}

RealEmbedding real_embedding(const SparseHamiltonian& h,
                             const ComplexAmplitudeOracle& oracle) {
  return RealEmbedding{EmbeddedHamiltonian(h, oracle), EmbeddedOracle(oracle)};
}

}  // namespace fnmc
