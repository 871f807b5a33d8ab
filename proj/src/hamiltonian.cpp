#include "fnmc/hamiltonian.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "fnmc/errors.hpp"

namespace fnmc {

PauliTerm::PauliTerm(double coefficient, std::vector<PauliFactor> support)
    : coefficient_(coefficient), support_(std::move(support)) {
  if (!std::isfinite(coefficient_) || coefficient_ == 0.0)
    throw std::invalid_argument("PauliTerm: coefficient must be finite and nonzero");
  for (std::size_t k = 0; k < support_.size(); ++k) {
    const auto& f = support_[k];
    if (f.site < 0)
      throw std::invalid_argument("PauliTerm: negative site index");
    if (k > 0 && f.site <= support_[k - 1].site)
      throw std::invalid_argument("PauliTerm: support sites must be strictly increasing");
    if (f.label != Pauli::X && f.label != Pauli::Y && f.label != Pauli::Z)
      throw std::invalid_argument("PauliTerm: label must be X, Y or Z");
    if (f.label == Pauli::Y) ++y_count_;
  }
}

SparseHamiltonian::SparseHamiltonian(int num_qubits, std::vector<PauliTerm> terms)
    : n_(num_qubits), terms_(std::move(terms)) {
  if (n_ < 1 || n_ > BitConfiguration::kMaxQubits)
    throw std::invalid_argument("SparseHamiltonian: qubit count out of range");
  groups_.push_back(Group{BitConfiguration(n_), {}});
  group_index_.emplace(BitConfiguration(n_), 0);

  static constexpr std::complex<double> kIPowers[4] = {
      {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& t : terms_) {
    if (t.max_site() >= n_)
      throw std::invalid_argument("SparseHamiltonian: term acts on site >= n");
    BitConfiguration flip(n_), phase(n_);
    for (const auto& f : t.support()) {
      if (f.label != Pauli::Z) flip.set(f.site);
      if (f.label != Pauli::X) phase.set(f.site);
    }
    if (t.y_count() % 2 != 0) real_ = false;
    locality_ = std::max(locality_, static_cast<int>(t.support().size()));
    norm_bound_ += std::abs(t.coefficient());

    auto [it, inserted] = group_index_.emplace(flip, groups_.size());
    if (inserted) groups_.push_back(Group{flip, {}});
    groups_[it->second].terms.push_back(
        CompiledTerm{phase, t.coefficient() * kIPowers[t.y_count() % 4]});
  }
}

SparseHamiltonian SparseHamiltonian::from_json(int num_qubits,
                                               const nlohmann::json& j) {
  if (!j.is_array())
    throw std::invalid_argument("term list: expected a JSON array");
  std::vector<PauliTerm> terms;
  for (const auto& item : j) {
    const double coeff = item.at("coeff").get<double>();
    std::vector<PauliFactor> support;
    for (const auto& p : item.at("paulis")) {
      const int site = p.at(0).get<int>();
      const std::string label = p.at(1).get<std::string>();
      if (label != "X" && label != "Y" && label != "Z")
        throw std::invalid_argument("term list: bad Pauli label \"" + label + "\"");
      support.push_back(PauliFactor{site, static_cast<Pauli>(label[0])});
    }
    terms.emplace_back(coeff, std::move(support));
  }
  return SparseHamiltonian(num_qubits, std::move(terms));
}

nlohmann::json SparseHamiltonian::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : terms_) {
    nlohmann::json paulis = nlohmann::json::array();
    for (const auto& f : t.support())
      paulis.push_back({f.site, std::string(1, static_cast<char>(f.label))});
    out.push_back({{"coeff", t.coefficient()}, {"paulis", paulis}});
  }
  return out;
}

void SparseHamiltonian::require_real() const {
  if (!real_)
    throw InvalidHamiltonian(
        "Hamiltonian has terms with an odd number of Y factors; use "
        "real_embedding() first");
}

std::complex<double> SparseHamiltonian::group_value(
    const Group& g, const BitConfiguration& x) const noexcept {
  std::complex<double> v = 0.0;
  for (const auto& t : g.terms)
    v += x.parity_with(t.phase_mask) ? -t.factor : t.factor;
  return v;
}

std::vector<Entry> SparseHamiltonian::row(const BitConfiguration& x) const {
  require_real();
  std::vector<Entry> out;
  out.reserve(groups_.size());
  out.push_back(Entry{x, group_value(groups_[0], x).real()});
  for (std::size_t g = 1; g < groups_.size(); ++g) {
    const double v = group_value(groups_[g], x).real();
    if (std::abs(v) > kEntryThreshold) out.push_back(Entry{x ^ groups_[g].flip, v});
  }
  return out;
}

double SparseHamiltonian::matrix_element(const BitConfiguration& y,
                                         const BitConfiguration& x) const {
  require_real();
  const double v = complex_matrix_element(y, x).real();
  return (x != y && std::abs(v) <= kEntryThreshold) ? 0.0 : v;
}

std::vector<ComplexEntry> SparseHamiltonian::complex_row(
    const BitConfiguration& x) const {
  std::vector<ComplexEntry> out;
  out.reserve(groups_.size());
  out.push_back(ComplexEntry{x, group_value(groups_[0], x)});
  for (std::size_t g = 1; g < groups_.size(); ++g) {
    const auto v = group_value(groups_[g], x);
    if (std::abs(v) > kEntryThreshold)
      out.push_back(ComplexEntry{x ^ groups_[g].flip, v});
  }
  return out;
}

std::complex<double> SparseHamiltonian::complex_matrix_element(
    const BitConfiguration& y, const BitConfiguration& x) const {
  const auto it = group_index_.find(x ^ y);
  if (it == group_index_.end()) return 0.0;
  return group_value(groups_[it->second], x);
}

double norm_bound(const RowOperator& h) { return h.norm_bound(); }

StoquasticityResult is_stoquastic(const RowOperator& h, const StateFilter& sector,
                                  std::uint64_t state_cap) {
  StoquasticityResult result{StoquasticityResult::Verdict::kStoquastic, {}, 0};
  const int n = h.num_qubits();
  if (n >= 64) {
    result.verdict = StoquasticityResult::Verdict::kUndecidedAtCap;
    return result;
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    const BitConfiguration x(n, idx);
    if (sector && !sector(x)) continue;
    if (++result.states_checked > state_cap) {
      result.verdict = StoquasticityResult::Verdict::kUndecidedAtCap;
      result.states_checked = state_cap;
      return result;
    }
    const auto entries = h.row(x);
    for (std::size_t k = 1; k < entries.size(); ++k) {
      const auto& e = entries[k];
      if (sector && !sector(e.state)) continue;
      if (e.value > kEntryThreshold) {
        result.verdict = StoquasticityResult::Verdict::kNotStoquastic;
        result.witness = StoquasticityWitness{x, e.state, e.value};
        return result;
      }
    }
  }
  return result;
}

std::ostream& operator<<(std::ostream& os, Pauli p) {
  return os << static_cast<char>(p);
}

}  // namespace fnmc
