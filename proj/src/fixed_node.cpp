#include "fnmc/fixed_node.hpp"

#include <cmath>
#include <sstream>

#include "fnmc/errors.hpp"
#include "fnmc/random.hpp"

namespace fnmc {

namespace {

void require_support(const AmplitudeOracle& psi, const BitConfiguration& x) {
  if (psi.amplitude(x).is_zero())
    throw ZeroAmplitude("state " + x.to_string() +
                        " has zero ground-state amplitude");
}

}  // namespace

SignClass classify(const RowOperator& h, const AmplitudeOracle& psi,
                   const BitConfiguration& x, const BitConfiguration& y) {
  if (x == y) return SignClass::kDiagonal;
  const double entry = h.matrix_element(x, y);
  if (std::abs(entry) <= kEntryThreshold) return SignClass::kAbsent;
  require_support(psi, x);
  const auto r = psi.log_ratio(x, y);
  const int product = r.sign * (entry > 0 ? 1 : -1);
  return product > 0 ? SignClass::kSPlus : SignClass::kSMinus;
}

double ground_energy(const RowOperator& h, const AmplitudeOracle& psi,
                     const BitConfiguration& x_ref) {
  require_support(psi, x_ref);
  const auto entries = h.row(x_ref);
  double e = entries.front().value;
  for (std::size_t k = 1; k < entries.size(); ++k)
    e += entries[k].value * psi.log_ratio(x_ref, entries[k].state).value();
  return e;
}

std::vector<Entry> fixed_node_row(const RowOperator& h,
                                  const AmplitudeOracle& psi,
                                  const BitConfiguration& x) {
  require_support(psi, x);
  const auto entries = h.row(x);
  std::vector<Entry> out;
  out.reserve(entries.size());
  out.push_back(entries.front());
  for (std::size_t k = 1; k < entries.size(); ++k) {
    const auto& e = entries[k];
    const double r = psi.log_ratio(x, e.state).value();
    if (e.value * r > 0)
      out.front().value += e.value * r;
    else
      out.push_back(e);
  }
  return out;
}

GeneratorRates generator_rates(const RowOperator& h, const AmplitudeOracle& psi,
                               double lambda1, const BitConfiguration& x) {
  require_support(psi, x);
  const auto entries = h.row(x);

  GeneratorRates g;
  g.source = x;
  g.lambda1 = lambda1;
  g.outgoing.reserve(entries.size());

  const double diag_h = entries.front().value;
  double diag_f = diag_h;
  double scale = std::abs(diag_h) + std::abs(lambda1);
  double total = 0.0;
  for (std::size_t k = 1; k < entries.size(); ++k) {
    const auto& e = entries[k];
    const double c = e.value * psi.log_ratio(x, e.state).value();
    scale += std::abs(c);
    if (c > 0) {
      diag_f += c;  // S-plus: moved onto the diagonal
    } else if (c < 0) {
      g.outgoing.push_back(Rate{e.state, -c});
      total += -c;
    }
  }

  const double via_diagonal = diag_f - lambda1;
  if (std::abs(via_diagonal - total) > 1e-9 * std::max(1.0, scale)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "generator rates at " << x.to_string() << ": escape rate " << total
        << " disagrees with <x|F|x> - lambda1 = " << via_diagonal
        << " (wrong ground energy or oracle is not an eigenvector)";
    throw OracleInconsistency(msg.str());
  }

  const double floor = 1e-14 * total;
  std::erase_if(g.outgoing, [floor](const Rate& r) { return r.rate < floor; });
  g.total_rate = 0.0;
  for (const auto& r : g.outgoing) g.total_rate += r.rate;
  return g;
}

FixedNodeChain::FixedNodeChain(const RowOperator& h, const AmplitudeOracle& psi,
                               const BitConfiguration& reference)
    : FixedNodeChain(h, psi, reference, Options{}) {}

FixedNodeChain::FixedNodeChain(const RowOperator& h, const AmplitudeOracle& psi,
                               const BitConfiguration& reference, Options options)
    : h_(&h), psi_(&psi), lambda1_(ground_energy(h, psi, reference)),
      options_(options) {
  self_check(reference);
}

FixedNodeChain::FixedNodeChain(const RowOperator& h, const AmplitudeOracle& psi,
                               double lambda1, Options options)
    : h_(&h), psi_(&psi), lambda1_(lambda1), options_(options) {}

FixedNodeChain FixedNodeChain::fork() const {
  return FixedNodeChain(*h_, *psi_, lambda1_, options_);
}

void FixedNodeChain::self_check(const BitConfiguration& reference) {
  RandomSource rng(options_.self_check_seed);
  BitConfiguration x = reference;
  for (int check = 0; check < options_.self_check_states; ++check) {
    // a few steps of a walk restricted to nonzero amplitudes
    for (int step = 0; step < 4; ++step) {
      const auto entries = h_->row(x);
      std::vector<BitConfiguration> next;
      for (std::size_t k = 1; k < entries.size(); ++k)
        if (!psi_->amplitude(entries[k].state).is_zero())
          next.push_back(entries[k].state);
      if (next.empty()) break;
      x = next[rng.index(next.size())];
    }
    const double e = ground_energy(*h_, *psi_, x);
    if (std::abs(e - lambda1_) >
        options_.self_check_tolerance * std::max(1.0, std::abs(lambda1_))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "ground energy self-check failed: " << lambda1_ << " at "
          << reference.to_string() << " vs " << e << " at " << x.to_string();
      throw OracleInconsistency(msg.str());
    }
  }
}

const GeneratorRates& FixedNodeChain::rates(const BitConfiguration& x) {
  if (options_.cache_capacity == 0) {
    ++misses_;
    scratch_ = generator_rates(*h_, *psi_, lambda1_, x);
    return scratch_;
  }
  if (auto it = index_.find(x); it != index_.end()) {
    ++hits_;
    lru_.splice(lru_.begin(), lru_, it->second);
    return *it->second;
  }
  ++misses_;
  if (lru_.size() >= options_.cache_capacity) {
    index_.erase(lru_.back().source);
    lru_.pop_back();
  }
  lru_.push_front(generator_rates(*h_, *psi_, lambda1_, x));
  index_.emplace(x, lru_.begin());
  return lru_.front();
}

}  // namespace fnmc
