#include "fnmc/metropolis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "fnmc/errors.hpp"

namespace fnmc {

const char* to_string(ProposalMode mode) {
  return mode == ProposalMode::kFromH ? "H" : "F";
}

namespace {

// Edge test given the already computed entry and ratio sign.
bool is_edge(ProposalMode mode, double entry, int ratio_sign) {
  if (std::abs(entry) <= kEntryThreshold) return false;
  if (mode == ProposalMode::kFromH) return true;
  return ratio_sign * (entry > 0 ? 1 : -1) <= 0;  // S-minus survives in F
}

}  // namespace

bool ProposalGraph::contains(const BitConfiguration& x,
                             const BitConfiguration& y) const {
  if (x == y) return false;
  const double entry = h_->matrix_element(y, x);
  if (std::abs(entry) <= kEntryThreshold) return false;
  return is_edge(mode_, entry, psi_->log_ratio(x, y).sign);
}

std::vector<BitConfiguration> ProposalGraph::neighbors(
    const BitConfiguration& x) const {
  std::vector<BitConfiguration> out;
  const auto entries = h_->row(x);
  for (std::size_t k = 1; k < entries.size(); ++k)
    if (is_edge(mode_, entries[k].value,
                psi_->log_ratio(x, entries[k].state).sign))
      out.push_back(entries[k].state);
  return out;
}

std::size_t SwapProposals::size(const BitConfiguration& x) const {
  const auto w = static_cast<std::size_t>(x.hamming_weight());
  return w * (static_cast<std::size_t>(n_) - w);
}

BitConfiguration SwapProposals::propose(const BitConfiguration& x,
                                        RandomSource& rng) const {
  const int w = x.hamming_weight();
  if (w == 0 || w == n_)
    throw std::invalid_argument("swap proposal needs a state with both 0s and 1s");
  auto occupied = static_cast<int>(rng.index(static_cast<std::uint64_t>(w)));
  auto empty = static_cast<int>(rng.index(static_cast<std::uint64_t>(n_ - w)));
  int from = -1, to = -1;
  for (int i = 0; i < n_ && (from < 0 || to < 0); ++i) {
    if (x.test(i)) {
      if (occupied-- == 0) from = i;
    } else if (empty-- == 0) {
      to = i;
    }
  }
  BitConfiguration y = x;
  y.flip(from);
  y.flip(to);
  return y;
}

std::vector<BitConfiguration> SwapProposals::all(const BitConfiguration& x) const {
  std::vector<BitConfiguration> out;
  out.reserve(size(x));
  for (int i = 0; i < n_; ++i) {
    if (!x.test(i)) continue;
    for (int j = 0; j < n_; ++j) {
      if (x.test(j)) continue;
      BitConfiguration y = x;
      y.flip(i);
      y.flip(j);
      out.push_back(y);
    }
  }
  return out;
}

double MetropolisChain::acceptance(const BitConfiguration& x,
                                   const BitConfiguration& y) const {
  const auto r = graph_.oracle().log_ratio(x, y);
  if (r.is_zero()) return 0.0;
  return std::min(1.0, std::exp(2.0 * r.log_abs));
}

bool MetropolisChain::step(BitConfiguration& x, RandomSource& rng) {
  ++stats_.steps;
  const BitConfiguration y = proposals_.propose(x, rng);
  const double u = rng.uniform_open0();

  const double entry = graph_.hamiltonian().matrix_element(y, x);
  const auto r = graph_.oracle().log_ratio(x, y);
  if (!is_edge(graph_.mode(), entry, r.sign)) {
    ++stats_.outside_graph;
    return false;
  }
  if (r.is_zero()) return false;
  // accept iff u <= pi(y)/pi(x), compared in log form
  if (std::log(u) > 2.0 * r.log_abs) return false;
  x = y;
  ++stats_.accepted;
  return true;
}

void MetropolisChain::run_streaming(
    const BitConfiguration& x_in, std::int64_t steps, RandomSource& rng,
    const std::function<void(std::int64_t, const BitConfiguration&)>& visit) {
  if (steps < 1) throw std::invalid_argument("mh run: steps must be >= 1");
  if (graph_.oracle().amplitude(x_in).is_zero())
    throw ZeroAmplitude("mh run: starting state " + x_in.to_string() +
                        " is outside the support");
  BitConfiguration x = x_in;
  for (std::int64_t k = 1; k <= steps; ++k) {
    step(x, rng);
    visit(k, x);
  }
}

std::vector<BitConfiguration> MetropolisChain::run(const BitConfiguration& x_in,
                                                   std::int64_t steps,
                                                   RandomSource& rng) {
  std::vector<BitConfiguration> series;
  series.reserve(static_cast<std::size_t>(std::max<std::int64_t>(steps, 0)));
  run_streaming(x_in, steps, rng,
                [&series](std::int64_t, const BitConfiguration& s) {
                  series.push_back(s);
                });
  return series;
}

std::vector<Entry> MetropolisChain::transition_probabilities(
    const BitConfiguration& x) const {
  const auto candidates = proposals_.all(x);
  const double q = 1.0 / static_cast<double>(candidates.size());
  std::vector<Entry> out{{x, 0.0}};  // self-loop = total rejection mass
  for (const auto& y : candidates) {
    const double a = graph_.contains(x, y) ? acceptance(x, y) : 0.0;
    out.front().value += q * (1.0 - a);
    if (a > 0.0) out.push_back({y, q * a});
  }
  return out;
}

void write_series_csv(std::ostream& os,
                      const std::vector<BitConfiguration>& series,
                      const std::vector<NamedObservable>& observables) {
  os << "step,state";
  for (const auto& o : observables) os << ',' << o.name;
  os << '\n';
  const auto precision = os.precision(17);
  for (std::size_t k = 0; k < series.size(); ++k) {
    os << (k + 1) << ',' << series[k].to_hex();
    for (const auto& o : observables) os << ',' << o.f(series[k]);
    os << '\n';
  }
  os.precision(precision);
}

}  // namespace fnmc
