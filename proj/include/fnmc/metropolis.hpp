#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fnmc/amplitude.hpp"
#include "fnmc/bits.hpp"
#include "fnmc/hamiltonian.hpp"
#include "fnmc/random.hpp"

namespace fnmc {

/// Which operator's nonzero off-diagonal pattern defines the transition graph.
enum class ProposalMode { kFromH, kFromF };

const char* to_string(ProposalMode mode);

/// Neighbourhood N(x) induced by H, or by the fixed-node F built from psi.
/// Symmetric in (x, y); the F graph is a subgraph of the H graph.
class ProposalGraph {
 public:
  ProposalGraph(const RowOperator& h, const AmplitudeOracle& psi,
                ProposalMode mode)
      : h_(&h), psi_(&psi), mode_(mode) {}

  ProposalMode mode() const noexcept { return mode_; }
  const RowOperator& hamiltonian() const noexcept { return *h_; }
  const AmplitudeOracle& oracle() const noexcept { return *psi_; }

  /// y in N(x); x must have nonzero amplitude. Neighbours with zero amplitude
  /// count as edges (they are S-minus) but are never accepted.
  bool contains(const BitConfiguration& x, const BitConfiguration& y) const;
  std::vector<BitConfiguration> neighbors(const BitConfiguration& x) const;

 private:
  const RowOperator* h_;
  const AmplitudeOracle* psi_;
  ProposalMode mode_;
};

/// State-independent proposal: exchange one occupied and one empty site, all
/// w (n - w) pairs equally likely for a state of weight w. Q is symmetric.
class SwapProposals {
 public:
  explicit SwapProposals(int num_qubits) : n_(num_qubits) {}

  BitConfiguration propose(const BitConfiguration& x, RandomSource& rng) const;
  /// Every proposal from x, each with probability 1 / size(x).
  std::vector<BitConfiguration> all(const BitConfiguration& x) const;
  std::size_t size(const BitConfiguration& x) const;

 private:
  int n_;
};

struct MetropolisStats {
  std::int64_t steps = 0;
  std::int64_t accepted = 0;
  std::int64_t outside_graph = 0;  // proposals rejected by the graph filter

  double acceptance_rate() const {
    return steps ? static_cast<double>(accepted) / static_cast<double>(steps)
                 : 0.0;
  }
};

/// Discrete-time Metropolis-Hastings chain targeting pi = |psi|^2.
///
/// Each step draws a swap proposal, rejects it outright if it is not an edge
/// of the chosen graph, and otherwise accepts with min{1, pi(y)/pi(x)}
/// evaluated from the oracle's log ratio.
class MetropolisChain {
 public:
  MetropolisChain(const RowOperator& h, const AmplitudeOracle& psi,
                  ProposalMode mode)
      : graph_(h, psi, mode), proposals_(h.num_qubits()) {}

  const ProposalGraph& graph() const noexcept { return graph_; }
  const MetropolisStats& stats() const noexcept { return stats_; }

  /// Acceptance probability of the move x -> y given that it was proposed.
  double acceptance(const BitConfiguration& x, const BitConfiguration& y) const;

  /// Advances x by one step; returns true if the proposal was accepted.
  bool step(BitConfiguration& x, RandomSource& rng);

  /// Calls visit(k, state) after each step k = 1..steps.
  void run_streaming(
      const BitConfiguration& x_in, std::int64_t steps, RandomSource& rng,
      const std::function<void(std::int64_t, const BitConfiguration&)>& visit);
  /// States after each of `steps` steps (repeats on rejection).
  std::vector<BitConfiguration> run(const BitConfiguration& x_in,
                                    std::int64_t steps, RandomSource& rng);

  /// Row x of the exact one-step transition matrix, self-loop first.
  std::vector<Entry> transition_probabilities(const BitConfiguration& x) const;

 private:
  ProposalGraph graph_;
  SwapProposals proposals_;
  MetropolisStats stats_;
};

struct NamedObservable {
  std::string name;
  std::function<double(const BitConfiguration&)> f;
};

/// CSV with header step,state,<names...>; state in hex, steps from 1.
void write_series_csv(std::ostream& os,
                      const std::vector<BitConfiguration>& series,
                      const std::vector<NamedObservable>& observables);

}  // namespace fnmc
