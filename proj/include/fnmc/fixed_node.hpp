#pragma once

#include <cstdint>
#include <list>
#include <unordered_map>
#include <vector>

#include "fnmc/amplitude.hpp"
#include "fnmc/hamiltonian.hpp"

namespace fnmc {

/// Classification of an ordered pair (x, y) by the sign of
/// <psi|x><x|H|y><y|psi>.
enum class SignClass {
  kSPlus,     // x != y, entry nonzero, product > 0: removed by fixed-node
  kSMinus,    // x != y, entry nonzero, product <= 0: kept
  kDiagonal,  // x == y
  kAbsent,    // entry numerically zero
};

/// A zero amplitude at x throws ZeroAmplitude; a zero amplitude at y makes the
/// product zero and the pair S-minus.
SignClass classify(const RowOperator& h, const AmplitudeOracle& psi,
                   const BitConfiguration& x, const BitConfiguration& y);

/// Local energy sum_y <x|H|y> <y|psi>/<x|psi>; equals the ground energy at
/// every x when psi is the ground state.
double ground_energy(const RowOperator& h, const AmplitudeOracle& psi,
                     const BitConfiguration& x_ref);

/// Column x of the fixed-node Hamiltonian F: S-plus entries dropped, S-minus
/// entries copied from H, and the diagonal shifted by the dropped
/// contributions <x|H|z><z|psi>/<x|psi>. Diagonal entry first.
std::vector<Entry> fixed_node_row(const RowOperator& h,
                                  const AmplitudeOracle& psi,
                                  const BitConfiguration& x);

struct Rate {
  BitConfiguration target;
  double rate;
};

/// Outgoing column of the generator G at `source`.
struct GeneratorRates {
  BitConfiguration source;
  std::vector<Rate> outgoing;  // all rates > 0
  double total_rate = 0.0;     // sum of outgoing = -<x|G|x>
  double lambda1 = 0.0;
};

/// Rates x -> y = max{0, -<y|H|x> <y|psi>/<x|psi>}.
///
/// The total is cross-checked against <x|F|x> - lambda1; a mismatch beyond
/// 1e-9 (relative to the magnitudes summed) throws OracleInconsistency.
/// Rates below 1e-14 * total are dropped.
GeneratorRates generator_rates(const RowOperator& h, const AmplitudeOracle& psi,
                               double lambda1, const BitConfiguration& x);

struct FixedNodeOptions {
  std::size_t cache_capacity = 1 << 16;  // 0 disables caching
  int self_check_states = 3;
  double self_check_tolerance = 1e-8;
  std::uint64_t self_check_seed = 0x5eed;
};

/// Fixed-node continuous-time chain built from (H, psi): caches the ground
/// energy and, optionally, recently used rate lists.
///
/// Instances are not thread safe; give each thread its own fork().
class FixedNodeChain {
 public:
  using Options = FixedNodeOptions;

  /// Computes lambda1 from `reference` and re-checks it at a few support
  /// states reached by a short random walk over H's connectivity.
  FixedNodeChain(const RowOperator& h, const AmplitudeOracle& psi,
                 const BitConfiguration& reference);
  FixedNodeChain(const RowOperator& h, const AmplitudeOracle& psi,
                 const BitConfiguration& reference, Options options);
  /// Uses a known ground energy; no self-check.
  FixedNodeChain(const RowOperator& h, const AmplitudeOracle& psi,
                 double lambda1, Options options = {});

  FixedNodeChain(const FixedNodeChain&) = delete;
  FixedNodeChain& operator=(const FixedNodeChain&) = delete;
  FixedNodeChain(FixedNodeChain&&) noexcept = default;
  FixedNodeChain& operator=(FixedNodeChain&&) noexcept = default;

  /// Same operator, oracle and lambda1, empty cache.
  FixedNodeChain fork() const;

  double lambda1() const noexcept { return lambda1_; }
  const RowOperator& hamiltonian() const noexcept { return *h_; }
  const AmplitudeOracle& oracle() const noexcept { return *psi_; }
  int num_qubits() const { return h_->num_qubits(); }

  /// The returned reference stays valid until the next call.
  const GeneratorRates& rates(const BitConfiguration& x);

  std::uint64_t cache_hits() const noexcept { return hits_; }
  std::uint64_t cache_misses() const noexcept { return misses_; }

 private:
  void self_check(const BitConfiguration& reference);

  const RowOperator* h_;
  const AmplitudeOracle* psi_;
  double lambda1_;
  Options options_;

  std::list<GeneratorRates> lru_;
  std::unordered_map<BitConfiguration, std::list<GeneratorRates>::iterator,
                     BitConfigurationHash>
      index_;
  GeneratorRates scratch_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

}  // namespace fnmc
