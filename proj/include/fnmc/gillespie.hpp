#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "fnmc/bits.hpp"
#include "fnmc/fixed_node.hpp"
#include "fnmc/random.hpp"

namespace fnmc {

struct Segment {
  BitConfiguration state;
  double holding_time;
};

/// Piecewise-constant path of the chain on [0, total_time]. Segment k occupies
/// [start_k, start_k + holding_time_k); the last segment is clipped at
/// total_time.
struct Trajectory {
  std::vector<Segment> segments;
  double total_time = 0.0;
  std::int64_t flips = 0;
  bool truncated = false;  // cut short by the flip cutoff
  std::uint64_t seed = 0;

  const BitConfiguration& initial_state() const { return segments.front().state; }
  const BitConfiguration& final_state() const { return segments.back().state; }
  /// State at time s, right-continuous: at a jump time the new state.
  const BitConfiguration& state_at(double s) const;
};

struct Step {
  double delta_tau;
  BitConfiguration next_state;
};

/// Holding time log(1/u)/total_rate for u in (0, 1].
double holding_time(double total_rate, double u);
/// Target k with cumulative rate sum_{j<=k} rate_j > u * total (inverse CDF).
const BitConfiguration& choose_target(const GeneratorRates& rates, double u);

/// One Gillespie event: exponential holding time, then a jump chosen in
/// proportion to the outgoing rates. Throws AbsorbingState if total_rate = 0.
Step step(const GeneratorRates& rates, RandomSource& rng);

/// Called once per segment with (state, start time, holding time).
using SegmentVisitor =
    std::function<void(const BitConfiguration&, double, double)>;

struct RunSummary {
  BitConfiguration final_state;
  double total_time = 0.0;   // time reached (t unless truncated)
  std::int64_t flips = 0;
  bool truncated = false;
};

/// Core event loop shared by run() and run_truncated(). With `max_flips`
/// set, the run stops (truncated = true) when one more flip than allowed
/// would be needed before time t.
RunSummary run_streaming(FixedNodeChain& chain, const BitConfiguration& x_in,
                         double t, RandomSource& rng,
                         const SegmentVisitor& visitor,
                         std::optional<std::int64_t> max_flips = std::nullopt);

/// Simulates the chain for time t and returns the whole path.
Trajectory run(FixedNodeChain& chain, const BitConfiguration& x_in, double t,
               RandomSource& rng);

/// Outcome of a truncated run that exceeded its flip cutoff.
struct ErrorDeclared {
  std::int64_t flips;  // flips performed before the aborted one
  std::int64_t cutoff;
  double time_reached;
  Trajectory partial;
};

using TruncatedOutcome = std::variant<Trajectory, ErrorDeclared>;

/// ceil(4 t maxdeg(H) norm_bound(H) / epsilon).
std::int64_t truncation_cutoff(const RowOperator& h, double t, double epsilon);

/// Gillespie run that declares an error once the flip count would exceed
/// truncation_cutoff(H, t, epsilon).
TruncatedOutcome run_truncated(FixedNodeChain& chain,
                               const BitConfiguration& x_in, double t,
                               double epsilon, RandomSource& rng);
TruncatedOutcome run_truncated_with_cutoff(FixedNodeChain& chain,
                                           const BitConfiguration& x_in,
                                           double t, std::int64_t cutoff,
                                           RandomSource& rng);

struct StartVerification {
  double estimate;  // fraction of runs that declared an error
  bool accepted;    // estimate <= epsilon / 4
  std::int64_t repetitions;
};

/// Estimates the error probability of the truncated sampler from x.
/// repetitions = 0 selects ceil(16 / epsilon^2).
StartVerification verify_start_state(FixedNodeChain& chain,
                                     const BitConfiguration& x, double epsilon,
                                     double t, std::int64_t repetitions,
                                     RandomSource& rng);

using Observable = std::function<double(const BitConfiguration&)>;

/// (1/(T - tau0)) * integral over (tau0, T] of f(xi(s)) ds, computed exactly.
double time_average(const Trajectory& traj, const Observable& f, double tau0);

/// JSON lines: one {"state","dt"} record per segment, then a summary record
/// {"total_time","flips","truncated","seed"}.
void write_trajectory_jsonl(std::ostream& os, const Trajectory& traj);

}  // namespace fnmc
