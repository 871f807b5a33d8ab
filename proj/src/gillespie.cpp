#include "fnmc/gillespie.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

#include "fnmc/errors.hpp"

namespace fnmc {

const BitConfiguration& Trajectory::state_at(double s) const {
  if (segments.empty()) throw std::logic_error("empty trajectory");
  double start = 0.0;
  for (const auto& seg : segments) {
    if (s < start + seg.holding_time) return seg.state;
    start += seg.holding_time;
  }
  return segments.back().state;
}

double holding_time(double total_rate, double u) {
  return std::log(1.0 / u) / total_rate;
}

const BitConfiguration& choose_target(const GeneratorRates& rates, double u) {
  const double threshold = u * rates.total_rate;
  double cumulative = 0.0;
  for (const auto& r : rates.outgoing) {
    cumulative += r.rate;
    if (cumulative > threshold) return r.target;
  }
  return rates.outgoing.back().target;  // rounding at u -> 1
}

namespace {

void require_escape(const GeneratorRates& rates) {
  if (!(rates.total_rate > 0.0) || rates.outgoing.empty())
    throw AbsorbingState("state " + rates.source.to_string() +
                         " has zero escape rate");
}

}  // namespace

Step step(const GeneratorRates& rates, RandomSource& rng) {
  require_escape(rates);
  const double dt = holding_time(rates.total_rate, rng.uniform_open0());
  return Step{dt, choose_target(rates, rng.uniform())};
}

RunSummary run_streaming(FixedNodeChain& chain, const BitConfiguration& x_in,
                         double t, RandomSource& rng,
                         const SegmentVisitor& visitor,
                         std::optional<std::int64_t> max_flips) {
  if (!(t >= 0.0)) throw std::invalid_argument("run: evolution time must be >= 0");
  if (chain.oracle().amplitude(x_in).is_zero())
    throw ZeroAmplitude("run: starting state " + x_in.to_string() +
                        " is outside the support");

  RunSummary out{x_in, 0.0, 0, false};
  if (t == 0.0) {
    if (visitor) visitor(x_in, 0.0, 0.0);
    return out;
  }

  BitConfiguration x = x_in;
  double tau = 0.0;
  for (;;) {
    const GeneratorRates& rates = chain.rates(x);
    require_escape(rates);
    const double dt = holding_time(rates.total_rate, rng.uniform_open0());
    if (tau + dt >= t) {
      if (visitor) visitor(x, tau, t - tau);
      out.final_state = x;
      out.total_time = t;
      return out;
    }
    if (visitor) visitor(x, tau, dt);
    tau += dt;
    if (max_flips && out.flips >= *max_flips) {
      out.final_state = x;
      out.total_time = tau;
      out.truncated = true;
      return out;
    }
    x = choose_target(rates, rng.uniform());
    ++out.flips;
  }
}

Trajectory run(FixedNodeChain& chain, const BitConfiguration& x_in, double t,
               RandomSource& rng) {
  Trajectory traj;
  traj.seed = rng.seed();
  const auto summary = run_streaming(
      chain, x_in, t, rng, [&traj](const BitConfiguration& s, double, double dt) {
        traj.segments.push_back(Segment{s, dt});
      });
  traj.total_time = summary.total_time;
  traj.flips = summary.flips;
  return traj;
}

std::int64_t truncation_cutoff(const RowOperator& h, double t, double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("truncation_cutoff: epsilon must be positive");
  if (!(t >= 0.0))
    throw std::invalid_argument("truncation_cutoff: t must be >= 0");
  const double c = 4.0 * t * h.max_row_degree() * h.norm_bound() / epsilon;
  return static_cast<std::int64_t>(std::ceil(c));
}

TruncatedOutcome run_truncated_with_cutoff(FixedNodeChain& chain,
                                           const BitConfiguration& x_in,
                                           double t, std::int64_t cutoff,
                                           RandomSource& rng) {
  if (cutoff < 0) throw std::invalid_argument("run_truncated: negative cutoff");
  Trajectory traj;
  traj.seed = rng.seed();
  const auto summary = run_streaming(
      chain, x_in, t, rng,
      [&traj](const BitConfiguration& s, double, double dt) {
        traj.segments.push_back(Segment{s, dt});
      },
      cutoff);
  traj.total_time = summary.total_time;
  traj.flips = summary.flips;
  traj.truncated = summary.truncated;
  if (summary.truncated)
    return ErrorDeclared{summary.flips, cutoff, summary.total_time,
                         std::move(traj)};
  return traj;
}

TruncatedOutcome run_truncated(FixedNodeChain& chain,
                               const BitConfiguration& x_in, double t,
                               double epsilon, RandomSource& rng) {
  return run_truncated_with_cutoff(
      chain, x_in, t, truncation_cutoff(chain.hamiltonian(), t, epsilon), rng);
}

StartVerification verify_start_state(FixedNodeChain& chain,
                                     const BitConfiguration& x, double epsilon,
                                     double t, std::int64_t repetitions,
                                     RandomSource& rng) {
  if (repetitions <= 0)
    repetitions = static_cast<std::int64_t>(std::ceil(16.0 / (epsilon * epsilon)));
  const auto cutoff = truncation_cutoff(chain.hamiltonian(), t, epsilon);
  std::int64_t errors = 0;
  for (std::int64_t k = 0; k < repetitions; ++k)
    if (run_streaming(chain, x, t, rng, {}, cutoff).truncated) ++errors;
  const double estimate =
      static_cast<double>(errors) / static_cast<double>(repetitions);
  return StartVerification{estimate, estimate <= epsilon / 4.0, repetitions};
}

double time_average(const Trajectory& traj, const Observable& f, double tau0) {
  if (!(tau0 < traj.total_time))
    throw std::invalid_argument("time_average: tau0 must be below the total time");
  double integral = 0.0;
  double start = 0.0;
  for (const auto& seg : traj.segments) {
    const double end = start + seg.holding_time;
    const double lo = std::max(start, tau0);
    const double hi = std::min(end, traj.total_time);
    if (hi > lo) integral += f(seg.state) * (hi - lo);
    start = end;
  }
  return integral / (traj.total_time - tau0);
}

void write_trajectory_jsonl(std::ostream& os, const Trajectory& traj) {
  for (const auto& seg : traj.segments)
    os << nlohmann::ordered_json{{"state", seg.state.to_hex()}, {"dt", seg.holding_time}}
              .dump()
       << '\n';
  os << nlohmann::ordered_json{{"total_time", traj.total_time},
                       {"flips", traj.flips},
                       {"truncated", traj.truncated},
                       {"seed", traj.seed}}
            .dump()
     << '\n';
}

}  // namespace fnmc
