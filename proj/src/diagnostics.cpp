#include "fnmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace fnmc {

namespace {

std::size_t grid_length(double h, double tau0, double total_time) {
  if (!(h > 0.0)) throw std::invalid_argument("discretize: h must be positive");
  if (!(tau0 >= 0.0)) throw std::invalid_argument("discretize: tau0 must be >= 0");
  if (!(h < total_time - tau0))
    throw std::invalid_argument("discretize: h must be smaller than T - tau0");
  return static_cast<std::size_t>(std::floor((total_time - tau0) / h));
}

}  // namespace

DiscreteSeries discretize(const Trajectory& traj, const Observable& f, double h,
                          double tau0) {
  const std::size_t n = grid_length(h, tau0, traj.total_time);
  std::vector<double> starts;
  starts.reserve(traj.segments.size());
  double t = 0.0;
  for (const auto& seg : traj.segments) {
    starts.push_back(t);
    t += seg.holding_time;
  }
  DiscreteSeries out{{}, h, tau0, "ctmc"};
  out.values.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = tau0 + static_cast<double>(j) * h;
    // last segment whose start is <= s
    const auto it = std::upper_bound(starts.begin(), starts.end(), s);
    const auto k = static_cast<std::size_t>(std::distance(starts.begin(), it)) - 1;
    out.values.push_back(f(traj.segments[k].state));
  }
  return out;
}

StreamingDiscretizer::StreamingDiscretizer(Observable f, double h, double tau0,
                                           double total_time)
    : f_(std::move(f)), length_(grid_length(h, tau0, total_time)) {
  series_.h = h;
  series_.tau0 = tau0;
  series_.source = "ctmc";
  series_.values.reserve(length_);
}

void StreamingDiscretizer::operator()(const BitConfiguration& state,
                                      double start, double dt) {
  const double end = start + dt;
  double value = 0.0;
  bool evaluated = false;
  while (series_.values.size() < length_) {
    const double s =
        series_.tau0 + static_cast<double>(series_.values.size()) * series_.h;
    if (s >= end) break;
    if (!evaluated) {
      value = f_(state);
      evaluated = true;
    }
    series_.values.push_back(value);
  }
}

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean: empty series");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("sample_variance: need >= 2 values");
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return acc / static_cast<double>(x.size() - 1);
}

TauEstimate tau_integrated(std::span<const double> series, double c) {
  const std::size_t n = series.size();
  if (n < 16) throw std::invalid_argument("tau_integrated: need >= 16 values");
  if (!(c > 0.0)) throw std::invalid_argument("tau_integrated: c must be positive");

  const double m = mean(series);
  std::size_t padded = 1;
  while (padded < 2 * n) padded <<= 1;
  std::vector<double> centered(padded, 0.0);
  for (std::size_t k = 0; k < n; ++k) centered[k] = series[k] - m;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, centered);
  for (auto& z : spectrum) z = std::norm(z);
  std::vector<double> acov;
  fft.inv(acov, spectrum);

  if (!(acov[0] > 0.0) || acov[0] <= 1e-300 * static_cast<double>(n))
    return {static_cast<double>(n), 0, true};

  double tau = 1.0;
  for (std::size_t lag = 1; lag < n; ++lag) {
    tau += 2.0 * acov[lag] / acov[0];
    if (static_cast<double>(lag) >= c * tau) return {tau, lag, false};
  }
  return {tau, n - 1, true};
}

double error_bar(double variance, double tau, std::size_t length) {
  if (length == 0) throw std::invalid_argument("error_bar: empty series");
  return std::sqrt(variance * tau / static_cast<double>(length));
}

double error_bar(std::span<const double> series, double tau) {
  return error_bar(sample_variance(series), tau, series.size());
}

double tau_normalized(double tau, double h, std::int64_t flips, double total_time) {
  if (!(total_time > 0.0))
    throw std::invalid_argument("tau_normalized: total time must be positive");
  return tau * h * static_cast<double>(flips) / total_time;
}

double split_rhat(const std::vector<std::span<const double>>& chains) {
  if (chains.size() < 2) throw std::invalid_argument("split_rhat: need >= 2 chains");
  const std::size_t len = chains.front().size();
  if (len < 4) throw std::invalid_argument("split_rhat: chains need >= 4 values");
  for (const auto& ch : chains)
    if (ch.size() != len) throw std::invalid_argument("split_rhat: unequal lengths");

  const std::size_t n = len / 2;  // odd lengths drop the middle value
  std::vector<std::span<const double>> halves;
  for (const auto& ch : chains) {
    halves.push_back(ch.first(n));
    halves.push_back(ch.last(n));
  }
  std::vector<double> means;
  double w = 0.0;
  for (const auto& half : halves) {
    means.push_back(mean(half));
    w += sample_variance(half);
  }
  w /= static_cast<double>(halves.size());
  const double b = static_cast<double>(n) * sample_variance(means);

  if (w == 0.0) return b > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  const double nn = static_cast<double>(n);
  const double r = std::sqrt((nn - 1.0) / nn + b / (nn * w));
  return std::max(r, 1.0);
}

ChainDiagnostics diagnose(const std::string& observable,
                          const std::vector<DiscreteSeries>& chains,
                          double total_time, std::int64_t flips, double c) {
  if (chains.empty()) throw std::invalid_argument("diagnose: no chains");
  ChainDiagnostics d;
  d.observable = observable;
  d.h = chains.front().h;
  d.tau0 = chains.front().tau0;
  d.total_time = total_time;
  d.flips = flips;

  std::vector<double> pooled;
  std::vector<std::span<const double>> spans;
  double tau_sum = 0.0;
  for (const auto& ch : chains) {
    pooled.insert(pooled.end(), ch.values.begin(), ch.values.end());
    spans.emplace_back(ch.values);
    const auto t = tau_integrated(ch.values, c);
    tau_sum += t.tau;
    d.tau_flagged = d.tau_flagged || t.flagged;
  }
  const auto k = static_cast<double>(chains.size());
  d.tau_int = tau_sum / k;
  d.mu_hat = mean(pooled);
  d.sigma_hat = error_bar(pooled, d.tau_int);
  d.tau_normalized = tau_normalized(d.tau_int, d.h, flips, k * total_time);
  d.r_hat = chains.size() >= 2 ? split_rhat(spans) : 1.0;
  return d;
}

nlohmann::ordered_json to_json(const ChainDiagnostics& d) {
  return {{"observable", d.observable}, {"mu_hat", d.mu_hat},
          {"sigma_hat", d.sigma_hat},   {"tau_int", d.tau_int},
          {"tau_normalized", d.tau_normalized},
          {"r_hat", d.r_hat},           {"h", d.h},
          {"tau0", d.tau0},             {"T", d.total_time},
          {"flips", d.flips}};
}

}  // namespace fnmc
