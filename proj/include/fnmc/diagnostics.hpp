#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fnmc/gillespie.hpp"

namespace fnmc {

/// f sampled on the grid tau0 + (j-1) h, j = 1..floor((T - tau0)/h).
struct DiscreteSeries {
  std::vector<double> values;
  double h = 1.0;
  double tau0 = 0.0;
  std::string source;
};

/// Samples f along the trajectory; a grid point that coincides with a jump
/// sees the post-jump state. Throws std::invalid_argument unless
/// 0 < h < T - tau0.
DiscreteSeries discretize(const Trajectory& traj, const Observable& f, double h,
                          double tau0);

/// Same grid as discretize(), fed segment by segment from run_streaming().
class StreamingDiscretizer {
 public:
  StreamingDiscretizer(Observable f, double h, double tau0, double total_time);

  void operator()(const BitConfiguration& state, double start, double dt);
  SegmentVisitor visitor() {
    return [this](const BitConfiguration& s, double start, double dt) {
      (*this)(s, start, dt);
    };
  }
  DiscreteSeries take() { return std::move(series_); }

 private:
  Observable f_;
  std::size_t length_;
  DiscreteSeries series_;
};

double mean(std::span<const double> x);
/// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> x);

struct TauEstimate {
  double tau;          // integrated autocorrelation time, in samples
  std::size_t window;  // summation window M
  bool flagged;        // constant series, or no window satisfied M >= c tau
};

/// tau = 1 + 2 sum_{s=1}^{M} rho(s) with rho from FFT autocovariances and M the
/// smallest lag with M >= c tau(M). A constant series returns tau = length,
/// flagged. Throws std::invalid_argument for length < 16.
TauEstimate tau_integrated(std::span<const double> series, double c = 5.0);

/// sqrt(sample_variance * tau / length).
double error_bar(std::span<const double> series, double tau);
double error_bar(double variance, double tau, std::size_t length);

/// tau * h * flips / total_time: tau converted into chain transitions.
double tau_normalized(double tau, double h, std::int64_t flips, double total_time);

/// Split-chain potential scale reduction, clamped to >= 1. Zero within-chain
/// variance gives +inf (chains disagree) or 1 (all equal).
double split_rhat(const std::vector<std::span<const double>>& chains);

struct ChainDiagnostics {
  std::string observable;
  double mu_hat = 0.0;
  double sigma_hat = 0.0;
  double tau_int = 0.0;
  bool tau_flagged = false;
  double tau_normalized = 0.0;
  double r_hat = 1.0;
  double h = 1.0;
  double tau0 = 0.0;
  double total_time = 0.0;
  std::int64_t flips = 0;
};

/// Diagnostics of one observable from one or more equal-length series.
/// mu_hat and sigma_hat pool all chains; tau_int is the chain average.
ChainDiagnostics diagnose(const std::string& observable,
                          const std::vector<DiscreteSeries>& chains,
                          double total_time, std::int64_t flips, double c = 5.0);

/// {observable, mu_hat, sigma_hat, tau_int, tau_normalized, r_hat, h, tau0,
///  T, flips}
nlohmann::ordered_json to_json(const ChainDiagnostics& d);

}  // namespace fnmc
