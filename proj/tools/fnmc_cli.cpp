// fnmc: command-line front end.
//
// Every command writes its outputs into --out and prints a JSON summary on
// stdout. Exit codes: 0 success, 1 runtime error, 2 validation failure,
// 3 truncation error, 4 configuration error.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fnmc/diagnostics.hpp"
#include "fnmc/errors.hpp"
#include "fnmc/exact.hpp"
#include "fnmc/fixed_node.hpp"
#include "fnmc/gillespie.hpp"
#include "fnmc/haldane_shastry.hpp"
#include "fnmc/metropolis.hpp"
#include "json_config.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace fnmc;

namespace {

enum Exit : int { kOk = 0, kRuntime = 1, kValidation = 2, kTruncation = 3, kConfig = 4 };

struct ConfigProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out = ".";

  std::uint64_t require_seed(const char* command) const {
    if (!seed) throw ConfigProblem(std::string(command) + ": --seed is required");
    return *seed;
  }
};

// Runs task(0..count-1) on up to `jobs` threads. Results must be written by
// index so that the outcome does not depend on scheduling.
void parallel_for(int jobs, std::size_t count, const std::function<void(std::size_t)>& task) {
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

fs::path output_dir(const Global& g) {
  fs::path dir(g.out);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  os << j.dump(2) << '\n';
}

std::string observable_name(int d) { return "M_" + std::to_string(d); }

void check_model_size(int L, int max_L, const char* what) {
  if (L < 2 || L % 2 != 0 || L > max_L)
    throw ConfigProblem(std::string(what) + ": L must be even in [2, " + std::to_string(max_L) +
                        "], got " + std::to_string(L));
}

void check_distances(const std::vector<int>& ds, int L) {
  if (ds.empty()) throw ConfigProblem("at least one observable distance is required");
  for (int d : ds)
    if (d < 1 || d > L - 1) throw ConfigProblem("distance d must be in [1, L-1]");
}

// ---------------------------------------------------------------- gap

struct GapArgs {
  int L_min = 4;
  int L_max = 12;
};

int cmd_gap(const Global& g, const GapArgs& a) {
  if (a.L_min < 4 || a.L_min > a.L_max) throw ConfigProblem("gap: need 4 <= L-min <= L-max");
  check_model_size(a.L_max, 14, "gap");
  std::vector<GapRow> rows;
  for (int L = a.L_min + (a.L_min % 2); L <= a.L_max; L += 2) {
    const hs::Model model(L);
    const auto h = hs::hamiltonian(L);
    const hs::GroundStateOracle psi(model);
    const auto gaps = spectral_gaps(h, psi, half_filling_basis(L));
    rows.push_back({L, gaps.gamma(), gaps.gamma_f(), gaps.lambda1_h});
  }

  // least-squares fit of log gamma_F against log L
  double mx = 0.0, my = 0.0;
  for (const auto& r : rows) {
    mx += std::log(r.L);
    my += std::log(r.gamma_f);
  }
  mx /= static_cast<double>(rows.size());
  my /= static_cast<double>(rows.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& r : rows) {
    sxy += (std::log(r.L) - mx) * (std::log(r.gamma_f) - my);
    sxx += (std::log(r.L) - mx) * (std::log(r.L) - mx);
  }
  const double slope = rows.size() >= 2 ? sxy / sxx : std::nan("");

  json constants = json::array();
  for (const auto& r : rows) constants.push_back(r.gamma * r.L / (2 * std::numbers::pi));
  const json summary{{"command", "gap"},
                     {"L_min", rows.front().L},
                     {"L_max", rows.back().L},
                     {"slope_gamma_F", slope},
                     {"intercept_gamma_F", my - slope * mx},
                     {"gamma_L_over_2pi", constants}};

  const auto dir = output_dir(g);
  std::ofstream csv(dir / "gap.csv");
  write_gap_csv(csv, rows);
  write_json(dir / "gap_fit.json", summary);
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  std::string model = "haldane-shastry";
  std::string chain = "ctmc";
  int L = 0;
  double T = 1e6;
  double tau0 = 100.0;
  double h = 1.0;
  std::optional<double> epsilon;
  std::int64_t steps = 1000000;
  std::int64_t burn = 100000;
  int chains = 4;
  std::vector<int> d{1};
  std::string start;
  bool write_series = false;
  bool write_trajectory = false;
};

struct ChainOutput {
  std::vector<DiscreteSeries> series;  // one per observable
  std::int64_t flips = 0;
  std::int64_t accepted = 0;
  std::optional<json> truncation;
};

json observable_json(const ChainDiagnostics& diag, std::optional<double> exact) {
  json j = to_json(diag);
  j["tau_flagged"] = diag.tau_flagged;
  if (exact) {
    j["exact"] = *exact;
    j["z"] = (diag.mu_hat - *exact) / diag.sigma_hat;
  } else {
    j["exact"] = nullptr;
    j["z"] = nullptr;
  }
  return j;
}

ChainOutput sample_ctmc(const SampleArgs& a, FixedNodeChain& chain, const BitConfiguration& x_in,
                        RandomSource& rng, std::optional<std::int64_t> cutoff,
                        const fs::path& dir, std::size_t index) {
  std::vector<StreamingDiscretizer> disc;
  for (int d : a.d)
    disc.emplace_back([d](const BitConfiguration& x) { return hs::m_d(x, d); }, a.h, a.tau0, a.T);
  Trajectory path;
  const auto summary = run_streaming(
      chain, x_in, a.T, rng,
      [&](const BitConfiguration& x, double start, double dt) {
        for (auto& s : disc) s(x, start, dt);
        if (a.write_trajectory) path.segments.push_back({x, dt});
      },
      cutoff);

  ChainOutput out;
  out.flips = summary.flips;
  if (summary.truncated)
    out.truncation = json{{"error", "truncation"},
                          {"chain", index},
                          {"flips", summary.flips},
                          {"cutoff", *cutoff},
                          {"time_reached", summary.total_time}};
  for (auto& s : disc) out.series.push_back(s.take());

  if (a.write_trajectory) {
    path.total_time = summary.total_time;
    path.flips = summary.flips;
    path.truncated = summary.truncated;
    path.seed = rng.seed();
    std::ofstream os(dir / ("trajectory_" + std::to_string(index) + ".jsonl"));
    write_trajectory_jsonl(os, path);
  }
  if (a.write_series && !summary.truncated) {
    std::ofstream os(dir / ("series_" + std::to_string(index) + ".csv"));
    os << "index,time";
    for (int d : a.d) os << ',' << observable_name(d);
    os << '\n';
    os.precision(17);
    for (std::size_t j = 0; j < out.series.front().values.size(); ++j) {
      os << j << ',' << a.tau0 + static_cast<double>(j) * a.h;
      for (const auto& s : out.series) os << ',' << s.values[j];
      os << '\n';
    }
  }
  return out;
}

ChainOutput sample_mh(const SampleArgs& a, const SparseHamiltonian& h, const AmplitudeOracle& psi,
                      ProposalMode mode, BitConfiguration x, RandomSource& rng,
                      const fs::path& dir, std::size_t index) {
  MetropolisChain mh(h, psi, mode);
  for (std::int64_t k = 0; k < a.burn; ++k) mh.step(x, rng);

  ChainOutput out;
  out.series.resize(a.d.size());
  for (auto& s : out.series) {
    s.h = 1.0;
    s.tau0 = static_cast<double>(a.burn);
    s.source = std::string("mh-") + to_string(mode);
    s.values.reserve(static_cast<std::size_t>(a.steps));
  }
  std::vector<BitConfiguration> states;
  const std::int64_t accepted_before = mh.stats().accepted;
  mh.run_streaming(x, a.steps, rng, [&](std::int64_t, const BitConfiguration& s) {
    for (std::size_t k = 0; k < a.d.size(); ++k) out.series[k].values.push_back(hs::m_d(s, a.d[k]));
    if (a.write_series) states.push_back(s);
  });
  out.flips = a.steps;
  out.accepted = mh.stats().accepted - accepted_before;

  if (a.write_series) {
    std::vector<NamedObservable> obs;
    for (int d : a.d)
      obs.push_back({observable_name(d), [d](const BitConfiguration& s) { return hs::m_d(s, d); }});
    std::ofstream os(dir / ("series_" + std::to_string(index) + ".csv"));
    write_series_csv(os, states, obs);
  }
  return out;
}

int cmd_sample(const Global& g, const SampleArgs& a) {
  const std::uint64_t seed = g.require_seed("sample");
  check_model_size(a.L, 256, "sample");
  check_distances(a.d, a.L);
  if (a.chains < 1) throw ConfigProblem("sample: chains must be >= 1");
  const bool ctmc = a.chain == "ctmc";
  if (ctmc) {
    if (!(a.h > 0.0) || !(a.tau0 >= 0.0) || !(a.T > a.tau0 + 16.0 * a.h))
      throw ConfigProblem("sample: need h > 0, tau0 >= 0 and T > tau0 + 16 h");
    if (a.epsilon && !(*a.epsilon > 0.0)) throw ConfigProblem("sample: epsilon must be > 0");
  } else {
    if (a.steps < 16 || a.burn < 0) throw ConfigProblem("sample: need steps >= 16, burn >= 0");
    if (a.epsilon) throw ConfigProblem("sample: epsilon applies to the ctmc chain only");
  }
  std::optional<BitConfiguration> start;
  if (!a.start.empty()) {
    try {
      start = BitConfiguration::from_string(a.start);
    } catch (const std::exception& e) {
      throw ConfigProblem(std::string("sample: bad start state: ") + e.what());
    }
    if (start->size() != a.L || start->hamming_weight() != a.L / 2)
      throw ConfigProblem("sample: start state must have L sites at half filling");
  }

  const hs::Model model(a.L);
  const auto h = hs::hamiltonian(a.L);
  const hs::GroundStateOracle psi(model);
  const auto dir = output_dir(g);

  std::optional<FixedNodeChain> base;
  std::optional<std::int64_t> cutoff;
  if (ctmc) {
    base.emplace(h, psi, hs::neel_state(a.L));
    if (a.epsilon) cutoff = truncation_cutoff(h, a.T, *a.epsilon);
  }

  const auto k = static_cast<std::size_t>(a.chains);
  std::vector<ChainOutput> results(k);
  parallel_for(g.jobs, k, [&](std::size_t i) {
    RandomSource rng(RandomSource::derive(seed, i));
    const BitConfiguration x = start ? *start : hs::random_half_filling(a.L, rng);
    if (ctmc) {
      auto chain = base->fork();
      results[i] = sample_ctmc(a, chain, x, rng, cutoff, dir, i);
    } else {
      const auto mode = a.chain == "mh-h" ? ProposalMode::kFromH : ProposalMode::kFromF;
      results[i] = sample_mh(a, h, psi, mode, x, rng, dir, i);
    }
  });

  json summary{{"command", "sample"}, {"model", a.model}, {"chain", a.chain},
               {"L", a.L},            {"seed", seed},     {"chains", a.chains}};
  if (ctmc) {
    summary["T"] = a.T;
    summary["tau0"] = a.tau0;
    summary["h"] = a.h;
    summary["epsilon"] = a.epsilon ? json(*a.epsilon) : json(nullptr);
  } else {
    summary["steps"] = a.steps;
    summary["burn"] = a.burn;
  }

  for (const auto& r : results)
    if (r.truncation) {
      summary["status"] = *r.truncation;
      write_json(dir / "sample.json", summary);
      std::cout << summary.dump(2) << '\n';
      return kTruncation;
    }

  std::int64_t flips = 0, accepted = 0;
  for (const auto& r : results) {
    flips += r.flips;
    accepted += r.accepted;
  }
  summary["status"] = json{{"error", nullptr}};
  if (ctmc) {
    summary["flips"] = flips;
    summary["flip_rate"] = static_cast<double>(flips) / (static_cast<double>(k) * a.T);
  } else {
    summary["acceptance_rate"] = static_cast<double>(accepted) / static_cast<double>(flips);
  }

  // exact references by sector summation while that stays cheap
  std::optional<hs::SectorDistribution> exact;
  if (a.L <= 20) exact = hs::sector_distribution(a.L);

  json observables = json::array();
  for (std::size_t o = 0; o < a.d.size(); ++o) {
    std::vector<DiscreteSeries> per_chain;
    for (auto& r : results) per_chain.push_back(std::move(r.series[o]));
    const double total_time = ctmc ? a.T : static_cast<double>(a.steps);
    const auto diag = diagnose(observable_name(a.d[o]), per_chain, total_time, flips);
    std::optional<double> ref;
    if (exact) ref = hs::brute_zz(*exact, 1, 1 + a.d[o]);
    observables.push_back(observable_json(diag, ref));
  }
  summary["observables"] = observables;

  write_json(dir / "sample.json", summary);
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
  int L = 4;
};

int cmd_validate(const Global& g, const ValidateArgs& a) {
  check_model_size(a.L, 10, "validate");
  if (a.L < 4) throw ConfigProblem("validate: L must be >= 4");
  const int L = a.L;
  const hs::Model model(L);
  const auto h = hs::hamiltonian(L);
  const hs::GroundStateOracle psi(model);
  const auto basis = half_filling_basis(L);

  json checks = json::array();
  bool all_pass = true;
  const auto report = [&](const std::string& name, double residual, double tolerance) {
    const bool pass = residual <= tolerance;
    all_pass = all_pass && pass;
    checks.push_back({{"name", name}, {"residual", residual}, {"tolerance", tolerance},
                      {"pass", pass}});
    std::cerr << (pass ? "PASS " : "FAIL ") << name << " residual=" << residual
              << " tolerance=" << tolerance << '\n';
  };

  const auto hd = build_dense(DenseKind::kH, h, psi, basis);
  const auto fd = build_dense(DenseKind::kF, h, psi, basis);
  const auto gd = build_dense(DenseKind::kG, h, psi, basis);
  const auto gaps = spectral_gaps(h, psi, basis);
  report("lambda1_F_equals_lambda1_H", std::abs(gaps.lambda1_f - gaps.lambda1_h), 1e-9);
  report("F_psi_equals_H_psi",
         ((fd.matrix - hd.matrix) * hd.amplitudes).cwiseAbs().maxCoeff(), 1e-9);
  report("gamma_F_at_least_gamma", std::max(0.0, gaps.gamma() - gaps.gamma_f()), 1e-9);

  double local = 0.0;
  for (const auto& x : basis) local = std::max(local, std::abs(ground_energy(h, psi, x) - gaps.lambda1_h));
  report("local_energy_constant", local, 1e-9);

  const Eigen::MatrixXd& G = gd.matrix;
  const Eigen::VectorXd pi = gd.distribution();
  double negative = 0.0, balance = 0.0;
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j)
      if (i != j) {
        negative = std::max(negative, -G(i, j));
        balance = std::max(balance, std::abs(G(i, j) * pi[j] - G(j, i) * pi[i]));
      }
  report("generator_column_sums", G.colwise().sum().cwiseAbs().maxCoeff(), 1e-9);
  report("generator_offdiagonal_nonnegative", negative, 0.0);
  report("generator_stationary", (G * pi).cwiseAbs().maxCoeff(), 1e-9);
  report("detailed_balance", balance, 1e-9);

  const ExactEvolution evo(gd);
  double excess = 0.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
    for (std::size_t x = 0; x < basis.size(); ++x) {
      const double dist = (evo.distribution(x, t) - pi).cwiseAbs().sum();
      const double bound =
          std::exp(-gaps.gamma() * t) / std::sqrt(pi[static_cast<Eigen::Index>(x)]);
      excess = std::max(excess, dist - bound);
    }
  report("mixing_bound", std::max(0.0, excess), 1e-9);

  const double rate = expected_flip_rate(fd);
  report("flip_rate_bound", std::max(0.0, rate - h.max_row_degree() * h.norm_bound()), 0.0);

  double ratio_err = 0.0;
  const SwapProposals swaps(L);
  for (std::size_t k = 0; k < basis.size(); k += std::max<std::size_t>(1, basis.size() / 16))
    for (const auto& y : swaps.all(basis[k])) {
      const auto fast = psi.log_ratio(basis[k], y);
      const auto slow = psi.log_ratio_from_scratch(basis[k], y);
      ratio_err = std::max(ratio_err, fast.sign != slow.sign
                                          ? std::numeric_limits<double>::infinity()
                                          : std::abs(std::expm1(fast.log_abs - slow.log_abs)));
    }
  report("incremental_ratio", ratio_err, 1e-12);

  // four-site ground state as a 16-entry table
  const hs::Model four(4);
  const hs::GroundStateOracle psi4(four);
  std::vector<double> table(16);
  double norm = 0.0;
  for (std::uint64_t v = 0; v < 16; ++v) {
    table[v] = psi4.amplitude(BitConfiguration(4, v)).value();
    norm += table[v] * table[v];
  }
  for (auto& t : table) t /= std::sqrt(norm);
  const double wick = wick_check(table);
  report("wick_residual_four_sites", std::abs(wick + 1.0 / 6.0), 1e-12);

  const json summary{{"command", "validate"},
                     {"L", L},
                     {"gamma", gaps.gamma()},
                     {"gamma_F", gaps.gamma_f()},
                     {"wick_residual", wick},
                     {"checks", checks},
                     {"pass", all_pass}};
  write_json(output_dir(g) / "validate.json", summary);
  std::cout << summary.dump(2) << '\n';
  return all_pass ? kOk : kValidation;
}

// ---------------------------------------------------------------- corrupt

struct CorruptArgs {
  int L = 12;
  std::vector<double> kappa;
  std::vector<std::uint64_t> seeds;
  std::int64_t steps = 100000;
  std::int64_t burn = 10000;
  std::vector<int> d{1};
};

int cmd_corrupt(const Global& g, const CorruptArgs& a) {
  const std::uint64_t seed = g.require_seed("corrupt");
  check_model_size(a.L, 20, "corrupt");
  check_distances(a.d, a.L);
  if (a.kappa.empty()) throw ConfigProblem("corrupt: at least one kappa is required");
  for (double k : a.kappa)
    if (!(k > 0.0)) throw ConfigProblem("corrupt: kappa must be > 0");
  if (a.steps < 16 || a.burn < 0) throw ConfigProblem("corrupt: need steps >= 16, burn >= 0");
  const std::vector<std::uint64_t> seeds = a.seeds.empty() ? std::vector{seed} : a.seeds;

  const hs::Model model(a.L);
  const auto h = hs::hamiltonian(a.L);

  struct Row {
    double kappa;
    std::uint64_t seed;
    double tv;
    std::vector<double> tau_h, tau_f;
  };
  std::vector<Row> rows(a.kappa.size() * seeds.size());
  parallel_for(g.jobs, rows.size(), [&](std::size_t i) {
    Row& row = rows[i];
    row.kappa = a.kappa[i / seeds.size()];
    row.seed = seeds[i % seeds.size()];
    const auto noisy = hs::corrupt(model, row.kappa, row.seed);
    row.tv = noisy.tv_distance;
    for (const auto mode : {ProposalMode::kFromH, ProposalMode::kFromF}) {
      RandomSource rng(RandomSource::derive(seed, 2 * i + (mode == ProposalMode::kFromF)));
      MetropolisChain mh(h, noisy.oracle, mode);
      auto x = hs::random_half_filling(a.L, rng);
      for (std::int64_t k = 0; k < a.burn; ++k) mh.step(x, rng);
      std::vector<std::vector<double>> series(a.d.size());
      mh.run_streaming(x, a.steps, rng, [&](std::int64_t, const BitConfiguration& s) {
        for (std::size_t k = 0; k < a.d.size(); ++k) series[k].push_back(hs::m_d(s, a.d[k]));
      });
      auto& taus = mode == ProposalMode::kFromH ? row.tau_h : row.tau_f;
      for (const auto& s : series) taus.push_back(tau_integrated(s).tau);
    }
  });

  const auto dir = output_dir(g);
  std::ofstream csv(dir / "corrupt.csv");
  csv << "kappa,seed,tv,observable,tau_mh_h,tau_mh_f\n";
  csv.precision(17);
  json table = json::array();
  for (const auto& r : rows)
    for (std::size_t k = 0; k < a.d.size(); ++k) {
      csv << r.kappa << ',' << r.seed << ',' << r.tv << ',' << observable_name(a.d[k]) << ','
          << r.tau_h[k] << ',' << r.tau_f[k] << '\n';
      table.push_back({{"kappa", r.kappa}, {"seed", r.seed}, {"tv", r.tv},
                       {"observable", observable_name(a.d[k])}, {"tau_mh_h", r.tau_h[k]},
                       {"tau_mh_f", r.tau_f[k]}});
    }
  const json summary{{"command", "corrupt"}, {"L", a.L},         {"seed", seed},
                     {"steps", a.steps},     {"burn", a.burn},   {"rows", table}};
  write_json(dir / "corrupt.json", summary);
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- wick

struct WickArgs {
  std::vector<double> amplitudes;
};

int cmd_wick(const Global& g, const WickArgs& a) {
  std::vector<double> table = a.amplitudes;
  std::string source = "input";
  if (table.empty()) {
    source = "haldane-shastry-4";
    const hs::Model four(4);
    const hs::GroundStateOracle psi(four);
    table.resize(16);
    double norm = 0.0;
    for (std::uint64_t v = 0; v < 16; ++v) {
      table[v] = psi.amplitude(BitConfiguration(4, v)).value();
      norm += table[v] * table[v];
    }
    for (auto& t : table) t /= std::sqrt(norm);
  }
  double residual = 0.0;
  try {
    residual = wick_check(table);
  } catch (const std::invalid_argument& e) {
    throw ConfigProblem(std::string("wick: ") + e.what());
  }
  const json summary{{"command", "wick"},
                     {"source", source},
                     {"residual", residual},
                     {"free_fermion", std::abs(residual) <= 1e-12}};
  write_json(output_dir(g) / "wick.json", summary);
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- verify-start

struct VerifyArgs {
  int L = 8;
  std::string state;
  double epsilon = 0.1;
  double t = 10.0;
  std::int64_t repetitions = 0;
};

int cmd_verify_start(const Global& g, const VerifyArgs& a) {
  const std::uint64_t seed = g.require_seed("verify-start");
  check_model_size(a.L, 256, "verify-start");
  if (!(a.epsilon > 0.0 && a.epsilon < 1.0)) throw ConfigProblem("verify-start: epsilon in (0, 1)");
  if (!(a.t > 0.0)) throw ConfigProblem("verify-start: t must be > 0");
  if (a.repetitions < 0) throw ConfigProblem("verify-start: repetitions must be >= 0");
  BitConfiguration x = hs::neel_state(a.L);
  if (!a.state.empty()) {
    try {
      x = BitConfiguration::from_string(a.state);
    } catch (const std::exception& e) {
      throw ConfigProblem(std::string("verify-start: bad state: ") + e.what());
    }
    if (x.size() != a.L || x.hamming_weight() != a.L / 2)
      throw ConfigProblem("verify-start: state must have L sites at half filling");
  }
  const hs::Model model(a.L);
  const auto h = hs::hamiltonian(a.L);
  const hs::GroundStateOracle psi(model);
  FixedNodeChain chain(h, psi, hs::neel_state(a.L));
  RandomSource rng(seed);
  const auto v = verify_start_state(chain, x, a.epsilon, a.t, a.repetitions, rng);
  const json summary{{"command", "verify-start"},
                     {"L", a.L},
                     {"state", x.to_string()},
                     {"epsilon", a.epsilon},
                     {"t", a.t},
                     {"seed", seed},
                     {"cutoff", truncation_cutoff(h, a.t, a.epsilon)},
                     {"repetitions", v.repetitions},
                     {"estimate", v.estimate},
                     {"accepted", v.accepted}};
  write_json(output_dir(g) / "verify_start.json", summary);
  std::cout << summary.dump(2) << '\n';
  return v.accepted ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-node Monte Carlo sampling of ground-state distributions"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option values; command-line values win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1);
  // "--h" is the grid spacing, so help is long-form only
  app.set_help_flag("--help", "Print this help message and exit");

  Global global;
  app.add_option("--seed", global.seed, "Seed for all random streams");
  app.add_option("--jobs", global.jobs, "Worker threads for independent chains")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", global.out, "Output directory");

  GapArgs gap;
  auto* gap_cmd = app.add_subcommand("gap", "Exact gaps of H and F over a range of L");
  gap_cmd->add_option("--L-min", gap.L_min);
  gap_cmd->add_option("--L-max", gap.L_max);

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Run chains and estimate M_d observables");
  sample_cmd->add_option("--model", sample.model)->check(CLI::IsMember({"haldane-shastry"}));
  sample_cmd->add_option("--chain", sample.chain)->check(CLI::IsMember({"ctmc", "mh-h", "mh-f"}));
  sample_cmd->add_option("--L", sample.L)->required();
  sample_cmd->add_option("--T", sample.T, "Total time per ctmc chain");
  sample_cmd->add_option("--tau0", sample.tau0, "Burn-in time (ctmc)");
  sample_cmd->add_option("--h", sample.h, "Grid spacing of the discretized series (ctmc)");
  sample_cmd->add_option("--epsilon", sample.epsilon, "Truncate ctmc runs at this error level");
  sample_cmd->add_option("--steps", sample.steps, "Recorded steps per Metropolis chain");
  sample_cmd->add_option("--burn", sample.burn, "Burn-in steps per Metropolis chain");
  sample_cmd->add_option("--chains", sample.chains);
  sample_cmd->add_option("--d", sample.d, "Distances d of the M_d observables");
  sample_cmd->add_option("--start", sample.start, "Start state as a 0/1 string");
  sample_cmd->add_flag("--write-series", sample.write_series);
  sample_cmd->add_flag("--write-trajectory", sample.write_trajectory);

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "Exact invariant checks at small L");
  validate_cmd->add_option("--L", validate.L);

  CorruptArgs corrupt;
  auto* corrupt_cmd =
      app.add_subcommand("corrupt", "Metropolis autocorrelation under noisy amplitudes");
  corrupt_cmd->add_option("--L", corrupt.L);
  corrupt_cmd->add_option("--kappa", corrupt.kappa)->required();
  corrupt_cmd->add_option("--seeds", corrupt.seeds, "Noise seeds (default: --seed)");
  corrupt_cmd->add_option("--steps", corrupt.steps);
  corrupt_cmd->add_option("--burn", corrupt.burn);
  corrupt_cmd->add_option("--d", corrupt.d);

  WickArgs wick;
  auto* wick_cmd = app.add_subcommand("wick", "Four-qubit free-fermion residual");
  wick_cmd->add_option("--amplitudes", wick.amplitudes, "16 real amplitudes")->expected(16);

  VerifyArgs verify;
  auto* verify_cmd =
      app.add_subcommand("verify-start", "Estimate the truncation error rate from a start state");
  verify_cmd->add_option("--L", verify.L);
  verify_cmd->add_option("--state", verify.state);
  verify_cmd->add_option("--epsilon", verify.epsilon);
  verify_cmd->add_option("--t", verify.t);
  verify_cmd->add_option("--repetitions", verify.repetitions, "0 selects ceil(16/epsilon^2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (gap_cmd->parsed()) return cmd_gap(global, gap);
    if (sample_cmd->parsed()) return cmd_sample(global, sample);
    if (validate_cmd->parsed()) return cmd_validate(global, validate);
    if (corrupt_cmd->parsed()) return cmd_corrupt(global, corrupt);
    if (wick_cmd->parsed()) return cmd_wick(global, wick);
    if (verify_cmd->parsed()) return cmd_verify_start(global, verify);
  } catch (const ConfigProblem& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const CapExceeded& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "runtime"}, {"what", e.what()}}.dump() << '\n';
    return kRuntime;
  }
  return kConfig;
}
