// End-to-end acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 3 7 13     run a subset
//
// Exit status is 1 if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "fnmc/diagnostics.hpp"
#include "fnmc/exact.hpp"
#include "fnmc/fixed_node.hpp"
#include "fnmc/gillespie.hpp"
#include "fnmc/haldane_shastry.hpp"
#include "fnmc/metropolis.hpp"
#include "fnmc/real_embedding.hpp"
#include "support.hpp"

using namespace fnmc;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Result {
  bool pass = true;
  std::string detail;

  void require(bool ok) { pass = pass && ok; }
  void note(const char* format, ...) __attribute__((format(printf, 2, 3))) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    if (!detail.empty()) detail += "; ";
    detail += buf;
  }
};

struct Hs {
  explicit Hs(int L) : model(L), h(hs::hamiltonian(L)), psi(model) {}
  hs::Model model;
  SparseHamiltonian h;
  hs::GroundStateOracle psi;
};

struct MeanSe {
  double mean, se;
};

MeanSe mean_se(const std::vector<double>& v) {
  return {fnmc::mean(v), std::sqrt(sample_variance(v) / static_cast<double>(v.size()))};
}

BitConfiguration sample_from(const hs::SectorDistribution& d, RandomSource& rng) {
  double u = rng.uniform();
  for (std::size_t k = 0; k < d.states.size(); ++k) {
    u -= d.probabilities[k];
    if (u < 0.0) return d.states[k];
  }
  return d.states.back();
}

// ---------------------------------------------------------------- exact

Result fixed_node_correctness() {
  Result r;
  for (int L : {4, 6, 8, 10}) {
    const Hs m(L);
    const auto basis = half_filling_basis(L);
    const auto hd = build_dense(DenseKind::kH, m.h, m.psi, basis);
    const auto fd = build_dense(DenseKind::kF, m.h, m.psi, basis);
    const auto gaps = spectral_gaps(m.h, m.psi, basis);
    const double dl = std::abs(gaps.lambda1_f - gaps.lambda1_h);
    const double res = ((fd.matrix - hd.matrix) * hd.amplitudes).cwiseAbs().maxCoeff();
    const double excess = gaps.gamma_f() - gaps.gamma();
    r.require(dl <= 1e-9 && res <= 1e-9 && excess >= -1e-9);
    r.note("L=%d |dlambda1|=%.1e |(F-H)psi|=%.1e gamma_F-gamma=%.4f", L, dl, res, excess);
  }
  return r;
}

Result generator_correctness() {
  Result r;
  for (int L : {4, 6, 8, 10}) {
    const Hs m(L);
    const auto g = build_dense(DenseKind::kG, m.h, m.psi, half_filling_basis(L));
    const Eigen::MatrixXd& G = g.matrix;
    const Eigen::VectorXd pi = g.distribution();
    const double colsum = G.colwise().sum().cwiseAbs().maxCoeff();
    double min_off = 0.0, balance = 0.0;
    for (Eigen::Index i = 0; i < G.rows(); ++i)
      for (Eigen::Index j = 0; j < G.cols(); ++j) {
        if (i == j) continue;
        min_off = std::min(min_off, G(i, j));
        balance = std::max(balance, std::abs(G(i, j) * pi[j] - G(j, i) * pi[i]));
      }
    const double stationary = (G * pi).cwiseAbs().maxCoeff();
    r.require(colsum <= 1e-9 && min_off >= 0.0 && stationary <= 1e-9 && balance <= 1e-9);
    r.note("L=%d colsum=%.1e min_offdiag=%.1e |G pi|=%.1e balance=%.1e", L, colsum,
           min_off, stationary, balance);
  }
  return r;
}

Result mixing_bound() {
  Result r;
  for (int L : {4, 6}) {
    const Hs m(L);
    const auto basis = half_filling_basis(L);
    const double gamma = spectral_gaps(m.h, m.psi, basis).gamma();
    const auto g = build_dense(DenseKind::kG, m.h, m.psi, basis);
    const ExactEvolution evo(g);
    const Eigen::VectorXd pi = g.distribution();
    double worst_slack = std::numeric_limits<double>::infinity();
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
      for (std::size_t x = 0; x < basis.size(); ++x) {
        const Eigen::VectorXd pt = evo.distribution(x, t);
        const double dist = (pt - pi).cwiseAbs().sum();
        const double bound = std::exp(-gamma * t) / std::sqrt(pi[static_cast<Eigen::Index>(x)]);
        worst_slack = std::min(worst_slack, bound + 1e-9 - dist);
      }
    r.require(worst_slack >= 0.0);
    r.note("L=%d gamma=%.6f min(bound - |pi_t - pi|_1)=%.3e over %zu starts x 6 times", L,
           gamma, worst_slack, basis.size());
  }
  return r;
}

Result gap_scaling() {
  Result r;
  std::vector<double> lx, ly, c;
  for (int L = 4; L <= 12; L += 2) {
    const Hs m(L);
    const auto gaps = spectral_gaps(m.h, m.psi, half_filling_basis(L));
    lx.push_back(std::log(L));
    ly.push_back(std::log(gaps.gamma_f()));
    c.push_back(gaps.gamma() * L / (2 * std::numbers::pi));
  }
  const double mx = mean(lx), my = mean(ly);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  const double slope = sxy / sxx;
  const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
  const double spread = (*hi - *lo) / *lo;
  r.require(slope >= -0.9 && slope <= -0.5 && spread < 0.25);
  r.note("slope(log gamma_F vs log L, L=4..12)=%.4f", slope);
  r.note("gamma L/(2 pi) in [%.6f, %.6f], relative spread %.1e", *lo, *hi, spread);
  return r;
}

Result wick() {
  Result r;
  const Hs m(4);
  std::vector<double> v(16);
  double norm = 0.0;
  for (std::uint64_t k = 0; k < 16; ++k) {
    v[k] = m.psi.amplitude(BitConfiguration(4, k)).value();
    norm += v[k] * v[k];
  }
  for (auto& a : v) a /= std::sqrt(norm);
  const double res = wick_check(v);
  r.require(std::abs(res + 1.0 / 6.0) <= 1e-12);
  r.note("residual=%.15f (target -1/6)", res);

  RandomSource rng(kSeed);
  double smallest = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 20; ++trial) {
    auto w = v;
    for (auto& a : w)
      if (rng.uniform() < 0.5) a = -a;
    smallest = std::min(smallest, std::abs(wick_check(w)));
  }
  r.require(smallest > 0.0);
  r.note("min |residual| over 20 random sign patterns=%.4f", smallest);
  return r;
}

Result stoquasticity() {
  Result r;
  // the model is defined for even ring sizes only
  for (int L = 2; L <= 8; L += 2) {
    const Hs m(L);
    const auto s = is_stoquastic(m.h);
    bool ok = !s.stoquastic() && s.witness.has_value();
    double value = 0.0, expected = 0.0;
    if (ok) {
      const auto diff = s.witness->x ^ s.witness->y;
      std::vector<int> sites;
      for (int i = 0; i < L; ++i)
        if (diff.test(i)) sites.push_back(i);
      value = s.witness->value;
      ok = sites.size() == 2;
      if (ok) {
        expected = 2.0 * m.model.coupling(sites[0], sites[1]);
        ok = std::abs(value - expected) <= 1e-12 * expected;
      }
    }
    r.require(ok);
    r.note("L=%d witness=%.6f 2J=%.6f", L, value, expected);
  }
  return r;
}

Result real_embedding_check() {
  Result r;
  double worst_energy = 0.0, worst_gap = 0.0;
  double min_excess = std::numeric_limits<double>::infinity();
  int failures = 0;
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 2;
    const auto inst = testing::complex_instance(n, kSeed + 1000 * static_cast<std::uint64_t>(k));
    const auto emb = fnmc::real_embedding(inst.h, inst.oracle);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        testing::dense_by_elements(emb.hamiltonian), Eigen::EigenvaluesOnly);
    const double lambda1 = inst.spectrum[0];
    const double gamma = inst.spectrum[1] - inst.spectrum[0];
    const double de = std::abs(es.eigenvalues()[0] - lambda1);
    const double excess = es.eigenvalues()[1] - es.eigenvalues()[0] - std::min(1.0, gamma);
    const double dg = std::abs(excess);
    worst_energy = std::max(worst_energy, de);
    worst_gap = std::max(worst_gap, dg);
    min_excess = std::min(min_excess, excess);
    if (de > 1e-9 || dg > 1e-6) ++failures;
  }
  r.require(failures == 0);
  r.note("20 instances: max |E0 - lambda1|=%.1e, max |gap - min(1,gamma)|=%.1e, %d outside "
         "tolerance; min(gap - min(1,gamma))=%.1e",
         worst_energy, worst_gap, failures, min_excess);
  return r;
}

// ---------------------------------------------------------------- statistical

Result sampler_law() {
  Result r;
  const Hs m(4);
  FixedNodeChain chain(m.h, m.psi, hs::neel_state(4));
  const auto target = hs::sector_distribution(4);
  std::unordered_map<BitConfiguration, double, BitConfigurationHash> counts;
  constexpr int kRuns = 100000;
  for (int k = 0; k < kRuns; ++k) {
    RandomSource rng(RandomSource::derive(kSeed, static_cast<std::uint64_t>(k)));
    counts[run_streaming(chain, hs::neel_state(4), 50.0, rng, {}).final_state] += 1.0 / kRuns;
  }
  double dist = 0.0;
  for (std::size_t k = 0; k < target.states.size(); ++k)
    dist += std::abs(counts[target.states[k]] - target.probabilities[k]);

  auto probs = target.probabilities;
  std::sort(probs.rbegin(), probs.rend());
  const std::vector<double> stated{1. / 3, 1. / 3, 1. / 12, 1. / 12, 1. / 12, 1. / 12};
  double table_err = 0.0;
  for (std::size_t k = 0; k < 6; ++k) table_err = std::max(table_err, std::abs(probs[k] - stated[k]));

  r.require(dist <= 0.02 && table_err <= 1e-12);
  r.note("1e5 runs, t=50: |empirical - pi|_1=%.4f; pi vs (1/3,1/3,1/12 x4) max err %.1e", dist,
         table_err);
  return r;
}

Result flip_identity() {
  Result r;
  for (int L : {4, 6}) {
    const Hs m(L);
    const auto f = build_dense(DenseKind::kF, m.h, m.psi, half_filling_basis(L));
    const double expected = expected_flip_rate(f);
    const double bound = m.h.max_row_degree() * m.h.norm_bound();
    const auto dist = hs::sector_distribution(L);
    FixedNodeChain chain(m.h, m.psi, hs::neel_state(L));
    constexpr double t = 10.0;
    std::vector<double> rates;
    for (int k = 0; k < 10000; ++k) {
      RandomSource rng(RandomSource::derive(kSeed + 5, static_cast<std::uint64_t>(k)));
      const auto x = sample_from(dist, rng);
      rates.push_back(static_cast<double>(run_streaming(chain, x, t, rng, {}).flips) / t);
    }
    const auto est = mean_se(rates);
    const double z = (est.mean - expected) / est.se;
    r.require(std::abs(z) <= 5.0 && expected <= bound);
    r.note("L=%d flips/time=%.4f+-%.4f exact=%.5f (z=%.2f) bound=%.2f", L, est.mean, est.se,
           expected, z, bound);
  }
  return r;
}

Result truncated_sampler() {
  Result r;
  const Hs m(8);
  FixedNodeChain chain(m.h, m.psi, hs::neel_state(8));
  constexpr double eps = 0.1, t = 10.0;
  RandomSource rng(kSeed + 6);
  BitConfiguration start = hs::neel_state(8);
  StartVerification v{};
  for (int attempt = 0; attempt < 10; ++attempt) {
    v = verify_start_state(chain, start, eps, t, 0, rng);
    if (v.accepted) break;
    start = hs::random_half_filling(8, rng);
  }
  if (!v.accepted) {
    r.require(false);
    r.note("no accepted start state in 10 attempts");
    return r;
  }
  constexpr int kRuns = 10000;
  int errors = 0;
  for (int k = 0; k < kRuns; ++k)
    if (std::holds_alternative<ErrorDeclared>(run_truncated(chain, start, t, eps, rng))) ++errors;
  const double rate = static_cast<double>(errors) / kRuns;
  const double p = eps / 4;
  const double limit = p + 3.0 * std::sqrt(p * (1 - p) / kRuns);
  r.require(rate <= limit);
  r.note("start %s accepted (estimate %.4f over %lld reps); cutoff=%lld; error rate %.4f <= %.4f",
         start.to_string().c_str(), v.estimate, static_cast<long long>(v.repetitions),
         static_cast<long long>(truncation_cutoff(m.h, t, eps)), rate, limit);
  return r;
}

Result correlators() {
  Result r;
  constexpr int L = 16;
  constexpr double T = 1e5, tau0 = 100.0, h = 0.25;
  const Hs m(L);
  const auto dist = hs::sector_distribution(L);
  FixedNodeChain chain(m.h, m.psi, hs::neel_state(L));
  RandomSource rng(kSeed + 7);

  const std::vector<int> ds{1, 5};
  std::vector<StreamingDiscretizer> disc;
  for (int d : ds)
    disc.emplace_back(
        [d](const BitConfiguration& x) { return x.test(0) == x.test(d) ? 1.0 : -1.0; }, h,
        tau0, T);
  const auto summary = run_streaming(
      chain, hs::random_half_filling(L, rng), T, rng,
      [&disc](const BitConfiguration& x, double start, double dt) {
        for (auto& s : disc) s(x, start, dt);
      });

  for (std::size_t k = 0; k < ds.size(); ++k) {
    const auto series = disc[k].take();
    const auto tau = tau_integrated(series.values);
    const double mu = mean(series.values);
    const double sigma = error_bar(series.values, tau.tau);
    const double truth = hs::brute_zz(dist, 1, 1 + ds[k]);
    const double closed = hs::exact_zz(L, ds[k]);
    const double z = (mu - truth) / sigma;
    r.require(std::abs(z) <= 3.0 && !tau.flagged);
    r.note("d=%d estimate=%.5f+-%.5f brute=%.5f (z=%.2f) closed-form=%.5f ratio=%.4f", ds[k], mu,
           sigma, truth, z, closed, truth / closed);
  }
  r.note("%lld flips", static_cast<long long>(summary.flips));
  return r;
}

Result diagnostics_calibration() {
  Result r;
  constexpr std::size_t n = 1000000;
  std::vector<double> chain;
  for (double rho : {0.5, 0.9}) {
    RandomSource rng(kSeed + static_cast<std::uint64_t>(rho * 100));
    std::vector<double> x(n);
    x[0] = rng.normal();
    for (std::size_t k = 1; k < n; ++k) x[k] = rho * x[k - 1] + std::sqrt(1 - rho * rho) * rng.normal();
    const double expected = (1 + rho) / (1 - rho);
    const auto tau = tau_integrated(x);
    const double rel = std::abs(tau.tau - expected) / expected;
    r.require(rel < 0.15);
    r.note("rho=%.1f tau=%.3f expected=%.3f rel.err=%.3f", rho, tau.tau, expected, rel);
    chain = std::move(x);
  }
  // identical chains, each made of two identical halves
  std::vector<double> doubled(chain.begin(), chain.begin() + n / 2);
  doubled.insert(doubled.end(), chain.begin(), chain.begin() + n / 2);
  const double rhat = split_rhat({doubled, doubled});
  const double rhat_plain = split_rhat({chain, chain});
  r.require(std::abs(rhat - 1.0) <= 1e-12);
  r.note("identical chains: R=%.15f (halves equal), R-1=%.1e (plain AR chain)", rhat,
         rhat_plain - 1.0);
  return r;
}

// M_1 series of a Metropolis chain after burn-in.
std::vector<double> mh_series(const Hs& m, ProposalMode mode, std::int64_t burn,
                              std::int64_t steps, RandomSource& rng) {
  MetropolisChain mh(m.h, m.psi, mode);
  auto x = hs::random_half_filling(m.model.size(), rng);
  for (std::int64_t k = 0; k < burn; ++k) mh.step(x, rng);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps));
  mh.run_streaming(x, steps, rng, [&out](std::int64_t, const BitConfiguration& s) {
    out.push_back(hs::m_d(s, 1));
  });
  return out;
}

// Metropolis chain on the fixed-node graph that proposes uniformly among the
// graph neighbours of x (a state-dependent kernel with the Hastings factor
// deg(x)/deg(y)). Used only for the informational line of the comparison.
std::vector<double> neighbour_uniform_series(const Hs& m, std::int64_t burn, std::int64_t steps,
                                             RandomSource& rng) {
  const ProposalGraph graph(m.h, m.psi, ProposalMode::kFromF);
  const SwapProposals swaps(m.model.size());
  std::unordered_map<BitConfiguration, double, BitConfigurationHash> degree;
  const auto deg = [&](const BitConfiguration& x) {
    auto it = degree.find(x);
    if (it == degree.end())
      it = degree.emplace(x, static_cast<double>(graph.neighbors(x).size())).first;
    return it->second;
  };
  auto x = hs::random_half_filling(m.model.size(), rng);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (std::int64_t k = 0; k < burn + steps; ++k) {
    BitConfiguration y = swaps.propose(x, rng);
    while (!graph.contains(x, y)) y = swaps.propose(x, rng);
    const double u = rng.uniform_open0();
    const auto ratio = m.psi.log_ratio(x, y);
    if (std::log(u) <= 2.0 * ratio.log_abs + std::log(deg(x) / deg(y))) x = y;
    if (k >= burn) out.push_back(hs::m_d(x, 1));
  }
  return out;
}

Result comparative_study() {
  Result r;
  constexpr int kChains = 4;
  constexpr std::int64_t kSteps = 1000000, kBurn = 100000;
  const Observable m1 = [](const BitConfiguration& x) { return hs::m_d(x, 1); };
  std::string info;
  for (int L : {12, 16, 20}) {
    const Hs m(L);
    FixedNodeChain chain(m.h, m.psi, hs::neel_state(L));

    RandomSource calib(RandomSource::derive(kSeed + 13, static_cast<std::uint64_t>(L)));
    const auto pilot = run_streaming(chain, hs::random_half_filling(L, calib), 2000.0, calib, {});
    const double rate = static_cast<double>(pilot.flips) / 2000.0;
    // about one grid point per expected flip
    const double h = 1.0 / rate, tau0 = 200.0 / rate;
    const double T = tau0 + static_cast<double>(kSteps) * h;

    std::vector<double> ctmc, mh_h, mh_f, nb_f;
    for (int c = 0; c < kChains; ++c) {
      RandomSource rng(RandomSource::derive(kSeed + 13, static_cast<std::uint64_t>(100 * L + c)));
      StreamingDiscretizer disc(m1, h, tau0, T);
      const auto s = run_streaming(chain, hs::random_half_filling(L, rng), T, rng, disc.visitor());
      const auto series = disc.take();
      ctmc.push_back(tau_normalized(tau_integrated(series.values).tau, h, s.flips, T));
      mh_h.push_back(tau_integrated(mh_series(m, ProposalMode::kFromH, kBurn, kSteps, rng)).tau);
      mh_f.push_back(tau_integrated(mh_series(m, ProposalMode::kFromF, kBurn, kSteps, rng)).tau);
      nb_f.push_back(tau_integrated(neighbour_uniform_series(m, kBurn, kSteps, rng)).tau);
    }
    const auto c = mean_se(ctmc), th = mean_se(mh_h), tf = mean_se(mh_f), tn = mean_se(nb_f);
    const bool ctmc_ok = th.mean - c.mean > std::hypot(th.se, c.se);
    const bool f_ok = th.mean - tf.mean > std::hypot(th.se, tf.se);
    r.require(ctmc_ok && f_ok);
    r.note("L=%d tau(M1): CTMC %.2f+-%.2f [%s] MH(H) %.2f+-%.2f MH(F) %.2f+-%.2f [%s]", L, c.mean,
           c.se, ctmc_ok ? "<H" : "not <H", th.mean, th.se, tf.mean, tf.se,
           f_ok ? "<H" : "not <H");
    char buf[160];
    std::snprintf(buf, sizeof buf, " L=%d %.2f+-%.2f", L, tn.mean, tn.se);
    info += buf;
  }
  r.note("info, F graph with neighbour-uniform proposals:%s", info.c_str());
  return r;
}

Result scale_smoke() {
  Result r;
  constexpr int L = 56;
  constexpr int kTransitions = 10000;
  const Hs m(L);
  RandomSource rng(kSeed + 14);
  FixedNodeChain chain(m.h, m.psi, hs::neel_state(L));
  auto x = hs::random_half_filling(L, rng);
  double worst = 0.0, elapsed = 0.0;
  int checked = 0;
  for (int k = 0; k < kTransitions; ++k) {
    const auto next = step(chain.rates(x), rng);
    elapsed += next.delta_tau;
    if (k % 50 == 0) {
      const auto fast = m.psi.log_ratio(x, next.next_state);
      const auto slow = m.psi.log_ratio_from_scratch(x, next.next_state);
      const double diff = fast.sign == slow.sign ? std::abs(std::expm1(fast.log_abs - slow.log_abs))
                                                 : std::numeric_limits<double>::infinity();
      worst = std::max(worst, diff);
      ++checked;
    }
    x = next.next_state;
  }
  r.require(worst <= 1e-12);
  r.note("L=56: %d transitions over chain time %.2f, lambda1=%.6f; %d sampled ratios, max rel. "
         "diff %.1e",
         kTransitions, elapsed, chain.lambda1(), checked, worst);
  return r;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Result()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "fixed-node correctness", 60, fixed_node_correctness},
      {2, "generator correctness", 60, generator_correctness},
      {3, "mixing bound", 60, mixing_bound},
      {4, "sampler law", 300, sampler_law},
      {5, "flip-count identity", 300, flip_identity},
      {6, "truncated sampler", 600, truncated_sampler},
      {7, "correlators", 900, correlators},
      {8, "gap scaling", 300, gap_scaling},
      {9, "wick check", 1, wick},
      {10, "stoquasticity", 1, stoquasticity},
      {11, "real embedding", 60, real_embedding_check},
      {12, "diagnostics calibration", 120, diagnostics_calibration},
      {13, "comparative study", 1800, comparative_study},
      {14, "scale smoke test", 300, scale_smoke},
  };
  std::set<int> selected;
  for (int k = 1; k < argc; ++k) selected.insert(std::atoi(argv[k]));

  int failed = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Result res;
    try {
      res = c.run();
    } catch (const std::exception& e) {
      res.pass = false;
      res.note("exception: %s", e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      res.pass = false;
      res.note("over time budget of %.0f s", c.budget_s);
    }
    if (!res.pass) ++failed;
    std::printf("%s %2d %-24s (%.1f s) %s\n", res.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                res.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
