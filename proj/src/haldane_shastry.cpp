#include "fnmc/haldane_shastry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "fnmc/errors.hpp"

namespace fnmc::hs {

namespace {

constexpr double kPi = std::numbers::pi;

void require_even(int L) {
  if (L < 2 || L % 2 != 0)
    throw std::invalid_argument("Haldane-Shastry: L must be even and >= 2, got " +
                                std::to_string(L));
}

void require_sector_cap(int L) {
  if (L > 24)
    throw CapExceeded("Haldane-Shastry: sector enumeration limited to L <= 24");
}

}  // namespace

Model::Model(int L) : L_(L) {
  require_even(L);
  if (L > BitConfiguration::kMaxQubits)
    throw std::invalid_argument("Haldane-Shastry: L too large");
  coupling_by_distance_.assign(static_cast<std::size_t>(L), 0.0);
  log_sin_.assign(static_cast<std::size_t>(L), 0.0);
  for (int d = 1; d < L; ++d) {
    const double s = std::sin(kPi * d / L);
    const double chord = L / kPi * s;
    coupling_by_distance_[static_cast<std::size_t>(d)] = 1.0 / (4.0 * chord * chord);
    log_sin_[static_cast<std::size_t>(d)] = std::log(std::abs(s));
  }
}

double Model::coupling(int i, int j) const {
  if (i == j) throw std::invalid_argument("coupling: i == j");
  return coupling_by_distance_[static_cast<std::size_t>(std::abs(i - j))];
}

SparseHamiltonian hamiltonian(int L) {
  const Model model(L);
  std::vector<PauliTerm> terms;
  terms.reserve(static_cast<std::size_t>(3 * L * (L - 1) / 2));
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) {
      const double J = model.coupling(i, j);
      for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z})
        terms.emplace_back(J, std::vector<PauliFactor>{{i, p}, {j, p}});
    }
  return SparseHamiltonian(L, std::move(terms));
}

SignedLogAmplitude GroundStateOracle::amplitude(const BitConfiguration& x) const {
  const int L = model_.size();
  if (x.size() != L) throw std::invalid_argument("amplitude: wrong qubit count");
  if (x.hamming_weight() != L / 2) return {};
  std::vector<int> occupied;
  occupied.reserve(static_cast<std::size_t>(L / 2));
  int sign_exponent = 0;
  for (int i = 0; i < L; ++i)
    if (x.test(i)) {
      occupied.push_back(i);
      sign_exponent += i;
    }
  long double log_abs = 0.0L;
  for (std::size_t a = 0; a < occupied.size(); ++a)
    for (std::size_t b = a + 1; b < occupied.size(); ++b)
      log_abs += 2.0L * model_.log_sin(occupied[b] - occupied[a]);
  return {sign_exponent % 2 ? -1 : 1, static_cast<double>(log_abs)};
}

SignedLogAmplitude GroundStateOracle::log_ratio_from_scratch(
    const BitConfiguration& x, const BitConfiguration& y) const {
  return AmplitudeOracle::log_ratio(x, y);
}

SignedLogAmplitude GroundStateOracle::log_ratio(const BitConfiguration& x,
                                                const BitConfiguration& y) const {
  const int L = model_.size();
  const BitConfiguration diff = x ^ y;
  if (x.hamming_weight() != L / 2 || diff.hamming_weight() != 2)
    return AmplitudeOracle::log_ratio(x, y);

  int from = -1, to = -1;  // occupied in x / occupied in y
  for (int i = 0; i < L; ++i)
    if (diff.test(i)) (x.test(i) ? from : to) = i;
  if (from < 0 || to < 0) return AmplitudeOracle::log_ratio(x, y);

  long double delta = 0.0L;
  for (int c = 0; c < L; ++c) {
    if (c == from || !x.test(c)) continue;
    delta += 2.0L * (static_cast<long double>(model_.log_sin(std::abs(c - to))) -
                     model_.log_sin(std::abs(c - from)));
  }
  const int sign = (std::abs(to - from) % 2) ? -1 : 1;
  return {sign, static_cast<double>(delta)};
}

BitConfiguration random_half_filling(int L, RandomSource& rng) {
  require_even(L);
  std::vector<int> sites(static_cast<std::size_t>(L));
  std::iota(sites.begin(), sites.end(), 0);
  for (int k = L - 1; k > 0; --k)
    std::swap(sites[static_cast<std::size_t>(k)],
              sites[rng.index(static_cast<std::uint64_t>(k) + 1)]);
  BitConfiguration x(L);
  for (int k = 0; k < L / 2; ++k) x.set(sites[static_cast<std::size_t>(k)]);
  return x;
}

BitConfiguration neel_state(int L) {
  require_even(L);
  BitConfiguration x(L);
  for (int i = 0; i < L; i += 2) x.set(i);
  return x;
}

double exact_zz(int L, int d) {
  require_even(L);
  if (d < 1 || d > L - 1) throw std::invalid_argument("exact_zz: need 1 <= d <= L-1");
  const double diff = -d;  // i - j
  double sum = 0.0;
  for (int k = 1; k <= L / 2; ++k)
    sum += std::sin((2 * k - 1) * kPi * diff / L) / (2 * k - 1);
  const double sign = (d % 2) ? -1.0 : 1.0;
  return sum * (sign / (2.0 * L * std::sin(kPi * diff / L)));
}

SectorDistribution sector_distribution(int L) {
  require_even(L);
  require_sector_cap(L);
  const Model model(L);
  const GroundStateOracle psi(model);
  SectorDistribution out;
  std::vector<double> logs;
  std::vector<int> signs;
  // Gosper's hack over weight-L/2 masks in increasing order
  const std::uint64_t limit = std::uint64_t{1} << L;
  for (std::uint64_t v = (std::uint64_t{1} << (L / 2)) - 1; v < limit;) {
    const BitConfiguration x(L, v);
    const auto a = psi.amplitude(x);
    out.states.push_back(x);
    logs.push_back(a.log_abs);
    signs.push_back(a.sign);
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
  const double max_log = *std::max_element(logs.begin(), logs.end());
  double norm = 0.0;
  out.amplitudes.resize(logs.size());
  for (std::size_t k = 0; k < logs.size(); ++k) {
    out.amplitudes[k] = signs[k] * std::exp(logs[k] - max_log);
    norm += out.amplitudes[k] * out.amplitudes[k];
  }
  const double scale = 1.0 / std::sqrt(norm);
  out.probabilities.resize(logs.size());
  for (std::size_t k = 0; k < logs.size(); ++k) {
    out.amplitudes[k] *= scale;
    out.probabilities[k] = out.amplitudes[k] * out.amplitudes[k];
  }
  return out;
}

double brute_zz(const SectorDistribution& dist, int i, int j) {
  double acc = 0.0;
  for (std::size_t k = 0; k < dist.states.size(); ++k) {
    const auto& x = dist.states[k];
    acc += (x.test(i - 1) == x.test(j - 1) ? 1.0 : -1.0) * dist.probabilities[k];
  }
  return acc;
}

double brute_zz(int L, int i, int j) {
  if (i < 1 || j < 1 || i > L || j > L)
    throw std::invalid_argument("brute_zz: sites are 1-based in [1, L]");
  return brute_zz(sector_distribution(L), i, j);
}

double m_d(const BitConfiguration& x, int d) {
  const int L = x.size();
  if (d < 1 || d > L - 1) throw std::invalid_argument("m_d: need 1 <= d <= L-1");
  int aligned = 0;
  for (int i = 1; i <= L; ++i) {
    const int j = ((i + d - 1) % L) + 1;
    if (x.test(i - 1) == x.test(j - 1)) ++aligned;
  }
  return static_cast<double>(2 * aligned - L) / L;
}

CorruptedState corrupt(const Model& model, double kappa, std::uint64_t seed) {
  const int L = model.size();
  require_sector_cap(L);
  if (!(kappa > 0.0)) throw std::invalid_argument("corrupt: kappa must be positive");
  const auto dist = sector_distribution(L);
  const std::size_t dim = std::size_t{1} << L;
  std::vector<double> exact(dim, 0.0);
  for (std::size_t k = 0; k < dist.states.size(); ++k)
    exact[dist.states[k].to_index()] = dist.amplitudes[k];

  RandomSource rng(seed);
  const double sigma = kappa / static_cast<double>(dim);
  std::vector<double> noisy(dim);
  double norm = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double v;
    do {
      v = exact[k] + sigma * rng.normal();
    } while (v == 0.0);
    noisy[k] = v;
    norm += v * v;
  }
  const double scale = 1.0 / std::sqrt(norm);
  double l1 = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    noisy[k] *= scale;
    l1 += std::abs(exact[k] * exact[k] - noisy[k] * noisy[k]);
  }
  return CorruptedState{TableOracle(L, std::move(noisy)), l1};
}

}  // namespace fnmc::hs
