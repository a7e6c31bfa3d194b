#include "microtrap/loading_detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "microtrap/rng.hpp"

namespace microtrap {

namespace {

// Substream tags keeping the independent draw families separate.
constexpr std::uint64_t kLoadStream = 1;
constexpr std::uint64_t kSignalStream = 2;
constexpr std::uint64_t kProjectStream = 3;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

LoadingMode LoadingMode::poisson(double mean) {
  LoadingMode m;
  m.tag = Tag::Poisson;
  m.mean = mean;
  return m;
}

LoadingMode LoadingMode::collisional_blockade() {
  LoadingMode m;
  m.tag = Tag::CollisionalBlockade;
  m.p_single = kBlockadeSingleAtomProbability;
  return m;
}

LoadingMode LoadingMode::optimized() {
  LoadingMode m;
  m.tag = Tag::Optimized;
  m.p_single = kOptimizedSingleAtomProbability;
  return m;
}

void LoadingMode::validate() const {
  if (tag == Tag::Poisson) {
    if (mean <= 0.0)
      throw std::invalid_argument("loading: Poisson mean must be > 0");
  } else {
    if (p_single < 0.0 || p_single > 1.0)
      throw std::invalid_argument("loading: probability must lie in [0, 1]");
  }
}

std::string LoadingMode::name() const {
  switch (tag) {
    case Tag::Poisson: return "poisson";
    case Tag::CollisionalBlockade: return "collisional_blockade";
    case Tag::Optimized: return "optimized";
  }
  return "unknown";
}

double LoadingMode::probability_of(int n) const {
  validate();
  if (n < 0) return 0.0;
  if (tag == Tag::Poisson) {
    // exp(-mean) * mean^n / n!
    double p = std::exp(-mean);
    for (int k = 1; k <= n; ++k) p *= mean / k;
    return p;
  }
  if (n == 0) return 1.0 - p_single;
  if (n == 1) return p_single;
  return 0.0;
}

RegisterState load_register(const SiteGrid& grid, const LoadingMode& mode,
                            std::uint64_t seed) {
  mode.validate();
  RegisterState state = RegisterState::from_grid(grid);
  for (std::size_t i = 0; i < state.sites.size(); ++i) {
    Rng rng(Rng::mix(seed, kLoadStream, i));
    int n = 0;
    if (mode.tag == LoadingMode::Tag::Poisson)
      n = rng.poisson(mode.mean);
    else
      n = rng.bernoulli(mode.p_single) ? 1 : 0;
    state.set_occupancy(i, n);
  }
  return state;
}

void DetectionModel::validate() const {
  if (per_atom <= 0.0)
    throw std::invalid_argument("detection: per-atom signal must be > 0");
  if (noise_sigma < 0.0)
    throw std::invalid_argument("detection: noise sigma must be >= 0");
}

std::vector<double> simulate_fluorescence(const std::vector<int>& occupancy,
                                          const DetectionModel& model,
                                          std::uint64_t seed) {
  model.validate();
  std::vector<double> signals(occupancy.size());
  for (std::size_t i = 0; i < occupancy.size(); ++i) {
    if (occupancy[i] < 0)
      throw std::invalid_argument("fluorescence: occupancy must be >= 0");
    Rng rng(Rng::mix(seed, kSignalStream, i));
    signals[i] = model.level(occupancy[i]) +
                 (model.noise_sigma > 0.0 ? rng.gaussian(0.0, model.noise_sigma)
                                          : 0.0);
  }
  return signals;
}

DetectionRecord classify_counts(const std::vector<double>& signals,
                                const DetectionModel& model) {
  model.validate();
  DetectionRecord rec;
  rec.signals = signals;
  rec.counts.resize(signals.size());
  rec.anomalous.resize(signals.size());
  const double floor = model.background - 5.0 * model.noise_sigma;
  int max_count = 0;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    const double excess = (signals[i] - model.background) / model.per_atom;
    // Midpoint rule; the ceil puts exact-threshold signals on the lower level.
    const int n = std::max(0, static_cast<int>(std::ceil(excess - 0.5)));
    rec.counts[i] = n;
    rec.anomalous[i] = signals[i] < floor;
    max_count = std::max(max_count, n);
  }
  for (int n = 1; n <= max_count + 1; ++n)
    rec.thresholds.push_back(model.threshold(n));
  return rec;
}

std::vector<HistogramBin> signal_histogram(const std::vector<double>& signals,
                                           double bin_width) {
  if (bin_width <= 0.0)
    throw std::invalid_argument("histogram: bin width must be > 0");
  if (signals.empty()) return {};
  const auto [lo, hi] = std::minmax_element(signals.begin(), signals.end());
  const long first = static_cast<long>(std::floor(*lo / bin_width));
  const long last = static_cast<long>(std::floor(*hi / bin_width));
  std::vector<HistogramBin> bins(static_cast<std::size_t>(last - first + 1));
  for (std::size_t k = 0; k < bins.size(); ++k)
    bins[k].center = (static_cast<double>(first + static_cast<long>(k)) + 0.5) *
                     bin_width;
  for (const double s : signals) {
    const long idx = static_cast<long>(std::floor(s / bin_width)) - first;
    bins[static_cast<std::size_t>(idx)].count += 1;
  }
  return bins;
}

double misclassification_probability(const DetectionModel& model,
                                     const LoadingMode& mode) {
  model.validate();
  mode.validate();
  if (model.noise_sigma == 0.0) return 0.0;
  const double tail = normal_cdf(-(model.per_atom / 2.0) / model.noise_sigma);
  // A zero-atom site can only misread upward; everything else has both
  // neighbours. Expected boundary count = 1 * P(0) + 2 * (1 - P(0)).
  const double boundaries = 2.0 - mode.probability_of(0);
  return tail * boundaries;
}

ReadoutResult readout_population(const RegisterState& state, bool select_excited,
                                 const DetectionModel& model,
                                 std::uint64_t seed) {
  model.validate();
  ReadoutResult out;
  out.selected_counts.resize(state.sites.size());
  out.fractions.resize(state.sites.size());
  out.signals.resize(state.sites.size());
  std::vector<int> selected(state.sites.size());
  for (std::size_t i = 0; i < state.sites.size(); ++i) {
    const Site& site = state.sites[i];
    int hit = 0;
    if (site.occupancy > 0) {
      const double p1 = site.qubit ? population_excited(*site.qubit) : 0.0;
      const double p = select_excited ? p1 : 1.0 - p1;
      Rng rng(Rng::mix(seed, kProjectStream, i));
      hit = rng.binomial(site.occupancy, p);
    }
    out.selected_counts[i] = hit;
    out.fractions[i] =
        site.occupancy > 0 ? static_cast<double>(hit) / site.occupancy : 0.0;
    selected[i] = hit;
  }
  out.signals = simulate_fluorescence(selected, model, seed);
  return out;
}

}  // namespace microtrap
