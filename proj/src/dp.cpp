#include "dpsynth/dp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpsynth/kernels.hpp"
#include "dpsynth/stats.hpp"
#include "dpsynth/table.hpp"

namespace dpsynth {

void PrivacyBudget::spend(std::string label, double eps) {
  entries_.push_back({std::move(label), eps});
  if (spent() > epsilon_ + 1e-12) {
    throw ConfigError("privacy budget exceeded");
  }
}

double PrivacyBudget::spent() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.epsilon;
  return s;
}

double NoiseSource::laplace(double scale, Rng& rng) const {
  return laplace_noise(scale, rng);
}

std::size_t NoiseSource::pick_index(std::span<const double> costs,
                                    double epsilon, Rng& rng) const {
  return exponential_mechanism(costs, epsilon, rng);
}

const NoiseSource& default_noise() {
  static const NoiseSource instance;
  return instance;
}

double laplace_noise(double scale, Rng& rng) {
  if (!(scale > 0.0)) throw ConfigError("laplace_noise: scale must be positive");
  return laplace_quantile(rng.uniform(), scale);
}

std::size_t exponential_mechanism(std::span<const double> costs, double epsilon,
                                  Rng& rng) {
  if (costs.empty()) throw ConfigError("exponential_mechanism: empty costs");
  double min_cost = costs[0];
  for (double c : costs) {
    if (std::isnan(c)) throw ConfigError("exponential_mechanism: NaN cost");
    min_cost = std::min(min_cost, c);
  }
  // Subtract the minimum before exponentiating to avoid underflow.
  std::vector<double> weights(costs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    weights[i] = std::exp(-epsilon * (costs[i] - min_cost) / 4.0);
    total += weights[i];
  }
  double u = rng.uniform() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    cum += weights[i];
    if (u <= cum) return i;
  }
  return costs.size() - 1;
}

std::vector<double> dft_real(std::span<const double> h) {
#ifdef _OPENMP
  if (h.size() >= 256) return kernels::dft_real_parallel(h);
#endif
  return kernels::dft_real_serial(h);
}

std::vector<double> idft_real(std::span<const double> f, std::size_t n) {
#ifdef _OPENMP
  if (n >= 256) return kernels::idft_real_parallel(f, n);
#endif
  return kernels::idft_real_serial(f, n);
}

double efpa_cost(std::span<const double> spectrum, std::size_t k,
                 double epsilon) {
  // Coefficient i occupies packed entries [2i-2, 2i-1] past DC; keeping the
  // first k coefficients retains 2k-1 packed entries.
  double tail = 0.0;
  for (std::size_t j = 2 * k - 1; j < spectrum.size(); ++j) {
    tail += spectrum[j] * spectrum[j];
  }
  double z = 2.0 * static_cast<double>(k) + 1.0;
  return std::sqrt(tail) + 2.0 * z / epsilon;
}

void clip_and_renormalize(std::vector<double>& counts) {
  double noisy_total = 0.0;
  for (double c : counts) noisy_total += c;
  double clipped_total = 0.0;
  for (double& c : counts) {
    if (c < 0.0) c = 0.0;
    clipped_total += c;
  }
  if (clipped_total <= 0.0) return;
  double target = std::max(noisy_total, 0.0);
  double scale = target / clipped_total;
  for (double& c : counts) c *= scale;
}

Histogram efpa(const Histogram& h, double epsilon, Rng& rng,
               const NoiseSource& noise) {
  if (!(epsilon > 0.0)) throw ConfigError("efpa: epsilon must be positive");
  if (h.counts.empty()) throw DataError("efpa: empty histogram");
  std::vector<double> counts = h.counts;
  bool padded = counts.size() % 2 == 0;
  if (padded) counts.push_back(0.0);  // the transform length must be odd
  const std::size_t n = counts.size();
  const std::size_t m = (n + 1) / 2;

  std::vector<double> spectrum = dft_real(counts);
  std::vector<double> costs(m);
  for (std::size_t k = 1; k <= m; ++k) {
    costs[k - 1] = efpa_cost(spectrum, k, epsilon);
  }
  std::size_t k = noise.pick_index(costs, epsilon, rng) + 1;
  double z = 2.0 * static_cast<double>(k) + 1.0;
  double scale = 2.0 * std::sqrt(z) / epsilon;

  std::size_t retained = 2 * k - 1;
  std::vector<double> noisy(spectrum.begin(),
                            spectrum.begin() + static_cast<std::ptrdiff_t>(retained));
  for (double& f : noisy) f += noise.laplace(scale, rng);

  std::vector<double> rebuilt = idft_real(noisy, n);
  if (padded) rebuilt.pop_back();
  clip_and_renormalize(rebuilt);

  Histogram out = h;
  out.counts = std::move(rebuilt);
  return out;
}

Histogram naive_dp_histogram(const Histogram& h, double epsilon,
                             double sensitivity, Rng& rng,
                             const NoiseSource& noise) {
  if (!(epsilon > 0.0)) throw ConfigError("naive_dp_histogram: epsilon must be positive");
  Histogram out = h;
  double scale = sensitivity / epsilon;
  for (double& c : out.counts) c += noise.laplace(scale, rng);
  clip_and_renormalize(out.counts);
  return out;
}

double budget_split_dpnpc(double epsilon, std::size_t p) {
  if (!(epsilon > 0.0)) throw ConfigError("budget_split_dpnpc: epsilon must be positive");
  if (p < 1) throw ConfigError("budget_split_dpnpc: p must be >= 1");
  return epsilon / (2.0 * static_cast<double>(p));
}

}  // namespace dpsynth
