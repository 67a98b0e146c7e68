#include "dpsynth/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "dpsynth/marginals.hpp"
#include "dpsynth/table.hpp"

namespace dpsynth {

DpHistogramModel dp_histogram_fit(const std::vector<std::vector<double>>& cols,
                                  double epsilon, std::size_t bins, Rng& rng,
                                  const NoiseSource& noise) {
  if (!(epsilon > 0.0)) throw ConfigError("dp_histogram_fit: epsilon must be positive");
  if (cols.empty() || cols[0].empty()) throw DataError("dp_histogram_fit: empty table");
  const std::size_t p = cols.size();
  double eps_col = epsilon / static_cast<double>(p);
  DpHistogramModel model;
  model.ledger = PrivacyBudget(epsilon);
  for (std::size_t i = 0; i < p; ++i) {
    Rng col_rng = rng.substream("dphist.column").substream(i);
    Histogram h = binned_counts(cols[i], bins);
    model.histograms.push_back(
        naive_dp_histogram(h, eps_col, /*sensitivity=*/2.0, col_rng, noise));
    model.ledger.spend("column[" + std::to_string(i) + "]", eps_col);
  }
  return model;
}

std::vector<std::vector<double>> dp_histogram_sample(
    const DpHistogramModel& model, std::size_t n, Rng& rng) {
  const std::size_t p = model.histograms.size();
  std::vector<std::vector<double>> out(p, std::vector<double>(n));
  Rng draw = rng.substream("dphist.sample");
  for (std::size_t i = 0; i < p; ++i) {
    const Histogram& h = model.histograms[i];
    double total = 0.0;
    for (double c : h.counts) total += c;
    std::vector<double> cumulative(h.counts.size());
    double cum = 0.0;
    for (std::size_t s = 0; s < h.counts.size(); ++s) {
      cum += total > 0.0 ? h.counts[s] / total
                         : 1.0 / static_cast<double>(h.counts.size());
      cumulative[s] = cum;
    }
    cumulative.back() = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      double u = draw.uniform();
      auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
      std::size_t s = it == cumulative.end()
                          ? cumulative.size() - 1
                          : static_cast<std::size_t>(it - cumulative.begin());
      double a = h.edges[s];
      double b = h.edges[s + 1];
      out[i][r] = a + (b - a) * draw.uniform();
    }
  }
  return out;
}

std::vector<std::vector<double>> dp_histogram_generate(
    const std::vector<std::vector<double>>& cols, double epsilon,
    std::size_t bins, std::size_t n, Rng& rng, const NoiseSource& noise) {
  DpHistogramModel model = dp_histogram_fit(cols, epsilon, bins, rng, noise);
  return dp_histogram_sample(model, n, rng);
}

}  // namespace dpsynth
