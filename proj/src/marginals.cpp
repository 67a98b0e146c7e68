#include "dpsynth/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpsynth/table.hpp"

namespace dpsynth {

double StepCdf::value_at(double x) const {
  auto it = std::upper_bound(support.begin(), support.end(), x);
  if (it == support.begin()) return 0.0;
  return cdf[static_cast<std::size_t>(it - support.begin()) - 1];
}

double StepCdf::inverse(double u) const { return inverse_cdf(*this, u); }

StepCdf empirical_cdf(std::span<const double> col) {
  if (col.empty()) throw DataError("empirical_cdf: empty column");
  std::vector<double> sorted(col.begin(), col.end());
  std::sort(sorted.begin(), sorted.end());
  StepCdf f;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    f.support.push_back(sorted[i]);
    f.cdf.push_back(static_cast<double>(i + 1) / n);
  }
  f.cdf.back() = 1.0;
  return f;
}

Histogram histogram_unique(std::span<const double> col, std::size_t max_support) {
  if (col.empty()) throw DataError("histogram_unique: empty column");
  std::vector<double> vals(col.begin(), col.end());
  std::sort(vals.begin(), vals.end());
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < vals.size(); ++i) {
    if (vals[i] != vals[i - 1]) ++distinct;
  }
  if (distinct > max_support) {
    // Quantize to equal-width cell midpoints over the observed range.
    double lo = vals.front(), hi = vals.back();
    double width = (hi - lo) / static_cast<double>(max_support);
    for (double& v : vals) {
      auto cell = static_cast<std::size_t>((v - lo) / width);
      if (cell >= max_support) cell = max_support - 1;
      v = lo + (static_cast<double>(cell) + 0.5) * width;
    }
    std::sort(vals.begin(), vals.end());
  }
  Histogram h;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!h.values.empty() && vals[i] == h.values.back()) {
      h.counts.back() += 1.0;
    } else {
      h.values.push_back(vals[i]);
      h.counts.push_back(1.0);
    }
  }
  return h;
}

Histogram binned_counts(std::span<const double> col, std::size_t bins) {
  if (bins < 1) throw ConfigError("binned_counts: bins must be >= 1");
  if (col.empty()) throw DataError("binned_counts: empty column");
  double lo = col[0], hi = col[0];
  for (double v : col) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Histogram h;
  if (lo == hi) {
    // Degenerate single bin [c, c].
    h.edges = {lo, hi};
    h.counts = {static_cast<double>(col.size())};
    return h;
  }
  h.edges.resize(bins + 1);
  for (std::size_t s = 0; s <= bins; ++s) {
    h.edges[s] = lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(bins);
  }
  h.edges.back() = hi;
  h.counts.assign(bins, 0.0);
  for (double v : col) {
    // First bin closed, others left-open right-closed.
    auto it = std::lower_bound(h.edges.begin() + 1, h.edges.end(), v);
    auto s = static_cast<std::size_t>(it - h.edges.begin()) - 1;
    if (s >= bins) s = bins - 1;
    h.counts[s] += 1.0;
  }
  return h;
}

StepCdf cdf_from_histogram(const Histogram& h) {
  StepCdf f;
  if (h.values.empty()) throw DataError("cdf_from_histogram: needs value support");
  double total = 0.0;
  for (double c : h.counts) total += c;
  f.support = h.values;
  f.cdf.resize(h.counts.size());
  if (total <= 0.0) {
    // No surviving mass: fall back to a uniform distribution over the support.
    for (std::size_t i = 0; i < f.cdf.size(); ++i) {
      f.cdf[i] = static_cast<double>(i + 1) / static_cast<double>(f.cdf.size());
    }
  } else {
    double cum = 0.0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      cum += h.counts[i];
      f.cdf[i] = std::clamp(cum / total, 0.0, 1.0);
    }
  }
  f.cdf.back() = 1.0;
  for (std::size_t i = 1; i < f.cdf.size(); ++i) {
    f.cdf[i] = std::max(f.cdf[i], f.cdf[i - 1]);
  }
  return f;
}

FrequencyTable table_from_histogram(const Histogram& h) {
  if (h.edges.empty()) throw DataError("table_from_histogram: needs bin edges");
  FrequencyTable t;
  t.edges = h.edges;
  double total = 0.0;
  for (double c : h.counts) total += c;
  t.cumulative.resize(h.counts.size());
  if (total <= 0.0) {
    for (std::size_t i = 0; i < t.cumulative.size(); ++i) {
      t.cumulative[i] = static_cast<double>(i + 1) / static_cast<double>(t.cumulative.size());
    }
  } else {
    double cum = 0.0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      cum += h.counts[i];
      t.cumulative[i] = std::clamp(cum / total, 0.0, 1.0);
    }
  }
  t.cumulative.back() = 1.0;
  for (std::size_t i = 1; i < t.cumulative.size(); ++i) {
    t.cumulative[i] = std::max(t.cumulative[i], t.cumulative[i - 1]);
  }
  return t;
}

StepCdf dp_marginal(std::span<const double> col, double epsilon, Rng& rng,
                    const NoiseSource& noise) {
  if (!(epsilon > 0.0)) throw ConfigError("dp_marginal: epsilon must be positive");
  Histogram h = histogram_unique(col);
  Histogram noisy = efpa(h, epsilon, rng, noise);
  return cdf_from_histogram(noisy);
}

FrequencyTable dp_frequency_table(std::span<const double> col, std::size_t bins,
                                  double epsilon, Rng& rng,
                                  const NoiseSource& noise) {
  if (!(epsilon > 0.0)) throw ConfigError("dp_frequency_table: epsilon must be positive");
  Histogram h = binned_counts(col, bins);
  Histogram noisy = efpa(h, epsilon, rng, noise);
  return table_from_histogram(noisy);
}

FrequencyTable histogram_binned(std::span<const double> col, std::size_t bins) {
  return table_from_histogram(binned_counts(col, bins));
}

double inverse_cdf(const StepCdf& f, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw ConfigError("inverse_cdf: u outside [0,1]");
  auto it = std::lower_bound(f.cdf.begin(), f.cdf.end(), u);
  if (it == f.cdf.end()) return f.support.back();
  return f.support[static_cast<std::size_t>(it - f.cdf.begin())];
}

}  // namespace dpsynth
