#include "dpsynth/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "dpsynth/stats.hpp"

namespace dpsynth {

std::size_t EncoderSpec::interval_of(const std::string& label) const {
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == label) return i;
  }
  throw DataError("unknown label: " + label);
}

EncoderSpec fit_uniform_encoder(const std::vector<std::string>& col) {
  if (col.empty()) throw DataError("fit_uniform_encoder: empty column");
  std::map<std::string, std::size_t> freq;
  for (const auto& v : col) ++freq[v];
  std::vector<std::pair<std::string, std::size_t>> items(freq.begin(), freq.end());
  // Descending frequency, lexicographic tie-break.
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  EncoderSpec spec;
  spec.breakpoints.push_back(0.0);
  double n = static_cast<double>(col.size());
  double cum = 0.0;
  for (const auto& [label, count] : items) {
    spec.order.push_back(label);
    cum += static_cast<double>(count) / n;
    spec.breakpoints.push_back(cum);
  }
  spec.breakpoints.back() = 1.0;
  return spec;
}

double sample_truncated_gaussian(double a, double b, double mu, double sigma,
                                 Rng& rng) {
  if (!(a < b)) throw ConfigError("sample_truncated_gaussian: need a < b");
  if (!(sigma > 0.0)) throw ConfigError("sample_truncated_gaussian: sigma <= 0");
  double lo = normal_cdf((a - mu) / sigma);
  double hi = normal_cdf((b - mu) / sigma);
  double u = rng.uniform();
  double p = lo + u * (hi - lo);
  double x;
  if (p <= 0.0 || p >= 1.0) {
    x = (a + b) / 2.0;  // numerically degenerate truncation window
  } else {
    x = mu + sigma * normal_quantile(p);
  }
  return std::clamp(x, a, b);
}

std::vector<double> encode(const EncoderSpec& spec,
                           const std::vector<std::string>& col, Rng& rng,
                           const EncodeOptions& opts) {
  std::vector<double> out;
  out.reserve(col.size());
  for (const auto& label : col) {
    std::size_t i = spec.interval_of(label);
    double a = spec.breakpoints[i];
    double b = spec.breakpoints[i + 1];
    double mu = opts.literal_half_width_center ? (b - a) / 2.0 : (a + b) / 2.0;
    double sigma = (b - a) / 6.0;
    double x = sample_truncated_gaussian(a, b, mu, sigma, rng);
    // Keep the value strictly inside [a, b) so decode is exact.
    x = std::min(x, std::nextafter(b, a));
    x = std::max(x, a);
    out.push_back(x);
  }
  return out;
}

std::vector<std::string> decode(const EncoderSpec& spec,
                                const std::vector<double>& col) {
  std::vector<std::string> out;
  out.reserve(col.size());
  for (double v : col) {
    double x = std::clamp(v, 0.0, 1.0);
    // Intervals are [b_i, b_{i+1}); the last is right-closed.
    auto it = std::upper_bound(spec.breakpoints.begin(), spec.breakpoints.end(), x);
    std::size_t i = it == spec.breakpoints.begin()
                        ? 0
                        : static_cast<std::size_t>(it - spec.breakpoints.begin()) - 1;
    if (i >= spec.order.size()) i = spec.order.size() - 1;
    out.push_back(spec.order[i]);
  }
  return out;
}

}  // namespace dpsynth
