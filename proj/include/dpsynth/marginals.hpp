#pragma once

#include <span>
#include <vector>

#include "dpsynth/dp.hpp"
#include "dpsynth/rng.hpp"

namespace dpsynth {

// Non-decreasing step function over a sorted support, ending at 1.
struct StepCdf {
  std::vector<double> support;
  std::vector<double> cdf;

  double value_at(double x) const;   // F(x)
  double inverse(double u) const;    // min{v : F(v) >= u}
};

// Equal-width bin partition with cumulative masses R(B_s); first bin is
// closed, the rest are left-open right-closed.
struct FrequencyTable {
  std::vector<double> edges;       // size bins+1 (a degenerate column: one bin)
  std::vector<double> cumulative;  // size bins, non-decreasing to 1
};

// Columns with more distinct values than this get equal-width
// pre-quantization before the unique-value histogram, keeping the EFPA
// transform length bounded.
inline constexpr std::size_t kMaxUniqueSupport = 10000;

StepCdf empirical_cdf(std::span<const double> col);
Histogram histogram_unique(std::span<const double> col,
                           std::size_t max_support = kMaxUniqueSupport);
Histogram binned_counts(std::span<const double> col, std::size_t bins);
FrequencyTable histogram_binned(std::span<const double> col, std::size_t bins);

StepCdf cdf_from_histogram(const Histogram& h);
FrequencyTable table_from_histogram(const Histogram& h);

StepCdf dp_marginal(std::span<const double> col, double epsilon, Rng& rng,
                    const NoiseSource& noise = default_noise());
FrequencyTable dp_frequency_table(std::span<const double> col,
                                  std::size_t bins, double epsilon, Rng& rng,
                                  const NoiseSource& noise = default_noise());

double inverse_cdf(const StepCdf& f, double u);

}  // namespace dpsynth
