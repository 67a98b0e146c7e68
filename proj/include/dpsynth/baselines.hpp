#pragma once

#include <vector>

#include "dpsynth/dp.hpp"
#include "dpsynth/rng.hpp"

namespace dpsynth {

struct DpHistogramModel {
  std::vector<Histogram> histograms;  // noisy, clipped, per column
  PrivacyBudget ledger;
};

// Independent per-column DP marginals: Laplace(2/eps_col) per bin count,
// no dependence modeling.
DpHistogramModel dp_histogram_fit(const std::vector<std::vector<double>>& cols,
                                  double epsilon, std::size_t bins, Rng& rng,
                                  const NoiseSource& noise = default_noise());

std::vector<std::vector<double>> dp_histogram_sample(
    const DpHistogramModel& model, std::size_t n, Rng& rng);

std::vector<std::vector<double>> dp_histogram_generate(
    const std::vector<std::vector<double>>& cols, double epsilon,
    std::size_t bins, std::size_t n, Rng& rng,
    const NoiseSource& noise = default_noise());

}  // namespace dpsynth
