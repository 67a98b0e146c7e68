#pragma once

#include <vector>

#include "dpsynth/dp.hpp"
#include "dpsynth/marginals.hpp"
#include "dpsynth/rng.hpp"

namespace dpsynth {

// Fitted non-parametric copula model: per-column CDFs and frequency tables
// plus the rank matrix U. The ledger is empty for the non-private fit.
struct NpcModel {
  std::vector<StepCdf> cdfs;
  std::vector<FrequencyTable> tables;
  std::vector<std::vector<double>> ranks;  // U, column-major, n rows each
  PrivacyBudget ledger;

  std::size_t columns() const { return cdfs.size(); }
  std::size_t train_rows() const { return ranks.empty() ? 0 : ranks[0].size(); }
};

struct NpcSampleOptions {
  // Default draws a fresh uniform per cell; the alternative shares one
  // uniform across the row.
  bool shared_uniform_per_row = false;
};

NpcModel npc_fit(const std::vector<std::vector<double>>& cols,
                 const std::vector<std::size_t>& bins);

NpcModel dpnpc_fit(const std::vector<std::vector<double>>& cols,
                   const std::vector<std::size_t>& bins, double epsilon,
                   Rng& rng, const NoiseSource& noise = default_noise());

std::vector<std::vector<double>> npc_sample(const NpcModel& model,
                                            std::size_t n, Rng& rng,
                                            const NpcSampleOptions& opts = {});

}  // namespace dpsynth
