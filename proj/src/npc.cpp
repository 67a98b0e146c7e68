#include "dpsynth/npc.hpp"

#include <algorithm>
#include <stdexcept>

#include "dpsynth/table.hpp"

namespace dpsynth {

namespace {

void fill_ranks(NpcModel& model, const std::vector<std::vector<double>>& cols) {
  const std::size_t p = cols.size();
  model.ranks.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    model.ranks[i].resize(cols[i].size());
    for (std::size_t j = 0; j < cols[i].size(); ++j) {
      model.ranks[i][j] = model.cdfs[i].value_at(cols[i][j]);
    }
  }
}

std::vector<std::size_t> resolve_bins(const std::vector<std::size_t>& bins,
                                      std::size_t p) {
  if (bins.size() == 1) return std::vector<std::size_t>(p, bins[0]);
  if (bins.size() != p) throw ConfigError("bins must be scalar or one per column");
  return bins;
}

}  // namespace

NpcModel npc_fit(const std::vector<std::vector<double>>& cols,
                 const std::vector<std::size_t>& bins) {
  if (cols.empty() || cols[0].empty()) throw DataError("npc_fit: empty table");
  auto t = resolve_bins(bins, cols.size());
  NpcModel model;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    model.cdfs.push_back(empirical_cdf(cols[i]));
    model.tables.push_back(histogram_binned(cols[i], t[i]));
  }
  fill_ranks(model, cols);
  return model;
}

NpcModel dpnpc_fit(const std::vector<std::vector<double>>& cols,
                   const std::vector<std::size_t>& bins, double epsilon,
                   Rng& rng, const NoiseSource& noise) {
  if (cols.empty() || cols[0].empty()) throw DataError("dpnpc_fit: empty table");
  if (!(epsilon > 0.0)) throw ConfigError("dpnpc_fit: epsilon must be positive");
  auto t = resolve_bins(bins, cols.size());
  const std::size_t p = cols.size();
  double eps_call = budget_split_dpnpc(epsilon, p);
  NpcModel model;
  model.ledger = PrivacyBudget(epsilon);
  for (std::size_t i = 0; i < p; ++i) {
    Rng col_rng = rng.substream("dpnpc.marginal").substream(i);
    model.cdfs.push_back(dp_marginal(cols[i], eps_call, col_rng, noise));
    model.ledger.spend("marginal[" + std::to_string(i) + "]", eps_call);
  }
  for (std::size_t i = 0; i < p; ++i) {
    Rng col_rng = rng.substream("dpnpc.freq").substream(i);
    model.tables.push_back(
        dp_frequency_table(cols[i], t[i], eps_call, col_rng, noise));
    model.ledger.spend("freq[" + std::to_string(i) + "]", eps_call);
  }
  fill_ranks(model, cols);
  return model;
}

std::vector<std::vector<double>> npc_sample(const NpcModel& model,
                                            std::size_t n, Rng& rng,
                                            const NpcSampleOptions& opts) {
  const std::size_t p = model.columns();
  const std::size_t train_n = model.train_rows();
  if (p == 0 || train_n == 0) throw DataError("npc_sample: empty model");
  for (const auto& t : model.tables) {
    if (t.cumulative.empty()) throw DataError("npc_sample: empty frequency table");
  }
  std::vector<std::vector<double>> out(p, std::vector<double>(n));
  Rng draw = rng.substream("npc.sample");
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t d = draw.below(train_n);  // with replacement
    double shared_u = opts.shared_uniform_per_row ? draw.uniform() : 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const auto& table = model.tables[i];
      double target = model.ranks[i][d];
      // min{ s : R(B_s) >= U[d,i] }
      auto it = std::lower_bound(table.cumulative.begin(),
                                 table.cumulative.end(), target);
      std::size_t s = it == table.cumulative.end()
                          ? table.cumulative.size() - 1
                          : static_cast<std::size_t>(it - table.cumulative.begin());
      double a = table.edges[s];
      double b = table.edges[s + 1];
      double u = opts.shared_uniform_per_row ? shared_u : draw.uniform();
      out[i][r] = a + (b - a) * u;
    }
  }
  return out;
}

}  // namespace dpsynth
