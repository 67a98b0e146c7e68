#include "dpsynth/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "dpsynth/baselines.hpp"
#include "dpsynth/copula.hpp"
#include "dpsynth/encoding.hpp"
#include "dpsynth/npc.hpp"

namespace dpsynth {

using nlohmann::ordered_json;

ModelKind parse_model_kind(const std::string& name) {
  if (name == "npc") return ModelKind::Npc;
  if (name == "dpnpc") return ModelKind::Dpnpc;
  if (name == "dpcopula") return ModelKind::DpCopula;
  if (name == "dphist") return ModelKind::DpHistogram;
  throw ConfigError("unknown model kind: " + name);
}

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Npc: return "npc";
    case ModelKind::Dpnpc: return "dpnpc";
    case ModelKind::DpCopula: return "dpcopula";
    case ModelKind::DpHistogram: return "dphist";
  }
  return "?";
}

namespace {

ordered_json cdf_json(const StepCdf& f) {
  return ordered_json{{"support", f.support}, {"cdf", f.cdf}};
}

ordered_json table_json(const FrequencyTable& t) {
  return ordered_json{{"edges", t.edges}, {"cumulative", t.cumulative}};
}

ordered_json encoder_json(const EncoderSpec& e) {
  return ordered_json{{"order", e.order}, {"breakpoints", e.breakpoints}};
}

}  // namespace

ordered_json ledger_json(const PrivacyBudget& budget) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : budget.entries()) {
    entries.push_back({{"label", e.label}, {"epsilon", e.epsilon}});
  }
  return ordered_json{{"epsilon", budget.epsilon()},
                      {"spent", budget.spent()},
                      {"entries", entries}};
}

ordered_json schema_json(const Schema& schema) {
  ordered_json cols = ordered_json::array();
  for (const auto& c : schema.columns) {
    ordered_json col{{"name", c.name}};
    if (c.kind == ColumnKind::Numeric) {
      col["kind"] = "numeric";
      col["min"] = c.min;
      col["max"] = c.max;
    } else {
      col["kind"] = "categorical";
      col["categories"] = c.categories;
    }
    cols.push_back(col);
  }
  return ordered_json{{"columns", cols}};
}

Schema schema_from_json(const ordered_json& doc) {
  Schema schema;
  for (const auto& col : doc.at("columns")) {
    ColumnDesc desc;
    desc.name = col.at("name").get<std::string>();
    std::string kind = col.at("kind").get<std::string>();
    if (kind == "numeric") {
      desc.kind = ColumnKind::Numeric;
      desc.min = col.value("min", 0.0);
      desc.max = col.value("max", 0.0);
    } else if (kind == "categorical") {
      desc.kind = ColumnKind::Categorical;
      desc.categories = col.at("categories").get<std::vector<std::string>>();
    } else {
      throw ConfigError("schema: unknown column kind: " + kind);
    }
    schema.columns.push_back(std::move(desc));
  }
  schema.validate();
  return schema;
}

GenResult generate(const Table& train, ModelKind kind, const GenConfig& config,
                   const NoiseSource& noise) {
  if (train.rows() == 0) throw DataError("generate: empty training table");
  if (config.n_synthetic < 1) throw ConfigError("generate: need N >= 1");
  if (config.bins < 1) throw ConfigError("generate: need bins >= 1");
  bool needs_epsilon = kind != ModelKind::Npc;
  if (needs_epsilon && !config.epsilon) {
    throw ConfigError("generate: epsilon required for private models");
  }
  if (config.epsilon && !(*config.epsilon > 0.0)) {
    throw ConfigError("generate: epsilon must be positive");
  }

  Rng rng(config.seed);
  const std::size_t p = train.cols();

  // Encode categorical columns into [0,1].
  std::vector<std::optional<EncoderSpec>> encoders(p);
  std::vector<std::vector<double>> cols(p);
  for (std::size_t c = 0; c < p; ++c) {
    if (train.schema.columns[c].kind == ColumnKind::Categorical) {
      encoders[c] = fit_uniform_encoder(train.categorical[c]);
      Rng enc_rng = rng.substream("encode").substream(c);
      cols[c] = encode(*encoders[c], train.categorical[c], enc_rng);
    } else {
      cols[c] = train.numeric[c];
    }
  }

  GenResult result;
  ordered_json model{{"kind", model_kind_name(kind)},
                     {"bins", config.bins},
                     {"seed", config.seed},
                     {"n_synthetic", config.n_synthetic}};
  ordered_json enc_doc = ordered_json::array();
  for (std::size_t c = 0; c < p; ++c) {
    enc_doc.push_back(encoders[c] ? encoder_json(*encoders[c])
                                  : ordered_json(nullptr));
  }
  model["encoders"] = enc_doc;

  std::vector<std::vector<double>> sampled;
  Rng fit_rng = rng.substream("fit");
  Rng sample_rng = rng.substream("sample");
  switch (kind) {
    case ModelKind::Npc: {
      NpcModel m = npc_fit(cols, {config.bins});
      sampled = npc_sample(m, config.n_synthetic, sample_rng,
                           {config.shared_uniform_per_row});
      ordered_json cj = ordered_json::array(), tj = ordered_json::array();
      for (const auto& f : m.cdfs) cj.push_back(cdf_json(f));
      for (const auto& t : m.tables) tj.push_back(table_json(t));
      model["cdfs"] = cj;
      model["frequency_tables"] = tj;
      break;
    }
    case ModelKind::Dpnpc: {
      NpcModel m = dpnpc_fit(cols, {config.bins}, *config.epsilon, fit_rng, noise);
      result.ledger = m.ledger;
      sampled = npc_sample(m, config.n_synthetic, sample_rng,
                           {config.shared_uniform_per_row});
      ordered_json cj = ordered_json::array(), tj = ordered_json::array();
      for (const auto& f : m.cdfs) cj.push_back(cdf_json(f));
      for (const auto& t : m.tables) tj.push_back(table_json(t));
      model["cdfs"] = cj;
      model["frequency_tables"] = tj;
      break;
    }
    case ModelKind::DpCopula: {
      DpCopulaModel m =
          dp_copula_fit(cols, *config.epsilon, config.copula_split, fit_rng, noise);
      result.ledger = m.ledger;
      sampled = dp_copula_sample(m, config.n_synthetic, sample_rng);
      ordered_json cj = ordered_json::array();
      for (const auto& f : m.marginals) cj.push_back(cdf_json(f));
      model["cdfs"] = cj;
      ordered_json rho = ordered_json::array();
      for (Eigen::Index r = 0; r < m.rho.rows(); ++r) {
        std::vector<double> row(m.rho.cols());
        for (Eigen::Index c = 0; c < m.rho.cols(); ++c) row[c] = m.rho(r, c);
        rho.push_back(row);
      }
      model["rho"] = rho;
      break;
    }
    case ModelKind::DpHistogram: {
      DpHistogramModel m =
          dp_histogram_fit(cols, *config.epsilon, config.bins, fit_rng, noise);
      result.ledger = m.ledger;
      sampled = dp_histogram_sample(m, config.n_synthetic, sample_rng);
      ordered_json hj = ordered_json::array();
      for (const auto& h : m.histograms) {
        hj.push_back({{"edges", h.edges}, {"counts", h.counts}});
      }
      model["histograms"] = hj;
      break;
    }
  }
  model["ledger"] = ledger_json(result.ledger);
  result.model = std::move(model);

  // Decode back into the original schema.
  Table syn;
  syn.schema = train.schema;
  syn.numeric.resize(p);
  syn.categorical.resize(p);
  for (std::size_t c = 0; c < p; ++c) {
    if (encoders[c]) {
      syn.categorical[c] = decode(*encoders[c], sampled[c]);
    } else {
      syn.numeric[c] = std::move(sampled[c]);
    }
  }
  result.synthetic = std::move(syn);
  return result;
}

EvalResult evaluate(const Table& train, const Table& control, const Table& test,
                    const Table& synthetic, const EvalConfig& config) {
  using clock = std::chrono::steady_clock;
  EvalResult result;
  Rng rng(config.seed);

  auto t0 = clock::now();
  std::size_t n_attacks =
      std::min(config.n_attacks, std::min(train.rows(), control.rows()));
  Rng risk_rng = rng.substream("evaluate.privacy");
  result.privacy = privacy_risk(train, control, synthetic, n_attacks,
                                config.tolerance, config.alpha, risk_rng);
  auto t1 = clock::now();
  result.runtime_privacy_s = std::chrono::duration<double>(t1 - t0).count();

  if (!config.target.empty()) {
    result.utility = utility_score(train, synthetic, test, config.target);
  }
  auto t2 = clock::now();
  result.runtime_utility_s = std::chrono::duration<double>(t2 - t1).count();

  Rng fid_rng = rng.substream("evaluate.fidelity");
  result.fidelity = fidelity(train, synthetic, fid_rng);
  auto t3 = clock::now();
  result.runtime_fidelity_s = std::chrono::duration<double>(t3 - t2).count();
  return result;
}

ordered_json report_json(const EvalResult& result, bool include_runtime) {
  auto phase = [](const WilsonPoint& p) {
    return ordered_json{{"r", p.r}, {"delta", p.delta}};
  };
  ordered_json privacy{{"main", phase(result.privacy.main)},
                       {"naive", phase(result.privacy.naive)},
                       {"control", phase(result.privacy.control)},
                       {"R", result.privacy.risk},
                       {"R_raw", result.privacy.risk_raw},
                       {"attack_successful", result.privacy.attack_successful},
                       {"control_saturated", result.privacy.control_saturated},
                       {"tolerance", result.privacy.tolerance},
                       {"alpha", result.privacy.alpha},
                       {"attacks", result.privacy.n_attacks}};
  ordered_json doc{{"privacy", privacy}};
  if (result.utility) {
    doc["utility"] = ordered_json{{"mcc_real", result.utility->mcc_real},
                                  {"mcc_syn", result.utility->mcc_syn},
                                  {"target", result.utility->target}};
  }
  doc["fidelity"] = ordered_json{{"avg_ks", result.fidelity.avg_ks},
                                 {"per_column", result.fidelity.per_column}};
  if (include_runtime) {
    doc["runtime_seconds"] =
        ordered_json{{"privacy", result.runtime_privacy_s},
                     {"utility", result.runtime_utility_s},
                     {"fidelity", result.runtime_fidelity_s}};
  }
  return doc;
}

}  // namespace dpsynth
