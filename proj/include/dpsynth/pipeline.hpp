#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dpsynth/dp.hpp"
#include "dpsynth/eval.hpp"
#include "dpsynth/table.hpp"

namespace dpsynth {

enum class ModelKind { Npc, Dpnpc, DpCopula, DpHistogram };

ModelKind parse_model_kind(const std::string& name);
std::string model_kind_name(ModelKind kind);

struct GenConfig {
  std::size_t n_synthetic = 1000;
  std::size_t bins = 40;
  std::optional<double> epsilon;  // required for the private kinds
  std::uint64_t seed = 0;
  double copula_split = 0.5;           // DP-Copula budget allocation
  bool shared_uniform_per_row = false; // NPC sampling variant
};

struct GenResult {
  Table synthetic;
  PrivacyBudget ledger;
  nlohmann::ordered_json model;  // CDFs, tables, ledger, for audit
};

// Encode categorical columns, fit the requested model, sample, decode.
GenResult generate(const Table& train, ModelKind kind, const GenConfig& config,
                   const NoiseSource& noise = default_noise());

struct EvalConfig {
  SplitSpec split;
  std::size_t n_attacks = 250;
  double tolerance = 0.10;
  double alpha = 0.95;
  std::string target;  // empty disables the utility axis
  std::uint64_t seed = 0;
};

struct EvalResult {
  RiskReport privacy;
  std::optional<UtilityReport> utility;
  FidelityReport fidelity;
  double runtime_privacy_s = 0.0;
  double runtime_utility_s = 0.0;
  double runtime_fidelity_s = 0.0;
};

EvalResult evaluate(const Table& train, const Table& control, const Table& test,
                    const Table& synthetic, const EvalConfig& config);

nlohmann::ordered_json report_json(const EvalResult& result,
                                   bool include_runtime = true);
nlohmann::ordered_json ledger_json(const PrivacyBudget& budget);
nlohmann::ordered_json schema_json(const Schema& schema);
Schema schema_from_json(const nlohmann::ordered_json& doc);

}  // namespace dpsynth
