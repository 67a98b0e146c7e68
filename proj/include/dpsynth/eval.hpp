#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpsynth/encoding.hpp"
#include "dpsynth/kernels.hpp"
#include "dpsynth/rng.hpp"
#include "dpsynth/table.hpp"

namespace dpsynth {

struct AttackOutcome {
  std::vector<std::uint8_t> o;  // per-target guess correctness

  std::size_t successes() const;
  std::size_t attacks() const { return o.size(); }
};

struct WilsonPoint {
  double r = 0.0;
  double delta = 0.0;
};

struct RiskReport {
  WilsonPoint main;
  WilsonPoint naive;
  WilsonPoint control;
  double risk_raw = 0.0;      // (r_main - r_control) / (1 - r_control)
  double risk = 0.0;          // clamped to [0,1] for reporting
  bool attack_successful = false;  // r_naive < r_main
  bool control_saturated = false;  // r_control == 1, ratio undefined
  double alpha = 0.95;
  double tolerance = 0.10;
  std::size_t n_attacks = 0;
  std::size_t n_success_main = 0;  // raw counts behind the Wilson centers
  std::size_t n_success_naive = 0;
  std::size_t n_success_control = 0;
};

struct UtilityReport {
  double mcc_real = 0.0;
  double mcc_syn = 0.0;
  std::string target;
};

// Per-numeric-column ranges used to scale Gower distances; zero for
// categorical columns and degenerate ranges.
std::vector<double> gower_ranges(const Table& t);

// Mixed-record scan view; both sides of a scan must be built with a shared
// category dictionary, so build the pool and targets together.
kernels::GowerView make_gower_view(const Table& t,
                                   const std::vector<double>& ranges,
                                   const Table& dictionary_peer);

double gower(const Table& a, std::size_t i, const Table& b, std::size_t j,
             const std::vector<double>& ranges);

AttackOutcome mia_attack(const Table& targets, const Table& synthetic,
                         double tolerance, const std::vector<double>& ranges,
                         std::size_t k = 1);

AttackOutcome naive_attack(const Table& targets, const Table& synthetic,
                           double tolerance, const std::vector<double>& ranges,
                           Rng& rng);

WilsonPoint wilson_risk(std::size_t n_success, std::size_t n_attacks,
                        double alpha);

RiskReport privacy_risk(const Table& train, const Table& control,
                        const Table& synthetic, std::size_t n_attacks,
                        double tolerance, double alpha, Rng& rng);

double ks_distance(std::span<const double> a, std::span<const double> b);

struct FidelityReport {
  double avg_ks = 0.0;
  std::vector<double> per_column;
};

// Categorical columns are compared on uniform-encoded values.
FidelityReport fidelity(const Table& real, const Table& synthetic, Rng& rng);

double mcc(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn);

// Logistic regression over uniform-encoded features (interval midpoints for
// categories, min-max scaling for numerics), full-batch gradient descent;
// fully deterministic given the training table.
struct Classifier {
  std::vector<double> weights;  // last entry is the bias
  std::string target;
  std::string negative_label;
  std::string positive_label;
  std::vector<std::size_t> feature_cols;
  std::vector<double> feature_lo, feature_hi;        // numeric scaling
  std::vector<std::optional<EncoderSpec>> encoders;  // categorical features

  std::string predict(const Table& t, std::size_t row) const;
};

struct ClassifierConfig {
  std::size_t epochs = 400;
  double learning_rate = 0.5;
};

Classifier train_classifier(const Table& train, const std::string& target,
                            const ClassifierConfig& config = {});

double mcc_on(const Classifier& model, const Table& test);

UtilityReport utility_score(const Table& real_train, const Table& synthetic,
                            const Table& test, const std::string& target,
                            const ClassifierConfig& config = {});

}  // namespace dpsynth
