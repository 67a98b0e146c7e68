#include "dpsynth/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "dpsynth/stats.hpp"

namespace dpsynth {

std::size_t AttackOutcome::successes() const {
  return static_cast<std::size_t>(std::count(o.begin(), o.end(), 1));
}

std::vector<double> gower_ranges(const Table& t) {
  std::vector<double> ranges(t.cols(), 0.0);
  for (std::size_t c = 0; c < t.cols(); ++c) {
    if (t.schema.columns[c].kind == ColumnKind::Numeric) {
      ranges[c] = t.schema.columns[c].max - t.schema.columns[c].min;
    }
  }
  return ranges;
}

namespace {

void check_same_layout(const Table& a, const Table& b) {
  if (a.cols() != b.cols()) throw DataError("gower: schema width mismatch");
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (a.schema.columns[c].kind != b.schema.columns[c].kind) {
      throw DataError("gower: column kind mismatch at " +
                      a.schema.columns[c].name);
    }
  }
}

}  // namespace

kernels::GowerView make_gower_view(const Table& t,
                                   const std::vector<double>& ranges,
                                   const Table& dictionary_peer) {
  check_same_layout(t, dictionary_peer);
  kernels::GowerView v;
  const std::size_t n = t.rows();
  for (std::size_t c = 0; c < t.cols(); ++c) {
    std::vector<double> col(n);
    if (t.schema.columns[c].kind == ColumnKind::Numeric) {
      col = t.numeric[c];
      v.is_numeric.push_back(1);
      v.inv_range.push_back(ranges[c] > 0.0 ? 1.0 / ranges[c] : 0.0);
    } else {
      std::map<std::string, double> codes;
      for (const auto& s : t.categorical[c]) codes.emplace(s, 0.0);
      for (const auto& s : dictionary_peer.categorical[c]) codes.emplace(s, 0.0);
      double next = 0.0;
      for (auto& [label, code] : codes) code = next++;
      for (std::size_t r = 0; r < n; ++r) col[r] = codes[t.categorical[c][r]];
      v.is_numeric.push_back(0);
      v.inv_range.push_back(0.0);
    }
    v.cols.push_back(std::move(col));
  }
  return v;
}

double gower(const Table& a, std::size_t i, const Table& b, std::size_t j,
             const std::vector<double>& ranges) {
  check_same_layout(a, b);
  double s = 0.0;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (a.schema.columns[c].kind == ColumnKind::Numeric) {
      double d = std::fabs(a.numeric[c][i] - b.numeric[c][j]);
      s += ranges[c] > 0.0 ? d / ranges[c] : 0.0;
    } else {
      s += a.categorical[c][i] != b.categorical[c][j] ? 1.0 : 0.0;
    }
  }
  return s / static_cast<double>(a.cols());
}

AttackOutcome mia_attack(const Table& targets, const Table& synthetic,
                         double tolerance, const std::vector<double>& ranges,
                         std::size_t k) {
  if (synthetic.rows() == 0) throw DataError("mia_attack: empty synthetic table");
  if (!(tolerance >= 0.0 && tolerance <= 1.0)) {
    throw ConfigError("mia_attack: tolerance must lie in [0,1]");
  }
  (void)k;  // the closest of the k neighbors decides, so k=1 is equivalent
  auto tv = make_gower_view(targets, ranges, synthetic);
  auto sv = make_gower_view(synthetic, ranges, targets);
#ifdef _OPENMP
  auto dists = kernels::min_gower_parallel(tv, sv);
#else
  auto dists = kernels::min_gower_serial(tv, sv);
#endif
  AttackOutcome out;
  out.o.reserve(dists.size());
  for (double d : dists) out.o.push_back(d < tolerance ? 1 : 0);
  return out;
}

AttackOutcome naive_attack(const Table& targets, const Table& synthetic,
                           double tolerance, const std::vector<double>& ranges,
                           Rng& rng) {
  if (synthetic.rows() == 0) throw DataError("naive_attack: empty synthetic table");
  AttackOutcome out;
  const std::size_t n = targets.rows();
  out.o.reserve(n);
  Rng draw = rng.substream("eval.naive");
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = draw.below(synthetic.rows());
    double d = gower(targets, i, synthetic, j, ranges);
    out.o.push_back(d < tolerance ? 1 : 0);
  }
  return out;
}

WilsonPoint wilson_risk(std::size_t n_success, std::size_t n_attacks,
                        double alpha) {
  if (n_attacks == 0) throw ConfigError("wilson_risk: zero attacks");
  if (n_success > n_attacks) throw ConfigError("wilson_risk: successes exceed attacks");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("wilson_risk: alpha outside (0,1)");
  double z = normal_quantile((1.0 + alpha) / 2.0);
  double z2 = z * z;
  double ns = static_cast<double>(n_success);
  double na = static_cast<double>(n_attacks);
  WilsonPoint p;
  p.r = (ns + z2 / 2.0) / (na + z2);
  p.delta = z / (na + z2) * std::sqrt(ns * (na - ns) / na + z2 / 4.0);
  return p;
}

RiskReport privacy_risk(const Table& train, const Table& control,
                        const Table& synthetic, std::size_t n_attacks,
                        double tolerance, double alpha, Rng& rng) {
  if (n_attacks == 0) throw ConfigError("privacy_risk: zero attacks");
  if (n_attacks > std::min(train.rows(), control.rows())) {
    throw ConfigError("privacy_risk: more attacks than available targets");
  }
  auto pick_targets = [&](const Table& pool, std::string_view label) {
    std::vector<std::size_t> idx(pool.rows());
    std::iota(idx.begin(), idx.end(), 0);
    Rng r = rng.substream(label);
    std::shuffle(idx.begin(), idx.end(), r.engine());
    idx.resize(n_attacks);  // without replacement
    return pool.select_rows(idx);
  };
  Table main_targets = pick_targets(train, "eval.targets.main");
  Table control_targets = pick_targets(control, "eval.targets.control");
  auto ranges = gower_ranges(train);

  AttackOutcome main_out = mia_attack(main_targets, synthetic, tolerance, ranges);
  AttackOutcome control_out =
      mia_attack(control_targets, synthetic, tolerance, ranges);
  AttackOutcome naive_out =
      naive_attack(main_targets, synthetic, tolerance, ranges, rng);

  RiskReport rep;
  rep.main = wilson_risk(main_out.successes(), n_attacks, alpha);
  rep.control = wilson_risk(control_out.successes(), n_attacks, alpha);
  rep.naive = wilson_risk(naive_out.successes(), n_attacks, alpha);
  rep.alpha = alpha;
  rep.tolerance = tolerance;
  rep.n_attacks = n_attacks;
  rep.n_success_main = main_out.successes();
  rep.n_success_naive = naive_out.successes();
  rep.n_success_control = control_out.successes();
  rep.attack_successful = rep.naive.r < rep.main.r;
  double denom = 1.0 - rep.control.r;
  if (denom <= 0.0) {
    rep.control_saturated = true;
    rep.risk_raw = 1.0;
  } else {
    rep.risk_raw = (rep.main.r - rep.control.r) / denom;
  }
  rep.risk = std::clamp(rep.risk_raw, 0.0, 1.0);
  return rep;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DataError("ks_distance: empty column");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < x.size() || j < y.size()) {
    double v = (i < x.size() && (j >= y.size() || x[i] <= y[j])) ? x[i] : y[j];
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    best = std::max(best, std::fabs(static_cast<double>(i) / nx -
                                    static_cast<double>(j) / ny));
  }
  return best;
}

FidelityReport fidelity(const Table& real, const Table& synthetic, Rng& rng) {
  check_same_layout(real, synthetic);
  FidelityReport rep;
  rep.per_column.resize(real.cols());
  for (std::size_t c = 0; c < real.cols(); ++c) {
    if (real.schema.columns[c].kind == ColumnKind::Numeric) {
      rep.per_column[c] = ks_distance(real.numeric[c], synthetic.numeric[c]);
    } else {
      EncoderSpec spec = fit_uniform_encoder(real.categorical[c]);
      Rng r1 = rng.substream("eval.ks.real").substream(c);
      Rng r2 = rng.substream("eval.ks.syn").substream(c);
      auto er = encode(spec, real.categorical[c], r1);
      auto es = encode(spec, synthetic.categorical[c], r2);
      rep.per_column[c] = ks_distance(er, es);
    }
    rep.avg_ks += rep.per_column[c];
  }
  rep.avg_ks /= static_cast<double>(real.cols());
  return rep;
}

double mcc(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn) {
  double n = static_cast<double>(tp + tn + fp + fn);
  if (n < 1.0) throw ConfigError("mcc: empty confusion matrix");
  double s = (static_cast<double>(tp) + static_cast<double>(fn)) / n;
  double p = (static_cast<double>(tp) + static_cast<double>(fp)) / n;
  double denom = std::sqrt(s * p * (1.0 - s) * (1.0 - p));
  if (denom == 0.0) return 0.0;
  return (static_cast<double>(tp) / n - s * p) / denom;
}

namespace {

double feature_value(const Classifier& m, const Table& t, std::size_t slot,
                     std::size_t row) {
  std::size_t c = m.feature_cols[slot];
  if (m.encoders[slot]) {
    const auto& spec = *m.encoders[slot];
    const std::string& label = t.categorical[c][row];
    for (std::size_t i = 0; i < spec.order.size(); ++i) {
      if (spec.order[i] == label) {
        return (spec.breakpoints[i] + spec.breakpoints[i + 1]) / 2.0;
      }
    }
    return 0.5;  // unseen category
  }
  double lo = m.feature_lo[slot];
  double hi = m.feature_hi[slot];
  double v = t.numeric[c][row];
  return hi > lo ? (v - lo) / (hi - lo) : 0.0;
}

}  // namespace

std::string Classifier::predict(const Table& t, std::size_t row) const {
  double z = weights.back();
  for (std::size_t s = 0; s < feature_cols.size(); ++s) {
    z += weights[s] * feature_value(*this, t, s, row);
  }
  return z >= 0.0 ? positive_label : negative_label;
}

Classifier train_classifier(const Table& train, const std::string& target,
                            const ClassifierConfig& config) {
  auto tcol = train.schema.index_of(target);
  if (!tcol) throw ConfigError("train_classifier: no such column: " + target);
  if (train.schema.columns[*tcol].kind != ColumnKind::Categorical) {
    throw ConfigError("train_classifier: target must be categorical");
  }
  std::set<std::string> labels(train.categorical[*tcol].begin(),
                               train.categorical[*tcol].end());
  if (labels.size() != 2) {
    throw DataError("train_classifier: target must have exactly 2 classes, got " +
                    std::to_string(labels.size()));
  }
  Classifier m;
  m.target = target;
  m.negative_label = *labels.begin();
  m.positive_label = *std::next(labels.begin());

  for (std::size_t c = 0; c < train.cols(); ++c) {
    if (c == *tcol) continue;
    m.feature_cols.push_back(c);
    if (train.schema.columns[c].kind == ColumnKind::Categorical) {
      m.encoders.push_back(fit_uniform_encoder(train.categorical[c]));
      m.feature_lo.push_back(0.0);
      m.feature_hi.push_back(1.0);
    } else {
      m.encoders.push_back(std::nullopt);
      auto [lo, hi] = std::minmax_element(train.numeric[c].begin(),
                                          train.numeric[c].end());
      m.feature_lo.push_back(*lo);
      m.feature_hi.push_back(*hi);
    }
  }

  const std::size_t n = train.rows();
  const std::size_t d = m.feature_cols.size();
  std::vector<std::vector<double>> x(n, std::vector<double>(d));
  std::vector<double> y(n);
  m.weights.assign(d + 1, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = 0; s < d; ++s) x[r][s] = feature_value(m, train, s, r);
    y[r] = train.categorical[*tcol][r] == m.positive_label ? 1.0 : 0.0;
  }

  std::vector<double> grad(d + 1);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      double z = m.weights[d];
      for (std::size_t s = 0; s < d; ++s) z += m.weights[s] * x[r][s];
      double pred = 1.0 / (1.0 + std::exp(-z));
      double err = pred - y[r];
      for (std::size_t s = 0; s < d; ++s) grad[s] += err * x[r][s];
      grad[d] += err;
    }
    for (std::size_t s = 0; s <= d; ++s) {
      m.weights[s] -= config.learning_rate * grad[s] / static_cast<double>(n);
    }
  }
  return m;
}

double mcc_on(const Classifier& model, const Table& test) {
  auto tcol = test.schema.index_of(model.target);
  if (!tcol) throw ConfigError("mcc_on: target column missing from test table");
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t r = 0; r < test.rows(); ++r) {
    bool actual = test.categorical[*tcol][r] == model.positive_label;
    bool predicted = model.predict(test, r) == model.positive_label;
    if (actual && predicted) ++tp;
    else if (!actual && !predicted) ++tn;
    else if (!actual && predicted) ++fp;
    else ++fn;
  }
  return mcc(tp, tn, fp, fn);
}

UtilityReport utility_score(const Table& real_train, const Table& synthetic,
                            const Table& test, const std::string& target,
                            const ClassifierConfig& config) {
  UtilityReport rep;
  rep.target = target;
  Classifier on_real = train_classifier(real_train, target, config);
  Classifier on_syn = train_classifier(synthetic, target, config);
  rep.mcc_real = mcc_on(on_real, test);
  rep.mcc_syn = mcc_on(on_syn, test);
  return rep;
}

}  // namespace dpsynth
