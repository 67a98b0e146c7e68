#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "dpsynth/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace dpsynth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

// The epsilon grid used for sweeps unless overridden.
const std::vector<double> kDefaultEpsilonGrid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.8,
                                                 1.0, 2.0, 5.0, 10.0, 15.0};

struct CommonOptions {
  std::string input;
  std::string schema_path;
  std::string model = "dpnpc";
  double epsilon = -1.0;  // <0 means unset
  std::size_t bins = 40;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string split = "0.6,0.2,0.2";
  std::string target;
  std::size_t attacks = 250;
  double tolerance = 0.10;
  double alpha = 0.95;
  int jobs = 0;
  std::string out = ".";
};

void add_common_flags(CLI::App* cmd, CommonOptions& o, bool needs_input) {
  auto* in = cmd->add_option("--input", o.input, "input CSV path");
  if (needs_input) in->required();
  cmd->add_option("--schema", o.schema_path, "schema sidecar JSON path");
  cmd->add_option("--model", o.model, "npc|dpnpc|dpcopula|dphist");
  cmd->add_option("--epsilon", o.epsilon, "privacy budget (required for dp* models)");
  cmd->add_option("--bins", o.bins, "frequency-table bins");
  cmd->add_option("--n", o.n, "synthetic rows to generate");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--split", o.split, "train,control,test fractions");
  cmd->add_option("--target", o.target, "binary target attribute for utility");
  cmd->add_option("--attacks", o.attacks, "MIA targets per phase");
  cmd->add_option("--tolerance", o.tolerance, "Gower distance tolerance");
  cmd->add_option("--alpha", o.alpha, "Wilson confidence level");
  cmd->add_option("--jobs", o.jobs, "parallel sweep grid points");
  cmd->add_option("--out", o.out, "output directory");
}

void apply_seed_env(CommonOptions& o) {
  if (const char* env = std::getenv("DPSYNTH_SEED")) {
    o.seed = std::stoull(env);
  }
}

SplitSpec parse_split(const std::string& s, std::uint64_t seed) {
  SplitSpec spec;
  spec.seed = seed;
  std::stringstream ss(s);
  std::string part;
  std::vector<double> fr;
  while (std::getline(ss, part, ',')) fr.push_back(std::stod(part));
  if (fr.size() != 3) throw ConfigError("--split needs three fractions");
  spec.train = fr[0];
  spec.control = fr[1];
  spec.test = fr[2];
  return spec;
}

Table load_input(const CommonOptions& o) {
  std::optional<Schema> schema;
  if (!o.schema_path.empty()) {
    std::ifstream in(o.schema_path);
    if (!in) throw ConfigError("cannot open schema file: " + o.schema_path);
    ordered_json doc = ordered_json::parse(in);
    schema = schema_from_json(doc);
  }
  return load_csv(o.input, schema);
}

GenConfig gen_config(const CommonOptions& o) {
  GenConfig cfg;
  cfg.n_synthetic = o.n;
  cfg.bins = o.bins;
  cfg.seed = o.seed;
  if (o.epsilon >= 0.0) {
    if (!(o.epsilon > 0.0)) throw ConfigError("--epsilon must be positive");
    cfg.epsilon = o.epsilon;
  }
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << text;
}

std::string metrics_header() {
  return "model,epsilon,bins,seed,attacks,tolerance,alpha,"
         "r_main,delta_main,r_naive,delta_naive,r_control,delta_control,"
         "R,R_raw,attack_successful,mia_success_rate,mcc_real,mcc_syn,avg_ks\n";
}

std::string metrics_row(const std::string& model, double epsilon,
                        std::size_t bins, std::uint64_t seed,
                        const EvalResult& r) {
  std::ostringstream os;
  double rate = static_cast<double>(r.privacy.n_success_main) /
                static_cast<double>(r.privacy.n_attacks);
  os << model << ',' << format_double(epsilon) << ',' << bins << ',' << seed
     << ',' << r.privacy.n_attacks << ',' << format_double(r.privacy.tolerance)
     << ',' << format_double(r.privacy.alpha) << ','
     << format_double(r.privacy.main.r) << ','
     << format_double(r.privacy.main.delta) << ','
     << format_double(r.privacy.naive.r) << ','
     << format_double(r.privacy.naive.delta) << ','
     << format_double(r.privacy.control.r) << ','
     << format_double(r.privacy.control.delta) << ','
     << format_double(r.privacy.risk) << ',' << format_double(r.privacy.risk_raw)
     << ',' << (r.privacy.attack_successful ? 1 : 0) << ','
     << format_double(rate) << ','
     << format_double(r.utility ? r.utility->mcc_real : 0.0) << ','
     << format_double(r.utility ? r.utility->mcc_syn : 0.0) << ','
     << format_double(r.fidelity.avg_ks) << '\n';
  return os.str();
}

int cmd_generate(const CommonOptions& o) {
  Table train = load_input(o);
  GenResult result = generate(train, parse_model_kind(o.model), gen_config(o));
  fs::create_directories(o.out);
  write_csv(result.synthetic, (fs::path(o.out) / "synthetic.csv").string());
  write_text(fs::path(o.out) / "model.json", result.model.dump(2) + "\n");
  write_text(fs::path(o.out) / "ledger.json",
             ledger_json(result.ledger).dump(2) + "\n");
  write_text(fs::path(o.out) / "schema.json",
             schema_json(train.schema).dump(2) + "\n");
  return kExitOk;
}

int cmd_evaluate(const CommonOptions& o, const std::string& synthetic_path) {
  Table full = load_input(o);
  Splits parts = split(full, parse_split(o.split, o.seed));

  Table synthetic;
  PrivacyBudget ledger;
  if (!synthetic_path.empty()) {
    synthetic = load_csv(synthetic_path, full.schema);
  } else {
    GenResult gen = generate(parts.train, parse_model_kind(o.model), gen_config(o));
    synthetic = std::move(gen.synthetic);
    ledger = gen.ledger;
  }

  EvalConfig cfg;
  cfg.split = parse_split(o.split, o.seed);
  cfg.n_attacks = o.attacks;
  cfg.tolerance = o.tolerance;
  cfg.alpha = o.alpha;
  cfg.target = o.target;
  cfg.seed = o.seed;
  EvalResult result = evaluate(parts.train, parts.control, parts.test,
                               synthetic, cfg);

  fs::create_directories(o.out);
  write_text(fs::path(o.out) / "report.json",
             report_json(result).dump(2) + "\n");
  write_text(fs::path(o.out) / "ledger.json", ledger_json(ledger).dump(2) + "\n");
  double eps = o.epsilon >= 0.0 ? o.epsilon : 0.0;
  write_text(fs::path(o.out) / "metrics.csv",
             metrics_header() + metrics_row(o.model, eps, o.bins, o.seed, result));
  return kExitOk;
}

int cmd_sweep(const CommonOptions& o, std::vector<double> epsilons,
              std::vector<std::size_t> bins_list, std::size_t n_seeds) {
  if (epsilons.empty()) epsilons = kDefaultEpsilonGrid;
  if (bins_list.empty()) bins_list = {o.bins};
  if (n_seeds == 0) throw ConfigError("--seeds must be >= 1");

  Table full = load_input(o);
  Splits parts = split(full, parse_split(o.split, o.seed));

  struct GridPoint {
    double epsilon;
    std::size_t bins;
    std::uint64_t seed;
  };
  std::vector<GridPoint> grid;
  for (double eps : epsilons) {
    for (std::size_t b : bins_list) {
      for (std::size_t s = 0; s < n_seeds; ++s) {
        grid.push_back({eps, b, o.seed + s});
      }
    }
  }

  std::vector<std::string> rows(grid.size());
  std::vector<std::string> errors(grid.size());
  const auto total = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic) num_threads(o.jobs > 0 ? o.jobs : 1)
  for (std::int64_t g = 0; g < total; ++g) {
    const GridPoint& pt = grid[static_cast<std::size_t>(g)];
    try {
      CommonOptions local = o;
      local.epsilon = pt.epsilon;
      local.bins = pt.bins;
      local.seed = pt.seed;
      GenResult gen = generate(parts.train, parse_model_kind(local.model),
                               gen_config(local));
      EvalConfig cfg;
      cfg.n_attacks = local.attacks;
      cfg.tolerance = local.tolerance;
      cfg.alpha = local.alpha;
      cfg.target = local.target;
      cfg.seed = local.seed;
      EvalResult result = evaluate(parts.train, parts.control, parts.test,
                                   gen.synthetic, cfg);
      std::ostringstream os;
      auto emit = [&](const std::string& metric, double value) {
        os << local.model << ',' << format_double(pt.epsilon) << ',' << pt.bins
           << ',' << pt.seed << ',' << metric << ',' << format_double(value)
           << '\n';
      };
      emit("r_main", result.privacy.main.r);
      emit("r_naive", result.privacy.naive.r);
      emit("r_control", result.privacy.control.r);
      emit("risk", result.privacy.risk);
      emit("mia_success_rate",
           static_cast<double>(result.privacy.n_success_main) /
               static_cast<double>(result.privacy.n_attacks));
      emit("avg_ks", result.fidelity.avg_ks);
      if (result.utility) {
        emit("mcc_real", result.utility->mcc_real);
        emit("mcc_syn", result.utility->mcc_syn);
      }
      rows[static_cast<std::size_t>(g)] = os.str();
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(g)] = e.what();
    }
  }
  for (const auto& err : errors) {
    if (!err.empty()) throw DataError("sweep grid point failed: " + err);
  }

  fs::create_directories(o.out);
  std::string csv = "model,epsilon,bins,seed,metric,value\n";
  for (const auto& r : rows) csv += r;
  write_text(fs::path(o.out) / "sweep.csv", csv);
  return kExitOk;
}

int cmd_report(const std::string& runs_dir, const std::string& out_dir) {
  if (!fs::exists(runs_dir)) throw ConfigError("no such directory: " + runs_dir);
  struct Key {
    std::string model;
    std::string epsilon;
    bool operator<(const Key& other) const {
      if (model != other.model) return model < other.model;
      return std::stod(epsilon) < std::stod(other.epsilon);
    }
  };
  std::map<Key, std::map<std::string, std::vector<double>>> groups;
  std::size_t n_runs = 0;
  for (const auto& entry : fs::recursive_directory_iterator(runs_dir)) {
    if (!entry.is_regular_file() || entry.path().filename() != "metrics.csv") {
      continue;
    }
    std::ifstream in(entry.path());
    std::string header, line;
    if (!std::getline(in, header)) continue;
    std::vector<std::string> names;
    {
      std::stringstream hs(header);
      std::string f;
      while (std::getline(hs, f, ',')) names.push_back(f);
    }
    bool file_ok = true;
    while (std::getline(in, line)) {
      std::vector<std::string> fields;
      std::stringstream ls(line);
      std::string f;
      while (std::getline(ls, f, ',')) fields.push_back(f);
      if (fields.size() != names.size() || fields.size() < 4) {
        file_ok = false;
        break;
      }
      Key key{fields[0], fields[1]};
      for (std::size_t i = 4; i < fields.size(); ++i) {
        try {
          groups[key][names[i]].push_back(std::stod(fields[i]));
        } catch (...) {
          file_ok = false;
        }
      }
      ++n_runs;
    }
    if (!file_ok) {
      std::cerr << "warning: skipping malformed metrics file: "
                << entry.path().string() << "\n";
    }
  }
  if (n_runs == 0) throw DataError("no completed runs under " + runs_dir);

  std::ostringstream csv;
  csv << "model,epsilon,metric,mean,stddev,count\n";
  for (const auto& [key, metrics] : groups) {
    for (const auto& [metric, values] : metrics) {
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      var = values.size() > 1 ? var / static_cast<double>(values.size() - 1) : 0.0;
      csv << key.model << ',' << key.epsilon << ',' << metric << ','
          << format_double(mean) << ',' << format_double(std::sqrt(var)) << ','
          << values.size() << '\n';
    }
  }
  fs::create_directories(out_dir);
  write_text(fs::path(out_dir) / "summary.csv", csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private synthetic tabular data: generation and evaluation"};
  app.require_subcommand(1);

  CommonOptions gen_o, eval_o, sweep_o;
  std::string synthetic_path;
  std::vector<double> epsilons;
  std::vector<std::size_t> bins_list;
  std::size_t n_seeds = 1;
  std::string runs_dir, report_out = ".";

  auto* generate_cmd = app.add_subcommand("generate", "fit a model and write synthetic CSV");
  add_common_flags(generate_cmd, gen_o, true);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "split, generate (or load) synthetic, run metrics");
  add_common_flags(evaluate_cmd, eval_o, true);
  evaluate_cmd->add_option("--synthetic", synthetic_path, "evaluate an existing synthetic CSV");

  auto* sweep_cmd = app.add_subcommand("sweep", "factorial epsilon x bins x seed grid");
  add_common_flags(sweep_cmd, sweep_o, true);
  sweep_cmd->add_option("--epsilons", epsilons, "epsilon grid");
  sweep_cmd->add_option("--bins-list", bins_list, "bins grid");
  sweep_cmd->add_option("--seeds", n_seeds, "number of consecutive seeds");

  auto* report_cmd = app.add_subcommand("report", "aggregate completed runs");
  report_cmd->add_option("--runs", runs_dir, "directory of completed runs")->required();
  report_cmd->add_option("--out", report_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (generate_cmd->parsed()) {
      apply_seed_env(gen_o);
      return cmd_generate(gen_o);
    }
    if (evaluate_cmd->parsed()) {
      apply_seed_env(eval_o);
      return cmd_evaluate(eval_o, synthetic_path);
    }
    if (sweep_cmd->parsed()) {
      apply_seed_env(sweep_o);
      return cmd_sweep(sweep_o, epsilons, bins_list, n_seeds);
    }
    if (report_cmd->parsed()) {
      return cmd_report(runs_dir, report_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitConfig;
}
