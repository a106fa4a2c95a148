// Copyright 2026 The cpkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cpkit: conformal prediction over stored classifier outputs.
//
//   cpkit conformalize FILE [options]
//   cpkit sweep-temperature FILE [--t-grid a:b:count] [options]
//   cpkit shift-eval --cal FILE --test FILE [options]
//   cpkit compare NAME=FILE... [--methods lac,aps,raps] [--worst-class A,B]
//                 [--delta A,B] [options]
//   cpkit generate --out FILE [--cal-out FILE --shift-drop D] [...]
//   cpkit info FILE
//
// Exit codes: 0 success, 2 input/format error, 3 configuration error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cpkit/error.hpp"
#include "cpkit/harness.hpp"
#include "cpkit/io.hpp"
#include "cpkit/report.hpp"
#include "cpkit/synthetic.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitConfig = 3;

struct CommonOptions {
  double alpha = cpkit::kDefaultAlpha;
  std::string recipe = "default";
  std::string method = "aps";
  double lambda = cpkit::kDefaultRapsLambda;
  std::int64_t k_reg = cpkit::kDefaultRapsKReg;
  std::string u_mode = "uniform";
  double cal_fraction = cpkit::kDefaultCalFraction;
  std::uint64_t seed = 0;
  std::optional<double> temperature;
  std::string t_grid;
  std::size_t ece_bins = cpkit::kDefaultEceBins;
  std::string out_dir;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_split) {
  cmd->add_option("--alpha", o.alpha, "Miscoverage level in (0, 1)");
  cmd->add_option("--recipe", o.recipe,
                  "Preset defaults: 'default' (alpha 0.1) or 'cifar10' "
                  "(alpha 0.05); an explicit --alpha wins")
      ->check(CLI::IsMember({"default", "cifar10"}));
  cmd->add_option("--method", o.method, "Score: lac, aps or raps")
      ->check(CLI::IsMember({"lac", "aps", "raps"}));
  cmd->add_option("--lambda", o.lambda, "RAPS penalty strength");
  cmd->add_option("--kreg", o.k_reg, "RAPS rank offset");
  cmd->add_option("--u-mode", o.u_mode, "uniform or fixed:<v>");
  if (with_split) {
    cmd->add_option("--cal-frac", o.cal_fraction,
                    "Fraction of rows used for calibration");
  }
  cmd->add_option("--seed", o.seed, "Seed for splits and u draws");
  cmd->add_option("--temperature", o.temperature,
                  "Temperature applied to logit inputs");
  cmd->add_option("--ece-bins", o.ece_bins, "Number of ECE bins");
  cmd->add_option("--out", o.out_dir, "Directory for report files");
  cmd->add_option("--format", o.format, "Report format on stdout")
      ->check(CLI::IsMember({"json", "csv"}));
}

std::vector<double> parse_grid(const std::string& text) {
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? 0 : first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    cpkit::raise(cpkit::ErrorKind::kConfig,
                 "--t-grid expects a:b:count, got '" + text + "'");
  }
  try {
    const double a = std::stod(text.substr(0, first));
    const double b = std::stod(text.substr(first + 1, second - first - 1));
    const long count = std::stol(text.substr(second + 1));
    if (count < 1) throw std::invalid_argument("count");
    return cpkit::linear_grid(a, b, static_cast<std::size_t>(count));
  } catch (const std::logic_error&) {
    cpkit::raise(cpkit::ErrorKind::kConfig, "bad --t-grid '" + text + "'");
  }
}

cpkit::RunConfig make_config(const CLI::App* cmd, const CommonOptions& o) {
  cpkit::RunConfig cfg =
      o.recipe == "cifar10" ? cpkit::RunConfig::cifar10_recipe() : cpkit::RunConfig{};
  if (cmd->count("--alpha") > 0) cfg.alpha = o.alpha;
  cfg.method.method = cpkit::parse_score_method(o.method);
  cfg.method.lambda = o.lambda;
  cfg.method.k_reg = o.k_reg;
  cfg.method.u_mode = cpkit::UMode::parse(o.u_mode);
  cfg.cal_fraction = o.cal_fraction;
  cfg.seed = o.seed;
  cfg.temperature = o.temperature;
  cfg.ece_bins = o.ece_bins;
  if (!o.t_grid.empty()) cfg.t_grid = parse_grid(o.t_grid);
  cfg.validate();
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) cpkit::raise(cpkit::ErrorKind::kInvalidInput, "cannot write " + path.string());
  out << text;
}

std::optional<fs::path> prepare_out(const CommonOptions& o) {
  if (o.out_dir.empty()) return std::nullopt;
  fs::path dir(o.out_dir);
  fs::create_directories(dir);
  return dir;
}

void emit_runs(const std::vector<cpkit::RunResult>& runs, const CommonOptions& o,
               const std::string& stem) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& run : runs) records.push_back(cpkit::to_json(run));
  const std::string csv = cpkit::to_csv(runs);
  const std::string json =
      (runs.size() == 1 ? records[0] : records).dump(2) + "\n";

  if (auto dir = prepare_out(o)) {
    write_text(*dir / (stem + ".json"), json);
    write_text(*dir / (stem + ".csv"), csv);
    if (runs.size() == 1) {
      write_text(*dir / "set_sizes.csv", cpkit::set_sizes_csv(runs.front()));
      write_text(*dir / "per_class_coverage.csv",
                 cpkit::per_class_csv(runs.front().metrics.per_class_coverage));
    }
  }
  std::cout << (o.format == "csv" ? csv : json);
}

std::pair<std::string, std::string> parse_pair(const std::string& text,
                                               const std::string& flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    cpkit::raise(cpkit::ErrorKind::kConfig, flag + " expects RUN_A,RUN_B");
  }
  return {text.substr(0, comma), text.substr(comma + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal prediction sets and metrics over stored classifier outputs"};
  app.require_subcommand(1);

  CommonOptions conf_opts;
  std::string conf_file;
  auto* conf = app.add_subcommand("conformalize",
                                  "Split, calibrate, predict and report");
  conf->add_option("file", conf_file, "CPL1 logits file")->required();
  add_common(conf, conf_opts, true);

  CommonOptions sweep_opts;
  std::string sweep_file;
  auto* sweep = app.add_subcommand("sweep-temperature",
                                   "Conformalize at every temperature of a grid");
  sweep->add_option("file", sweep_file, "CPL1 file holding logits")->required();
  sweep->add_option("--t-grid", sweep_opts.t_grid,
                    "Linear grid a:b:count (default: 14 points over [0.85, 2])");
  add_common(sweep, sweep_opts, true);

  CommonOptions shift_opts;
  std::string shift_cal;
  std::string shift_test;
  auto* shift = app.add_subcommand(
      "shift-eval", "Calibrate on one file and evaluate on another");
  shift->add_option("--cal", shift_cal, "Calibration CPL1 file")->required();
  shift->add_option("--test", shift_test, "Test CPL1 file")->required();
  add_common(shift, shift_opts, false);

  CommonOptions cmp_opts;
  std::vector<std::string> cmp_inputs;
  std::string cmp_methods = "lac,aps,raps";
  std::string cmp_worst;
  std::string cmp_delta;
  auto* cmp = app.add_subcommand("compare",
                                 "Run every method on every model file");
  cmp->add_option("inputs", cmp_inputs, "NAME=FILE or FILE")->required();
  cmp->add_option("--methods", cmp_methods, "Comma-separated methods");
  cmp->add_option("--worst-class", cmp_worst,
                  "RUN_A,RUN_B: worst class of A compared against B");
  cmp->add_option("--delta", cmp_delta,
                  "RUN_A,RUN_B: per-sample set size differences");
  add_common(cmp, cmp_opts, true);

  cpkit::SyntheticSpec gen_spec;
  std::string gen_out;
  std::string gen_cal_out;
  double gen_drop = 0.0;
  double gen_noise = 0.0;
  bool gen_logits = false;
  auto* gen = app.add_subcommand("generate", "Write a synthetic classifier's outputs");
  gen->add_option("--out", gen_out, "Output CPL1 file (test half with a shift)")
      ->required();
  gen->add_option("--cal-out", gen_cal_out,
                  "With a shift: output for the calibration half");
  gen->add_option("--classes", gen_spec.num_classes, "Class count K");
  gen->add_option("--n", gen_spec.n, "Sample count");
  gen->add_option("--n-test", gen_spec.n_test, "Shifted half size (default n)");
  gen->add_option("--accuracy", gen_spec.target_accuracy, "Top-1 accuracy");
  gen->add_option("--sharpness", gen_spec.sharpness, "Concentration boost");
  gen->add_option("--confusion", gen_spec.confusion,
                  "Boost of the true label in misclassified rows, relative to sharpness");
  gen->add_option("--shift-drop", gen_drop, "Accuracy drop of the shifted half");
  gen->add_option("--shift-noise", gen_noise, "Sharpness divisor 1 + noise");
  gen->add_option("--seed", gen_spec.seed, "Seed");
  gen->add_flag("--logits", gen_logits, "Store log-probabilities as logits");

  std::string info_file;
  auto* info = app.add_subcommand("info", "Print a CPL1 file's header");
  info->add_option("file", info_file, "CPL1 file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (conf->parsed()) {
      const auto cfg = make_config(conf, conf_opts);
      const auto ds = cpkit::read_logits(conf_file);
      emit_runs({cpkit::run_conformalize(ds, cfg, fs::path(conf_file).stem().string())},
                conf_opts, "report");
    } else if (sweep->parsed()) {
      const auto cfg = make_config(sweep, sweep_opts);
      const auto ds = cpkit::read_logits(sweep_file);
      emit_runs(cpkit::run_temperature_sweep(ds, cfg,
                                             fs::path(sweep_file).stem().string()),
                sweep_opts, "sweep");
    } else if (shift->parsed()) {
      const auto cfg = make_config(shift, shift_opts);
      const auto cal = cpkit::read_logits(shift_cal);
      const auto test = cpkit::read_logits(shift_test);
      emit_runs({cpkit::run_shift_eval(cal, test, cfg,
                                       fs::path(shift_test).stem().string())},
                shift_opts, "report");
    } else if (cmp->parsed()) {
      const auto cfg = make_config(cmp, cmp_opts);
      std::vector<cpkit::ScoreSpec> methods;
      std::stringstream list(cmp_methods);
      for (std::string name; std::getline(list, name, ',');) {
        cpkit::ScoreSpec spec = cfg.method;
        spec.method = cpkit::parse_score_method(name);
        methods.push_back(spec);
      }
      std::vector<cpkit::NamedDataset> models;
      for (const auto& input : cmp_inputs) {
        const auto eq = input.find('=');
        const std::string path = eq == std::string::npos ? input : input.substr(eq + 1);
        const std::string name =
            eq == std::string::npos ? fs::path(path).stem().string() : input.substr(0, eq);
        models.push_back({name, cpkit::read_logits(path)});
      }
      const auto comparison = cpkit::run_compare(models, methods, cfg);

      nlohmann::json doc;
      doc["runs"] = nlohmann::json::array();
      for (const auto& run : comparison.runs) doc["runs"].push_back(cpkit::to_json(run));
      if (!cmp_worst.empty()) {
        auto [a, b] = parse_pair(cmp_worst, "--worst-class");
        doc["worst_class"] = cpkit::to_json(
            cpkit::compare_worst_class(comparison.find(a), comparison.find(b)));
        doc["worst_class"]["a"] = a;
        doc["worst_class"]["b"] = b;
      }
      if (!cmp_delta.empty()) {
        auto [a, b] = parse_pair(cmp_delta, "--delta");
        doc["set_size_delta"] = cpkit::to_json(
            cpkit::compare_set_sizes(comparison.find(a), comparison.find(b)));
        doc["set_size_delta"]["a"] = a;
        doc["set_size_delta"]["b"] = b;
      }
      const std::string csv = cpkit::to_csv(comparison.runs);
      if (auto dir = prepare_out(cmp_opts)) {
        write_text(*dir / "compare.json", doc.dump(2) + "\n");
        write_text(*dir / "compare.csv", csv);
      }
      std::cout << (cmp_opts.format == "csv" ? csv : doc.dump(2) + "\n");
    } else if (gen->parsed()) {
      auto finish = [&](const cpkit::LogitDataset& ds) {
        return gen_logits ? cpkit::to_logits(ds) : ds;
      };
      if (gen->count("--shift-drop") > 0 || gen->count("--shift-noise") > 0) {
        if (gen_cal_out.empty()) {
          cpkit::raise(cpkit::ErrorKind::kConfig, "a shift needs --cal-out");
        }
        gen_spec.shift = cpkit::DistributionShift{gen_drop, gen_noise};
        auto [cal, test] = cpkit::generate_pair(gen_spec);
        cpkit::write_logits(finish(cal), gen_cal_out);
        cpkit::write_logits(finish(test), gen_out);
      } else {
        cpkit::write_logits(finish(cpkit::generate(gen_spec)), gen_out);
      }
    } else if (info->parsed()) {
      const auto ds = cpkit::read_logits(info_file);
      nlohmann::json j{{"n", ds.size()},
                       {"K", ds.num_classes()},
                       {"kind", ds.kind() == cpkit::ValueKind::kLogits ? "logits"
                                                                       : "probabilities"},
                       {"labeled", ds.labeled()}};
      std::cout << j.dump() << "\n";
    }
  } catch (const cpkit::Error& e) {
    std::cerr << "cpkit: " << e.what() << "\n";
    return cpkit::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "cpkit: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
