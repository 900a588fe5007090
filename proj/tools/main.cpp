/*
 * Copyright 2026 The tsauc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "tsauc/dataset_io.hpp"
#include "tsauc/errors.hpp"
#include "tsauc/experiments.hpp"
#include "tsauc/features.hpp"
#include "tsauc/mmd.hpp"
#include "tsauc/random.hpp"
#include "tsauc/rank_stats.hpp"
#include "tsauc/report.hpp"
#include "tsauc/signal_ingest.hpp"
#include "tsauc/ts_auc.hpp"
#include "tsauc/version.hpp"

namespace fs = std::filesystem;
using tsauc::Json;

namespace {

struct RunConfig {
  std::uint64_t seed = 42;
  double alpha = 0.05;
  double rate_hz = tsauc::kDefaultRateHz;
  int trees = 200;
  int ls_min = 8;
  int ls_max = 19;
  int m_max = 8;
  int permutations = 1000;
  int runs = 20;       // seeds per model size in the nested selection
  int repeats = 12;    // subsamples per fraction in the reduction studies
};

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--alpha", cfg.alpha, "significance level")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9))
      ->capture_default_str();
  cmd->add_option("--trees", cfg.trees, "trees per forest")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--ls-min", cfg.ls_min, "smallest leaf size in the grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--ls-max", cfg.ls_max, "largest leaf size in the grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--m-max", cfg.m_max, "largest features-per-tree in the grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--permutations", cfg.permutations, "MMD permutation count")
      ->check(CLI::Range(99, 1000000))
      ->capture_default_str();
}

tsauc::SearchSpace search_space_from(const RunConfig& cfg) {
  if (cfg.ls_min > cfg.ls_max)
    throw tsauc::ValidationError("--ls-min must not exceed --ls-max");
  tsauc::SearchSpace space;
  space.ls_values.clear();
  for (int ls = cfg.ls_min; ls <= cfg.ls_max; ++ls) space.ls_values.push_back(ls);
  space.m_values.clear();
  for (int m = 1; m <= cfg.m_max; ++m) space.m_values.push_back(m);
  space.n_trees = cfg.trees;
  space.seed = cfg.seed;
  return space;
}

Json config_json(const RunConfig& cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["alpha"] = cfg.alpha;
  j["rate_hz"] = cfg.rate_hz;
  j["trees"] = cfg.trees;
  j["ls_min"] = cfg.ls_min;
  j["ls_max"] = cfg.ls_max;
  j["m_max"] = cfg.m_max;
  j["permutations"] = cfg.permutations;
  j["runs"] = cfg.runs;
  j["repeats"] = cfg.repeats;
  return j;
}

Json envelope(const std::string& command, const RunConfig& cfg,
              const fs::path& input) {
  Json j;
  j["command"] = command;
  j["version"] = std::string(tsauc::kVersion);
  j["timestamp"] = tsauc::iso8601_utc_now();
  j["input"] = {{"path", input.string()}, {"hash_fnv1a64", tsauc::hash_file(input)}};
  j["config"] = config_json(cfg);
  return j;
}

void write_json(const fs::path& path, const Json& j) {
  tsauc::atomic_write(path, j.dump(2) + "\n");
}

/// Full ts-AUC report: grid search, star model, its OOB scores and p-value,
/// permutation importance of the star model, and the nested-model selection.
Json tsauc_report_json(const tsauc::LabeledDataset& ds,
                       const tsauc::SearchSpace& space, double alpha, int runs) {
  const tsauc::TsAucResult res = tsauc::ts_auc_test(ds, space);
  const tsauc::ForestModel star = tsauc::train(ds, res.best_hp);
  const tsauc::ImportanceReport imp = tsauc::permutation_importance(star, ds);
  const tsauc::ModelSizeSelection sel =
      tsauc::select_model_size(ds, res.best_hp, imp.ranking, runs);

  Json j;
  j["auc_star"] = res.auc_star;
  j["best_ls"] = res.best_hp.leaf_size;
  j["best_m"] = res.best_hp.features_per_tree;
  j["p_value"] = res.p_value;
  j["alpha"] = alpha;
  j["reject"] = res.p_value < alpha;
  j["auc_grid"] = Json::array();
  for (const tsauc::GridPoint& g : res.auc_grid)
    j["auc_grid"].push_back({{"ls", g.ls}, {"m", g.m}, {"auc", g.auc}});
  j["oob_scores"] = Json::array();
  for (Eigen::Index i = 0; i < ds.n_rows(); ++i)
    j["oob_scores"].push_back({{"subject_id", ds.ids[static_cast<std::size_t>(i)]},
                               {"posterior", res.oob_scores.posterior[i]},
                               {"label", ds.y[i]}});
  j["importance"] = Json::array();
  for (int f : imp.ranking) {
    const tsauc::FeatureImportance& fi = imp.per_feature[static_cast<std::size_t>(f)];
    j["importance"].push_back(
        {{"feature", ds.feature_names[static_cast<std::size_t>(f)]},
         {"d", fi.d},
         {"sigma", fi.sigma},
         {"I", fi.importance},
         {"trees", fi.trees},
         {"degenerate", fi.degenerate}});
  }
  j["model_size_curve"] = Json::array();
  for (const tsauc::ModelSizePoint& p : sel.auc_by_model_size)
    j["model_size_curve"].push_back(
        {{"k", p.k}, {"mean_auc", p.mean_auc}, {"std", p.std_auc}});
  j["selected_feature_count"] = sel.selected_feature_count;
  return j;
}

Json mmd_json(const tsauc::MmdResult& res, double alpha) {
  Json j;
  j["mmd2_u"] = res.mmd2_u;
  j["p_value"] = res.p_value;
  j["bandwidth"] = res.bandwidth;
  j["n_permutations"] = res.n_permutations;
  j["reject"] = res.p_value < alpha;
  return j;
}

Json univariate_json(const tsauc::LabeledDataset& ds, double alpha) {
  std::vector<double> pvals;
  pvals.reserve(static_cast<std::size_t>(ds.n_features()));
  for (Eigen::Index f = 0; f < ds.n_features(); ++f) {
    const tsauc::GroupedScores g = tsauc::split_by_label(ds.X.col(f), ds.y);
    pvals.push_back(tsauc::mww_pvalue(g, tsauc::Alternative::two_sided));
  }
  const auto bonf = tsauc::correct(pvals, alpha, tsauc::CorrectionMethod::bonferroni);
  const auto holm = tsauc::correct(pvals, alpha, tsauc::CorrectionMethod::holm);
  const auto sidak = tsauc::correct(pvals, alpha, tsauc::CorrectionMethod::sidak);

  Json arr = Json::array();
  for (std::size_t f = 0; f < pvals.size(); ++f)
    arr.push_back({{"feature", ds.feature_names[f]},
                   {"p_value", pvals[f]},
                   {"significant_raw", pvals[f] < alpha},
                   {"significant_bonferroni", bonf.decisions[f]},
                   {"significant_holm", holm.decisions[f]},
                   {"significant_sidak", sidak.decisions[f]}});
  return arr;
}

int cmd_extract(const fs::path& trajectory_dir, const fs::path& labels_path,
                const fs::path& out_path, const RunConfig& cfg) {
  if (!fs::is_directory(trajectory_dir))
    throw tsauc::IoError("not a directory: " + trajectory_dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(trajectory_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw tsauc::IoError("no recordings found in " + trajectory_dir.string());

  const std::map<std::string, int> labels = tsauc::read_labels(labels_path);

  std::vector<tsauc::FeatureVector> rows;
  std::vector<int> row_labels;
  std::vector<std::string> skipped;
  for (const fs::path& file : files) {
    const tsauc::RawRecording rec = tsauc::read_recording(file);
    const tsauc::Statokinesigram s = tsauc::resample(rec, cfg.rate_hz);
    tsauc::FeatureVector f = tsauc::extract_features(s);
    const auto it = labels.find(f.subject_id);
    if (it == labels.end()) {
      skipped.push_back(f.subject_id);
      continue;
    }
    rows.push_back(std::move(f));
    row_labels.push_back(it->second);
  }
  for (const std::string& id : skipped)
    std::cerr << "warning: no label for subject '" << id << "', skipped\n";
  if (rows.empty())
    throw tsauc::IoError("no recording matched a label in " + labels_path.string());

  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows[a].subject_id < rows[b].subject_id;
  });

  tsauc::LabeledDataset ds;
  for (std::string_view name : tsauc::kFeatureNames)
    ds.feature_names.emplace_back(name);
  ds.X.resize(static_cast<Eigen::Index>(rows.size()), tsauc::kFeatureCount);
  ds.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    ds.ids.push_back(rows[order[i]].subject_id);
    ds.X.row(static_cast<Eigen::Index>(i)) = rows[order[i]].values.transpose();
    ds.y[static_cast<Eigen::Index>(i)] = row_labels[order[i]];
  }
  tsauc::write_feature_matrix(out_path, ds);
  std::cout << "wrote " << ds.n_rows() << " subjects to " << out_path.string()
            << " (" << skipped.size() << " skipped)\n";
  return 0;
}

int cmd_test(const fs::path& matrix_path, const fs::path& out_path,
             const RunConfig& cfg) {
  const tsauc::LabeledDataset ds = tsauc::read_feature_matrix(matrix_path);
  Json j = envelope("test", cfg, matrix_path);
  j["tsauc"] = tsauc_report_json(ds, search_space_from(cfg), cfg.alpha, cfg.runs);
  j["mmd"] = mmd_json(
      tsauc::mmd_test(ds, cfg.permutations,
                      tsauc::derive_seed(cfg.seed, {0x6d6d6474ULL})),
      cfg.alpha);
  j["univariate"] = univariate_json(ds, cfg.alpha);
  write_json(out_path, j);
  std::cout << "ts-AUC p=" << j["tsauc"]["p_value"].dump()
            << " reject=" << j["tsauc"]["reject"].dump()
            << "; MMD p=" << j["mmd"]["p_value"].dump()
            << " reject=" << j["mmd"]["reject"].dump() << "\n";
  return 0;
}

int cmd_importance(const fs::path& matrix_path, const fs::path& out_path,
                   const fs::path& chart_path, const RunConfig& cfg) {
  const tsauc::LabeledDataset ds = tsauc::read_feature_matrix(matrix_path);
  Json j = envelope("importance", cfg, matrix_path);
  j["tsauc"] = tsauc_report_json(ds, search_space_from(cfg), cfg.alpha, cfg.runs);
  write_json(out_path, j);

  std::string chart = "feature,I\n";
  for (const Json& row : j["tsauc"]["importance"])
    chart += row["feature"].get<std::string>() + "," + row["I"].dump() + "\n";
  tsauc::atomic_write(chart_path, chart);
  std::cout << "selected_feature_count="
            << j["tsauc"]["selected_feature_count"].dump() << "\n";
  return 0;
}

int cmd_experiment(const fs::path& matrix_path, const fs::path& out_path,
                   const std::string& mode_name,
                   const std::vector<double>& fractions, const RunConfig& cfg) {
  const tsauc::LabeledDataset ds = tsauc::read_feature_matrix(matrix_path);

  tsauc::ReductionProtocol proto;
  proto.mode = mode_name == "nonfaller"
                   ? tsauc::ReductionMode::nonfaller_only
                   : tsauc::ReductionMode::uniform_population;
  if (!fractions.empty()) proto.fractions = fractions;
  proto.repeats = cfg.repeats;
  proto.alpha = cfg.alpha;
  proto.seed = cfg.seed;
  proto.search = search_space_from(cfg);
  proto.mmd_permutations = cfg.permutations;

  const tsauc::ReductionCurve curve = tsauc::run_reduction(ds, proto);

  std::string detail = "method,mode,fraction,repeat,decision,p_value\n";
  for (const tsauc::ReductionRow& row : curve.rows)
    detail += tsauc::to_string(row.method) + "," + tsauc::to_string(proto.mode) +
              "," + tsauc::format_double(row.fraction) + "," +
              std::to_string(row.repeat) + "," + (row.decision ? "1" : "0") +
              "," + tsauc::format_double(row.p_value) + "\n";
  tsauc::atomic_write(out_path, detail);

  fs::path summary_path = out_path;
  summary_path.replace_filename(out_path.stem().string() + "_summary" +
                                out_path.extension().string());
  std::string summary = "method,mode,fraction,fraction_significant\n";
  for (const tsauc::CurvePoint& p : curve.aggregated)
    summary += tsauc::to_string(p.method) + "," + tsauc::to_string(proto.mode) +
               "," + tsauc::format_double(p.fraction) + "," +
               tsauc::format_double(p.fraction_significant) + "\n";
  tsauc::atomic_write(summary_path, summary);

  // Run metadata sidecar; the CSV schemas above stay fixed.
  Json meta = envelope("experiment", cfg, matrix_path);
  meta["mode"] = tsauc::to_string(proto.mode);
  meta["fractions"] = proto.fractions;
  fs::path meta_path = out_path;
  meta_path.replace_filename(out_path.stem().string() + "_run.json");
  write_json(meta_path, meta);

  std::cout << "wrote " << out_path.string() << " and " << summary_path.string()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ts-AUC posturographic two-sample testing toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tsauc::kVersion));

  RunConfig cfg;

  auto* extract = app.add_subcommand(
      "extract", "Extract the 17-feature matrix from trajectory CSVs");
  std::string trajectory_dir;
  std::string labels_path;
  std::string extract_out;
  extract->add_option("trajectory_dir", trajectory_dir,
                      "directory of t,x,y trajectory CSVs")->required();
  extract->add_option("--labels", labels_path, "subject_id,label CSV")->required();
  extract->add_option("--out", extract_out, "output feature matrix CSV")->required();
  extract->add_option("--rate", cfg.rate_hz, "resampling rate in Hz")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* test = app.add_subcommand(
      "test", "Run ts-AUC, MMD and univariate MWW with corrections");
  std::string test_matrix;
  std::string test_out;
  test->add_option("matrix", test_matrix, "feature matrix CSV")->required();
  test->add_option("--out", test_out, "output JSON report")->required();
  test->add_option("--runs", cfg.runs, "seeds per model size in the selection")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common_flags(test, cfg);

  auto* importance = app.add_subcommand(
      "importance", "Permutation importance and nested-model selection");
  std::string imp_matrix;
  std::string imp_out;
  std::string imp_chart;
  importance->add_option("matrix", imp_matrix, "feature matrix CSV")->required();
  importance->add_option("--out", imp_out, "output JSON report")->required();
  importance->add_option("--chart", imp_chart,
                         "bar-chart CSV (default <out stem>_chart.csv)");
  importance->add_option("--runs", cfg.runs, "seeds per model size in the selection")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common_flags(importance, cfg);

  auto* experiment = app.add_subcommand(
      "experiment", "Population-reduction study over all test methods");
  std::string exp_matrix;
  std::string exp_out;
  std::string exp_mode = "uniform";
  std::vector<double> exp_fractions;
  experiment->add_option("matrix", exp_matrix, "feature matrix CSV")->required();
  experiment->add_option("--out", exp_out, "output detail CSV")->required();
  experiment->add_option("--mode", exp_mode, "uniform | nonfaller")
      ->check(CLI::IsMember({"uniform", "nonfaller"}))
      ->capture_default_str();
  experiment->add_option("--fractions", exp_fractions,
                         "retained fractions, strictly decreasing")
      ->delimiter(',');
  experiment->add_option("--repeats", cfg.repeats, "subsamples per fraction")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common_flags(experiment, cfg);

  try {
    app.parse(argc, argv);
    if (*extract)
      return cmd_extract(trajectory_dir, labels_path, extract_out, cfg);
    if (*test) return cmd_test(test_matrix, test_out, cfg);
    if (*importance) {
      const fs::path chart =
          imp_chart.empty()
              ? fs::path(fs::path(imp_out).replace_extension("").string() +
                         "_chart.csv")
              : fs::path(imp_chart);
      return cmd_importance(imp_matrix, imp_out, chart, cfg);
    }
    if (*experiment)
      return cmd_experiment(exp_matrix, exp_out, exp_mode, exp_fractions, cfg);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const tsauc::StatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const tsauc::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tsauc::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
