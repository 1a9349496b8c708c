#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "noisytd/adversary.hpp"
#include "noisytd/topdown.hpp"

namespace noisytd {

// Flat key=value configuration with documented defaults; unknown keys are
// rejected. Command-line --set overrides are applied after the file.
struct ExperimentConfig {
  std::string experiment = "boost-noise";
  std::uint64_t seed = 1;
  int trials = 1;

  std::string target_kind = "projection";  // projection|majority|tribes|random-monotone-dt|read-once-dnf
  int target_coord = 1;                    // 1-based, projection targets
  int target_w = 1, target_s = 1;          // tribes targets
  int target_size = 8;                     // random monotone targets
  std::uint64_t target_seed = 1;

  int d = 4;
  std::string dist_kind = "uniform";  // uniform|product
  std::vector<double> dist_p;

  std::string noise_model = "none";  // none|nasty|agnostic|shift
  double eta = 0.0;
  std::string noise_strategy = "random-replace";

  std::string impurity = "gini";
  int t = 16;
  std::string tie = "lowest";
  std::string mode = "exact";   // exact|sample
  std::string sample_n = "auto";
  double tau = 0.25;
  int sample_t = 0;  // 0: use the target size in the sample budget
  double conf = 0.9;
  double min_gain = 1e-12;
  std::string gamma_mode = "config";  // config|exact
  double gamma = 0.0;

  double lb_eps = 0.1;
  double lb_gamma = 0.05;

  std::vector<int> report_sizes;  // default: 1 and powers of two up to t
  bool timing = false;            // timing on breaks byte-determinism
  double budget = 60.0;           // lemma-suite time budget, seconds
  std::string out_csv = "report.csv";
  std::string out_json = "summary.json";
  std::string out_artifacts = "artifacts";

  static ExperimentConfig from_file(const std::string& path,
                                    const std::vector<std::string>& overrides);
  static ExperimentConfig from_text(const std::string& text,
                                    const std::vector<std::string>& overrides);
  std::map<std::string, std::string> as_map() const;
};

struct ReportRow {
  std::string experiment;
  int trial = 0;
  int t = 0;
  double eta = 0.0;
  double gamma = 0.0;
  double eps = 0.0;
  double error_clean = 0.0;
  double error_corrupted = 0.0;
  double g_value = 0.0;
  double wall_ms = 0.0;
};

std::string report_csv(const std::vector<ReportRow>& rows);
std::vector<ReportRow> report_from_csv(const std::string& text);

struct RunResult {
  std::vector<ReportRow> rows;
  std::string summary_json;
  int failures = 0;
  int exit_code = 0;
};

// Runs the configured experiment, writes the CSV report, JSON summary, and
// artifacts (serialized distributions and tree snapshots for the round-trip
// audit). Deterministic byte-for-byte given config + seed.
RunResult run(const ExperimentConfig& cfg);

// SVG line charts, one file per experiment in the report: error_clean vs t,
// one polyline per eta value (mean across trials). Byte-deterministic.
void emit_plots(const std::vector<ReportRow>& rows, const std::string& out_dir);

struct LedgerEntry {
  std::string key;
  bool pass = true;
  bool informational = false;  // logged, never asserted
  std::string detail;
};

struct VerifyResult {
  std::vector<LedgerEntry> entries;
  std::vector<std::string> oracle_rows;  // "oracle,instance_id,lhs,rhs,ratio,pass"
  bool all_pass = true;
};

// Runs every module's invariant suite within the time budget and returns the
// pass/fail ledger. `sabotage` is a test hook: "bad-gini" swaps a broken
// evaluator into the drop-identity check, which must then fail.
VerifyResult verify_all(std::uint64_t seed, double budget_seconds,
                        const std::string& sabotage = "");

// Incremental clean-distribution error of the tree being grown: hook on_split
// into TrainConfig::observer and query error() at any snapshot size.
class ErrorTracker {
 public:
  ErrorTracker(const LabeledDistribution& eval_dist, const HypothesisClass& hyps);

  void on_split(const SplitEvent& ev);
  double error() const;

 private:
  const LabeledDistribution* eval_;
  const HypothesisClass* hyps_;
  const DecisionTree* tree_ = nullptr;
  std::vector<std::vector<std::int32_t>> support_;
  std::vector<double> w_, wpos_;
};

}  // namespace noisytd
