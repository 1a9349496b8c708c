#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "noisytd/distribution.hpp"
#include "noisytd/impurity.hpp"
#include "noisytd/tree.hpp"

namespace noisytd {

enum class TieBreak { LowestIndexFirst, HighestIndexFirst, SeededRandom };

TieBreak tie_break_from_id(const std::string& id);

struct SplitEvent {
  int iter = 0;         // 1-based iteration
  int node = 0;         // tree node index of the split leaf
  int hyp = 0;
  int child0 = 0;
  int child1 = 0;
  int leaves_after = 0;
  const DecisionTree* tree = nullptr;
};

// The greedy loop grows one leaf per iteration, always splitting the
// (leaf, hypothesis) pair of maximum leaf-weighted local drop. Tie-breaking is
// a total order over (leaf creation order, hypothesis index); two candidates
// tie when their gains are within min_gain. Growth stops before size_bound
// only when every candidate gain is <= min_gain and every leaf is pure or has
// zero weight.
struct TrainConfig {
  int size_bound = 1;
  ImpurityFn impurity = ImpurityFn::gini();
  HypothesisClass hypotheses;
  TieBreak tie_break = TieBreak::LowestIndexFirst;
  std::uint64_t seed = 0;
  double min_gain = 1e-12;
  std::function<void(const SplitEvent&)> observer;  // optional, fired after each split
};

struct TraceRow {
  int iter = 0;
  int leaf_id = 0;  // creation index of the split leaf
  int hyp_id = 0;
  double weighted_gain = 0.0;
  double g_before = 0.0;
  double g_after = 0.0;
  double err_before = 0.0;
  double err_after = 0.0;
};

struct TrainTrace {
  std::vector<TraceRow> rows;
  double final_g = 0.0;
  double final_err = 0.0;

  std::string to_csv() const;
  static TrainTrace from_csv(const std::string& text);
};

std::pair<DecisionTree, TrainTrace> train(const LabeledDistribution& dist,
                                          const TrainConfig& cfg);

double evaluate_error(const DecisionTree& tree, const HypothesisClass& hyps,
                      const LabeledDistribution& dist);

// Per-iteration check of the greedy progress guarantee: at any step where the
// training error e (in excess of threshold_constant * eta / gamma) is
// positive, the best weighted gain must be at least (kappa/2) gamma^2 e^2 / s
// with s the current leaf count (= 4 gamma^2 e^2 / s for Gini).
struct AuditRow {
  int iter = 0;
  int leaves = 0;
  double err = 0.0;
  double excess = 0.0;
  double bound = 0.0;
  double actual = 0.0;
  bool pass = true;
};

std::vector<AuditRow> progress_audit(const LabeledDistribution& dist, const TrainConfig& cfg,
                                     double gamma, double eta,
                                     double threshold_constant = 12.0);

// Hoeffding-union style budget: ceil(8 t^2 |H| ln(t |H| / (1-confidence)) / tau^2).
double sample_size_bound(double tau, std::int64_t t, std::int64_t class_size,
                         double confidence);
std::int64_t sample_size_for(double tau, std::int64_t t, std::int64_t class_size,
                             double confidence);

}  // namespace noisytd
