#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "noisytd/analysis.hpp"
#include "noisytd/distribution.hpp"

namespace noisytd {

enum class NoiseModel { NastySample, AgnosticLabels, ShiftMixture };

struct Edit {
  std::size_t index = 0;
  SampleRecord before;
  SampleRecord after;
};

// Audit trail of a sample corruption: at most floor(eta * n) records were
// edited, and every edit is listed.
struct CorruptionPlan {
  NoiseModel model = NoiseModel::NastySample;
  double eta = 0.0;
  std::uint64_t seed = 0;
  std::string strategy;
  std::vector<Edit> edits;

  // CSV: index,before_point,before_label,after_point,after_label
  std::string to_csv(int dim) const;
};

struct NastyStrategy {
  enum class Kind { RandomReplace, FlipAgreeingLabels, CorrelationCancel };
  Kind kind = Kind::RandomReplace;
  HypothesisClass hyps;  // FlipAgreeingLabels: pool for the strongest hypothesis
  int junta_k = 0;       // CorrelationCancel: width of the anti-correlated prefix

  static NastyStrategy random_replace() { return {Kind::RandomReplace, {}, 0}; }
  static NastyStrategy flip_agreeing(HypothesisClass h) {
    return {Kind::FlipAgreeingLabels, std::move(h), 0};
  }
  static NastyStrategy correlation_cancel(int k) { return {Kind::CorrelationCancel, {}, k}; }
};

struct AgnosticStrategy {
  enum class Kind { RandomFlip, FlipAgreeingLabels };
  Kind kind = Kind::RandomFlip;
  HypothesisClass hyps;

  static AgnosticStrategy random_flip() { return {Kind::RandomFlip, {}}; }
  static AgnosticStrategy flip_agreeing(HypothesisClass h) {
    return {Kind::FlipAgreeingLabels, std::move(h)};
  }
};

std::pair<std::vector<SampleRecord>, CorruptionPlan> corrupt_sample_nasty(
    const std::vector<SampleRecord>& sample, int dim, double eta, const NastyStrategy& strategy,
    std::uint64_t seed);

std::pair<std::vector<SampleRecord>, CorruptionPlan> corrupt_labels_agnostic(
    const std::vector<SampleRecord>& sample, int dim, double eta,
    const AgnosticStrategy& strategy, std::uint64_t seed);

// Pointwise mixture (1-eta) D + eta E on the joint space; dtv(D, Dhat) <= eta
// with equality when the supports are disjoint.
LabeledDistribution shift_mixture(const LabeledDistribution& d, const LabeledDistribution& e,
                                  double eta);

// The hard instance: labels from Tribes_{w*,s*} on the first k coordinates of
// a uniform cube, mixed with an anti-correlated component E at exactly the
// rate eta = v/(1+v) that cancels every Cov[x_i, y] under the mixture. Tribes
// parameters are chosen at bias level 2*eps so min_b Pr[g = b] >= 2*eps.
struct LowerBoundInstance {
  int d = 0;
  int k = 0;
  int w = 0;
  int s = 0;
  double eps = 0.0;
  double gamma = 0.0;
  double v = 0.0;    // common signed correlation E[x_i g] on the clean junta
  double eta = 0.0;  // mixture weight solving (1-eta) v - eta = 0
  LabeledDistribution clean;
  LabeledDistribution component;
  LabeledDistribution corrupted;
  HypothesisClass hyps;
};

LowerBoundInstance build_lowerbound_instance(int d, double eps, double gamma);

}  // namespace noisytd
