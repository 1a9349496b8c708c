#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "noisytd/cube.hpp"
#include "noisytd/hypothesis.hpp"

namespace noisytd {

// Explicit-mode table row: point mass and conditional positive-label rate.
struct ExplicitRow {
  Word bits = 0;
  double mass = 0.0;
  double pos_rate = 0.0;
};

// Unified per-point aggregate both modes reduce to: total weight at the point
// and the weight carrying label 1. All learner and error computations run on
// this table; empirical moments are therefore plain sample frequencies.
struct FlatCell {
  Word bits = 0;
  double w = 0.0;
  double wpos = 0.0;
};

struct Moments {
  double weight = 0.0;
  double mu = 0.0;
  double var = 0.0;  // Var[y] = mu(1-mu)
};

class ConditionedView;

// A joint distribution over {-1,+1}^dim x {0,1}, either as an explicit table
// (exact moment queries, dim <= 24) or as an empirical multiset of labeled
// samples. Immutable after construction and safe to share across threads.
class LabeledDistribution {
 public:
  enum class Mode { Explicit, Empirical };

  static LabeledDistribution make_explicit(int dim, std::vector<ExplicitRow> rows);
  static LabeledDistribution from_samples(int dim, std::vector<SampleRecord> records);

  Mode mode() const { return mode_; }
  int dim() const { return dim_; }
  bool explicit_mode() const { return mode_ == Mode::Explicit; }

  const std::vector<ExplicitRow>& rows() const;        // explicit only
  const std::vector<SampleRecord>& records() const;    // empirical only
  const std::vector<FlatCell>& flat() const { return flat_; }
  double total_weight() const { return total_w_; }

  Moments moments() const;

  // i.i.d. labeled samples; explicit mode only (inverse-CDF over the table).
  std::vector<SampleRecord> sample(std::size_t n, std::mt19937_64& rng) const;

  // Line-oriented text format: "dim=<d>" header, then one
  // "point(<bitstring>) <mass> <positive_rate>" row per nonzero-mass point,
  // printed with 17 significant digits so decimal round-trips are exact.
  std::string to_text() const;
  static LabeledDistribution from_text(const std::string& text);

 private:
  LabeledDistribution() = default;

  Mode mode_ = Mode::Explicit;
  int dim_ = 0;
  std::vector<ExplicitRow> rows_;
  std::vector<SampleRecord> records_;
  std::vector<FlatCell> flat_;
  std::vector<double> cdf_;  // explicit mode, for sampling
  double total_w_ = 0.0;
};

LabeledDistribution make_explicit(int dim, std::vector<ExplicitRow> rows);

// The distribution at the end of a constraint path: D conditioned on
// h_1(x)=b_1, ..., h_k(x)=b_k. Weight queries are always allowed; moment
// queries on a zero-weight view throw ZeroWeight.
class ConditionedView {
 public:
  ConditionedView(const LabeledDistribution& base, const HypothesisClass& hyps,
                  std::vector<PathConstraint> path);

  const LabeledDistribution& base() const { return *base_; }
  const HypothesisClass& hypotheses() const { return *hyps_; }
  const std::vector<PathConstraint>& path() const { return path_; }

  double weight() const { return w_; }
  bool degenerate() const { return w_ <= 0.0; }
  Moments moments() const;

  // Indices into base().flat() of the points satisfying the path.
  const std::vector<std::int32_t>& cells() const { return cells_; }

  ConditionedView refined(PathConstraint c) const;

 private:
  const LabeledDistribution* base_;
  const HypothesisClass* hyps_;
  std::vector<PathConstraint> path_;
  std::vector<std::int32_t> cells_;
  double w_ = 0.0;
  double wpos_ = 0.0;
};

ConditionedView condition(const LabeledDistribution& dist, const HypothesisClass& hyps,
                          std::vector<PathConstraint> path);

}  // namespace noisytd
