#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "noisytd/distribution.hpp"
#include "noisytd/hypothesis.hpp"
#include "noisytd/tree.hpp"

namespace noisytd {

using PointFn = std::function<bool(BitPoint)>;
using JointFn = std::function<double(BitPoint, Label)>;

// Product marginal over {-1,+1}^d: p[i] = Pr[x_i = +1].
struct ProductDistribution {
  std::vector<double> p;

  int dim() const { return static_cast<int>(p.size()); }
  double mass(Word bits) const;
  static ProductDistribution uniform(int d);
};

ProductDistribution product_distribution(std::vector<double> p);

// Dense truth table of a predicate, indexed by point bits.
std::vector<std::uint8_t> truth_table(const PointFn& f, int dim);
bool is_monotone(const std::vector<std::uint8_t>& table, int dim);

// Inf_i(f) = 2 Pr[f(x) != f(x with coordinate i rerandomized)], exact.
double influence(const PointFn& f, const ProductDistribution& px, int i);
double influence(const std::vector<std::uint8_t>& table, const ProductDistribution& px, int i);

// Moments of real-valued functions; the labeled overloads run over the joint
// (point, label) space of an explicit distribution, the marginal overloads
// over a product marginal.
double expectation(const LabeledDistribution& dist, const JointFn& f);
double variance(const LabeledDistribution& dist, const JointFn& f);
double covariance(const LabeledDistribution& dist, const JointFn& f, const JointFn& g);
double expectation(const ProductDistribution& px, const std::function<double(BitPoint)>& f);
double covariance(const ProductDistribution& px, const std::function<double(BitPoint)>& f,
                  const std::function<double(BitPoint)>& g);

struct InfCovRow {
  int coord = 0;
  double influence = 0.0;
  double covariance = 0.0;  // Cov[f(x), x_i] in the signed view
};

// For monotone f these two columns agree coordinate by coordinate
// (both equal 2 p_i q_i (alpha - beta)). Throws NotMonotone otherwise.
std::vector<InfCovRow> inf_cov_identity_check(const PointFn& f, const ProductDistribution& px);

// Exact total variation distance, half the L1 gap over the joint space.
double tv_distance(const LabeledDistribution& a, const LabeledDistribution& b);
double tv_distance_marginal(const std::vector<double>& a, const std::vector<double>& b);

struct TvMomentReport {
  double eta = 0.0;   // exact dtv of the pair
  double de = 0.0;    // |E_a f - E_b f|
  double dvar = 0.0;  // |Var_a f - Var_b f|
  double dcov = 0.0;  // |Cov_a[f,g] - Cov_b[f,g]|
  bool pass_e = false, pass_var = false, pass_cov = false;
  bool pass() const { return pass_e && pass_var && pass_cov; }
};

// |dE| <= eta, |dVar| <= eta, |dCov| <= 2 eta for f,g valued in [0,1].
TvMomentReport tv_moment_bounds_check(const LabeledDistribution& a,
                                      const LabeledDistribution& b, const JointFn& f,
                                      const JointFn& g);

// Joint distribution over a finite leaf set and a finite point set
// (row-major |L| x |X| masses).
struct FiniteJoint {
  int nl = 0;
  int nx = 0;
  std::vector<double> mass;

  double at(int l, int x) const { return mass[static_cast<std::size_t>(l) * nx + x]; }
  double& at(int l, int x) { return mass[static_cast<std::size_t>(l) * nx + x]; }
  static FiniteJoint zeros(int nl, int nx);
};

struct LeafTvReport {
  double lhs = 0.0;  // E_{l ~ a} dtv(a_{x|l}, b_{x|l})
  double rhs = 0.0;  // 2 dtv(a, b)
  bool pass = false;
};

LeafTvReport leaf_tv_check(const FiniteJoint& a, const FiniteJoint& b);

struct RestrictionStat {
  Restriction rho;
  double weight = 0.0;
  double var = 0.0;
  double best_ratio = 0.0;
  int best_hyp = -1;
};

struct AdvantageReport {
  double gamma_star = 1.0;  // vacuous minimum when no view qualifies
  std::vector<PathConstraint> witness_path;
  std::optional<Restriction> witness;
  int witness_hyp = -1;
  long long considered = 0;
  long long degenerate = 0;
  std::vector<RestrictionStat> table;  // populated only when keep_table
};

struct WlaOptions {
  bool restrictions_only = true;  // projections: sweep all 3^d restrictions
  int depth_cap = 3;              // general classes: conjunction depth cap
  long long max_views = 2'000'000;
  bool keep_table = false;
  double var_eps = 1e-13;  // views with Var[y] below this are vacuous
};

// gamma* = min over nondegenerate induced views of max_h |Cov[h,y]| / Var[y].
AdvantageReport weak_learning_advantage(const LabeledDistribution& dist,
                                        const HypothesisClass& hyps,
                                        const WlaOptions& opts = {});

struct OsssReport {
  int size = 0;
  double max_inf = 0.0;
  double var = 0.0;  // signed-view variance 1 - E[f]^2
  double rhs = 0.0;  // var / log2(size)
  double ratio = 0.0;
  bool pass = false;
};

OsssReport osss_oracle(const DecisionTree& tree, const HypothesisClass& hyps,
                       const ProductDistribution& px);

struct KklReport {
  double max_inf = 0.0;
  double rhs = 0.0;  // (log2(max(k,2)) / k) * var, constant not asserted
  double ratio = 0.0;
};

KklReport kkl_oracle(const PointFn& f, int k);

}  // namespace noisytd
