#pragma once

#include <functional>
#include <string>

#include "noisytd/distribution.hpp"

namespace noisytd {

// Concave splitting objective G : [0,1] -> [0,1], symmetric around 1/2 with
// G(0)=G(1)=0 and G(1/2)=1. kappa is a strong-concavity constant validated on
// a grid at construction: G''(p) <= -kappa on (0,1).
class ImpurityFn {
 public:
  enum class Kind { Gini, BinaryEntropy, KMSqrt, CustomConcave };

  static ImpurityFn gini();
  static ImpurityFn binary_entropy();
  static ImpurityFn km_sqrt();
  static ImpurityFn custom_concave(std::function<double(double)> g, double kappa);

  // Config ids: "gini", "entropy", "kmsqrt", "concave:<kappa>". The concave
  // family blends Gini with 2*sqrt(p(1-p)) at weight kappa/8 (kappa in (0,8]).
  static ImpurityFn from_id(const std::string& id);

  Kind kind() const { return kind_; }
  const std::string& id() const { return id_; }
  double kappa() const { return kappa_; }
  double operator()(double p) const;

 private:
  ImpurityFn(Kind kind, std::string id, std::function<double(double)> g, double kappa,
             bool validate);

  Kind kind_;
  std::string id_;
  std::function<double(double)> g_;
  double kappa_;
};

// Split bookkeeping at one leaf: tau = Pr[h=1], biases of the leaf and the
// two children, the local drop Delta and the leaf-weighted drop.
struct GainReport {
  double tau = 0.0;
  double mu = 0.0;
  double mu0 = 0.0;
  double mu1 = 0.0;
  double delta = 0.0;
  double weighted_delta = 0.0;
};

double impurity_value(const ImpurityFn& g, double p);

// Local drop in G at the view's leaf when splitting with hypothesis h.
// A zero-mass branch gives Delta = 0 with both child biases reported as mu.
GainReport purity_gain(const ConditionedView& view, int hyp, const ImpurityFn& g);

// Same from raw split aggregates (total weight, positive weight, and the
// weight/positive weight of the h=1 branch); weight_scale multiplies the
// weighted drop. Shared with the learner's scan.
GainReport gain_from_aggregates(double w, double wpos, double w1, double wpos1,
                                const ImpurityFn& g, double weight_scale);

struct GiniIdentity {
  double delta = 0.0;
  double closed_form = 0.0;  // 4*tau*(1-tau)*(mu1-mu0)^2
};

GiniIdentity gini_gain_identity_check(const ConditionedView& view, int hyp);

struct DropBoundReport {
  double delta = 0.0;
  double cov = 0.0;    // Cov[h(x), y] on the view
  double bound = 0.0;  // 2*kappa*Cov^2 (16*Cov^2 for Gini)
  bool pass = false;
};

DropBoundReport covariance_drop_bound_check(const ConditionedView& view, int hyp,
                                            const ImpurityFn& g);

}  // namespace noisytd
