#include "noisytd/impurity.hpp"

#include <cmath>

namespace noisytd {

namespace {

double gini_eval(double p) { return 4.0 * p * (1.0 - p); }

double entropy_eval(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double kmsqrt_eval(double p) { return 2.0 * std::sqrt(p * (1.0 - p)); }

// kappa for H2 is 4/ln2 (second derivative -1/(ln2 * p(1-p)), extremal at 1/2);
// for 2*sqrt(p(1-p)) the infimum of -G'' is 4, also at 1/2.
constexpr double kKappaEntropy = 5.7707801635558534;  // 4/ln2
constexpr double kKappaKmSqrt = 4.0;

void validate_impurity(const std::function<double(double)>& g, double kappa,
                       const std::string& id) {
  auto bad = [&](const std::string& what) {
    throw OutOfRange("impurity '" + id + "': " + what);
  };
  if (std::fabs(g(0.0)) > 1e-12 || std::fabs(g(1.0)) > 1e-12) bad("G(0)=G(1)=0 fails");
  if (std::fabs(g(0.5) - 1.0) > 1e-12) bad("G(1/2)=1 fails");
  if (kappa <= 0.0) bad("kappa must be positive");
  const double h = 1e-4;
  for (int i = 1; i < 1000; ++i) {
    double p = i * 1e-3;
    if (std::fabs(g(p) - g(1.0 - p)) > 1e-9) bad("symmetry fails");
    if (g(p) + 1e-9 < std::min(p, 1.0 - p)) bad("G(p) >= min(p,1-p) fails");
    double second = (g(p + h) - 2.0 * g(p) + g(p - h)) / (h * h);
    if (second > -kappa + 1e-3) bad("G'' <= -kappa fails on grid");
  }
}

}  // namespace

ImpurityFn::ImpurityFn(Kind kind, std::string id, std::function<double(double)> g,
                       double kappa, bool validate)
    : kind_(kind), id_(std::move(id)), g_(std::move(g)), kappa_(kappa) {
  if (validate) validate_impurity(g_, kappa_, id_);
}

ImpurityFn ImpurityFn::gini() { return ImpurityFn(Kind::Gini, "gini", gini_eval, 8.0, true); }

ImpurityFn ImpurityFn::binary_entropy() {
  return ImpurityFn(Kind::BinaryEntropy, "entropy", entropy_eval, kKappaEntropy, true);
}

ImpurityFn ImpurityFn::km_sqrt() {
  return ImpurityFn(Kind::KMSqrt, "kmsqrt", kmsqrt_eval, kKappaKmSqrt, true);
}

ImpurityFn ImpurityFn::custom_concave(std::function<double(double)> g, double kappa) {
  return ImpurityFn(Kind::CustomConcave, "concave:" + std::to_string(kappa), std::move(g),
                    kappa, true);
}

ImpurityFn ImpurityFn::from_id(const std::string& id) {
  if (id == "gini") return gini();
  if (id == "entropy") return binary_entropy();
  if (id == "kmsqrt") return km_sqrt();
  if (id.rfind("concave:", 0) == 0) {
    double kappa = std::stod(id.substr(8));
    if (kappa <= 0.0 || kappa > 8.0)
      throw OutOfRange("concave:<kappa> requires kappa in (0, 8]");
    double wg = kappa / 8.0;
    auto g = [wg](double p) { return wg * gini_eval(p) + (1.0 - wg) * kmsqrt_eval(p); };
    return ImpurityFn(Kind::CustomConcave, id, g, kappa, true);
  }
  throw ConfigError("unknown impurity id: " + id);
}

double ImpurityFn::operator()(double p) const {
  if (p < -1e-15 || p > 1.0 + 1e-15) throw OutOfRange("impurity: bias outside [0,1]");
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  return g_(p);
}

double impurity_value(const ImpurityFn& g, double p) {
  if (p < 0.0 || p > 1.0) throw OutOfRange("impurity_value: bias outside [0,1]");
  return g(p);
}

GainReport gain_from_aggregates(double w, double wpos, double w1, double wpos1,
                                const ImpurityFn& g, double weight_scale) {
  GainReport r;
  if (w <= 0.0) throw ZeroWeight("purity gain on zero-weight leaf");
  r.mu = wpos / w;
  r.tau = w1 / w;
  double w0 = w - w1;
  if (w1 <= 0.0 || w0 <= 0.0) {
    // Zero-mass branch: the split is degenerate and the drop is 0.
    r.mu0 = r.mu;
    r.mu1 = r.mu;
    r.delta = 0.0;
    r.weighted_delta = 0.0;
    return r;
  }
  r.mu1 = wpos1 / w1;
  r.mu0 = (wpos - wpos1) / w0;
  double delta = g(r.mu) - (1.0 - r.tau) * g(r.mu0) - r.tau * g(r.mu1);
  // Concavity gives delta >= 0; clip the few-ulp negatives from cancellation.
  if (delta < 0.0 && delta > -1e-9) delta = 0.0;
  r.delta = delta;
  r.weighted_delta = weight_scale * delta;
  return r;
}

namespace {

GainReport gain_on_view(const ConditionedView& view, int hyp, const ImpurityFn& g) {
  if (view.degenerate()) throw ZeroWeight("purity_gain: degenerate view");
  const auto& flat = view.base().flat();
  const auto& hyps = view.hypotheses();
  double w = 0.0, wpos = 0.0, w1 = 0.0, wpos1 = 0.0;
  for (auto i : view.cells()) {
    const auto& c = flat[static_cast<std::size_t>(i)];
    w += c.w;
    wpos += c.wpos;
    if (hyps.eval(hyp, c.bits)) {
      w1 += c.w;
      wpos1 += c.wpos;
    }
  }
  return gain_from_aggregates(w, wpos, w1, wpos1, g, view.weight());
}

}  // namespace

GainReport purity_gain(const ConditionedView& view, int hyp, const ImpurityFn& g) {
  return gain_on_view(view, hyp, g);
}

GiniIdentity gini_gain_identity_check(const ConditionedView& view, int hyp) {
  auto g = ImpurityFn::gini();
  auto r = gain_on_view(view, hyp, g);
  GiniIdentity out;
  out.delta = r.delta;
  double d = r.mu1 - r.mu0;
  out.closed_form = 4.0 * r.tau * (1.0 - r.tau) * d * d;
  return out;
}

DropBoundReport covariance_drop_bound_check(const ConditionedView& view, int hyp,
                                            const ImpurityFn& g) {
  auto r = gain_on_view(view, hyp, g);
  DropBoundReport out;
  out.delta = r.delta;
  // Cov[h(x), y] = tau(1-tau)(mu1 - mu0) on the view.
  out.cov = r.tau * (1.0 - r.tau) * (r.mu1 - r.mu0);
  out.bound = 2.0 * g.kappa() * out.cov * out.cov;
  out.pass = out.delta >= out.bound - 1e-12;
  return out;
}

}  // namespace noisytd
