#include "noisytd/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "noisytd/targets.hpp"

namespace noisytd {

std::string CorruptionPlan::to_csv(int dim) const {
  std::string out = "index,before_point,before_label,after_point,after_label\n";
  for (const auto& e : edits) {
    out += std::to_string(e.index) + "," + bits_to_string(e.before.bits, dim) + "," +
           std::to_string(int(e.before.y)) + "," + bits_to_string(e.after.bits, dim) + "," +
           std::to_string(int(e.after.y)) + "\n";
  }
  return out;
}

namespace {

std::size_t edit_budget(double eta, std::size_t n) {
  if (!(eta >= 0.0 && eta < 1.0)) throw OutOfRange("corruption: eta outside [0,1)");
  return static_cast<std::size_t>(std::floor(eta * static_cast<double>(n)));
}

std::vector<std::size_t> pick_indices(std::size_t n, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Strongest hypothesis by |Cov[h(x), y]| on the empirical joint, lowest index
// on ties.
int strongest_hypothesis(const std::vector<SampleRecord>& sample, const HypothesisClass& hyps) {
  if (hyps.empty()) throw EmptyHypothesisClass("flip-agreeing: empty hypothesis class");
  const double n = static_cast<double>(sample.size());
  double mu = 0.0;
  for (const auto& r : sample) mu += r.y;
  mu /= n;
  int best = 0;
  double best_cov = -1.0;
  for (int h = 0; h < static_cast<int>(hyps.size()); ++h) {
    double w1 = 0.0, wy1 = 0.0;
    for (const auto& r : sample) {
      if (hyps.eval(h, r.bits)) {
        w1 += 1.0;
        wy1 += r.y;
      }
    }
    double cov = std::fabs(wy1 / n - (w1 / n) * mu);
    if (cov > best_cov) {
      best_cov = cov;
      best = h;
    }
  }
  return best;
}

std::vector<std::size_t> agreeing_indices(const std::vector<SampleRecord>& sample,
                                          const HypothesisClass& hyps, int h) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sample.size(); ++i)
    if (static_cast<Label>(hyps.eval(h, sample[i].bits)) == sample[i].y) out.push_back(i);
  return out;
}

}  // namespace

std::pair<std::vector<SampleRecord>, CorruptionPlan> corrupt_sample_nasty(
    const std::vector<SampleRecord>& sample, int dim, double eta, const NastyStrategy& strategy,
    std::uint64_t seed) {
  std::size_t budget = edit_budget(eta, sample.size());
  std::mt19937_64 rng(seed);
  auto corrupted = sample;
  CorruptionPlan plan;
  plan.model = NoiseModel::NastySample;
  plan.eta = eta;
  plan.seed = seed;

  auto record_edit = [&](std::size_t i, SampleRecord after) {
    if (corrupted[i] == after) return;
    plan.edits.push_back({i, corrupted[i], after});
    corrupted[i] = after;
  };

  switch (strategy.kind) {
    case NastyStrategy::Kind::RandomReplace: {
      plan.strategy = "random-replace";
      auto idx = pick_indices(sample.size(), budget, rng);
      std::uniform_int_distribution<Word> point(0, (Word(1) << dim) - 1);
      std::uniform_int_distribution<int> bit(0, 1);
      for (auto i : idx) record_edit(i, SampleRecord{point(rng), static_cast<Label>(bit(rng))});
      break;
    }
    case NastyStrategy::Kind::FlipAgreeingLabels: {
      plan.strategy = "flip-agreeing";
      int h = strongest_hypothesis(sample, strategy.hyps);
      auto cand = agreeing_indices(sample, strategy.hyps, h);
      std::shuffle(cand.begin(), cand.end(), rng);
      cand.resize(std::min(budget, cand.size()));
      std::sort(cand.begin(), cand.end());
      for (auto i : cand)
        record_edit(i, SampleRecord{corrupted[i].bits, static_cast<Label>(1 - corrupted[i].y)});
      break;
    }
    case NastyStrategy::Kind::CorrelationCancel: {
      plan.strategy = "correlation-cancel";
      int k = strategy.junta_k;
      if (k < 1 || k > dim) throw OutOfRange("correlation-cancel: junta width outside [1, dim]");
      auto idx = pick_indices(sample.size(), budget, rng);
      std::uniform_int_distribution<int> bit(0, 1);
      Word prefix_mask = (Word(1) << k) - 1;
      std::uniform_int_distribution<Word> suffix(0, (Word(1) << (dim - k)) - 1);
      for (auto i : idx) {
        // y uniform; the first k coordinates are all -y, the rest uniform.
        Label y = static_cast<Label>(bit(rng));
        Word low = y ? 0 : prefix_mask;
        Word z = dim > k ? suffix(rng) : 0;
        record_edit(i, SampleRecord{low | (z << k), y});
      }
      break;
    }
  }
  return {std::move(corrupted), std::move(plan)};
}

std::pair<std::vector<SampleRecord>, CorruptionPlan> corrupt_labels_agnostic(
    const std::vector<SampleRecord>& sample, int dim, double eta,
    const AgnosticStrategy& strategy, std::uint64_t seed) {
  (void)dim;
  std::size_t budget = edit_budget(eta, sample.size());
  std::mt19937_64 rng(seed);
  auto corrupted = sample;
  CorruptionPlan plan;
  plan.model = NoiseModel::AgnosticLabels;
  plan.eta = eta;
  plan.seed = seed;

  std::vector<std::size_t> chosen;
  if (strategy.kind == AgnosticStrategy::Kind::RandomFlip) {
    plan.strategy = "random-flip";
    chosen = pick_indices(sample.size(), budget, rng);
  } else {
    plan.strategy = "flip-agreeing";
    int h = strongest_hypothesis(sample, strategy.hyps);
    chosen = agreeing_indices(sample, strategy.hyps, h);
    std::shuffle(chosen.begin(), chosen.end(), rng);
    chosen.resize(std::min(budget, chosen.size()));
    std::sort(chosen.begin(), chosen.end());
  }
  for (auto i : chosen) {
    SampleRecord after{corrupted[i].bits, static_cast<Label>(1 - corrupted[i].y)};
    plan.edits.push_back({i, corrupted[i], after});
    corrupted[i] = after;
  }
  return {std::move(corrupted), std::move(plan)};
}

LabeledDistribution shift_mixture(const LabeledDistribution& d, const LabeledDistribution& e,
                                  double eta) {
  if (d.dim() != e.dim()) throw DimMismatch("shift_mixture: dim mismatch");
  if (!d.explicit_mode() || !e.explicit_mode())
    throw Error("shift_mixture: explicit mode only");
  if (!(eta >= 0.0 && eta < 1.0)) throw OutOfRange("shift_mixture: eta outside [0,1)");

  const auto& rd = d.rows();
  const auto& re = e.rows();
  std::vector<ExplicitRow> rows;
  std::size_t i = 0, j = 0;
  auto push = [&](Word bits, double md, double qd, double me, double qe) {
    double mass = (1.0 - eta) * md + eta * me;
    double pos = (1.0 - eta) * md * qd + eta * me * qe;
    rows.push_back({bits, mass, mass > 0.0 ? pos / mass : 0.0});
  };
  while (i < rd.size() || j < re.size()) {
    if (j >= re.size() || (i < rd.size() && rd[i].bits < re[j].bits)) {
      push(rd[i].bits, rd[i].mass, rd[i].pos_rate, 0.0, 0.0);
      ++i;
    } else if (i >= rd.size() || re[j].bits < rd[i].bits) {
      push(re[j].bits, 0.0, 0.0, re[j].mass, re[j].pos_rate);
      ++j;
    } else {
      push(rd[i].bits, rd[i].mass, rd[i].pos_rate, re[j].mass, re[j].pos_rate);
      ++i;
      ++j;
    }
  }
  return LabeledDistribution::make_explicit(d.dim(), std::move(rows));
}

LowerBoundInstance build_lowerbound_instance(int d, double eps, double gamma) {
  if (d < 1 || d > kMaxExplicitDim)
    throw InfeasibleParameters("lower bound: d outside explicit range [1, 24]");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw InfeasibleParameters("lower bound: gamma outside (0,1)");
  if (std::pow(gamma, 1.0 / gamma) > eps)
    throw InfeasibleParameters("lower bound: gamma^(1/gamma) <= eps fails");

  // Bias level 2*eps so that every leaf over the useless coordinates keeps
  // min_b Pr[g=b] >= 2*eps.
  TribesParams params = tribes_params_for(2.0 * eps, d);

  LowerBoundInstance inst;
  inst.d = d;
  inst.k = params.k;
  inst.w = params.w;
  inst.s = params.s;
  inst.eps = eps;
  inst.gamma = gamma;
  inst.v = tribes_signed_correlation(params.w, params.s);
  inst.eta = inst.v / (1.0 + inst.v);

  auto g = tribes(params.w, params.s);
  inst.clean = distribution_from_function(ProductDistribution::uniform(d), g);
  inst.hyps = HypothesisClass::projections(d);

  // Component E: y uniform, first k coordinates all equal to -y, the rest
  // uniform.
  const int k = params.k;
  std::vector<ExplicitRow> erows;
  const Word prefix_mask = (Word(1) << k) - 1;
  const int nz = d - k;
  const double mass = 0.5 * std::ldexp(1.0, -nz);
  for (Word z = 0; z < (Word(1) << nz); ++z) {
    erows.push_back({(z << k), mass, 1.0});               // y = +1, prefix all -1
    erows.push_back({prefix_mask | (z << k), mass, 0.0});  // y = -1, prefix all +1
  }
  inst.component = LabeledDistribution::make_explicit(d, std::move(erows));
  inst.corrupted = shift_mixture(inst.clean, inst.component, inst.eta);

  if (std::fabs((1.0 - inst.eta) * inst.v - inst.eta) > 1e-14)
    throw InvariantFailure("lower bound: eta does not cancel the correlation");
  double neg = tribes_negative_rate(params.w, params.s);
  if (std::min(neg, 1.0 - neg) < 2.0 * eps - 1e-12)
    throw InvariantFailure("lower bound: bias floor below 2*eps");
  return inst;
}

}  // namespace noisytd
