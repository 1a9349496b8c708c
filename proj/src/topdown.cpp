#include "noisytd/topdown.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "noisytd/parallel.hpp"

namespace noisytd {

TieBreak tie_break_from_id(const std::string& id) {
  if (id == "lowest") return TieBreak::LowestIndexFirst;
  if (id == "highest") return TieBreak::HighestIndexFirst;
  if (id == "random") return TieBreak::SeededRandom;
  throw ConfigError("unknown tie-break id: " + id);
}

namespace {

struct LeafState {
  int node = 0;       // index in the tree
  int creation = 0;   // == slot index in the state vector
  bool alive = true;
  std::vector<std::int32_t> cells;
  double w = 0.0;
  double wpos = 0.0;
  std::vector<double> wgain;  // weighted gain per hypothesis

  double mu() const { return w > 0.0 ? wpos / w : 0.0; }
  bool pure_or_void() const {
    if (w <= 0.0) return true;
    double m = mu();
    return m <= 0.0 || m >= 1.0;
  }
};

class Trainer {
 public:
  Trainer(const LabeledDistribution& dist, const TrainConfig& cfg)
      : dist_(dist), cfg_(cfg), tree_(dist.dim()), rng_(cfg.seed) {
    if (cfg_.hypotheses.empty()) throw EmptyHypothesisClass("train: empty hypothesis class");
    if (cfg_.hypotheses.dim() != dist_.dim())
      throw DimMismatch("train: hypothesis class dim != distribution dim");
    if (cfg_.size_bound < 1) throw OutOfRange("train: size bound must be >= 1");
    total_w_ = dist_.total_weight();
    if (total_w_ <= 0.0) throw ZeroWeight("train: distribution has zero mass");

    LeafState root;
    root.node = tree_.root();
    root.creation = 0;
    root.cells.resize(dist_.flat().size());
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(root.cells.size()); ++i)
      root.cells[static_cast<std::size_t>(i)] = i;
    fill_stats(root);
    tree_.set_label(root.node, root.mu() > 0.5 ? 1 : 0);
    compute_gains(root);
    leaves_.push_back(std::move(root));
  }

  std::pair<DecisionTree, TrainTrace> run() {
    TrainTrace trace;
    int iter = 0;
    while (tree_.leaf_count() < cfg_.size_bound) {
      ++iter;
      double gmax = 0.0;
      bool all_settled = true;
      bool any = false;
      for (const auto& lf : leaves_) {
        if (!lf.alive) continue;
        if (!lf.pure_or_void()) all_settled = false;
        for (double g : lf.wgain) {
          if (!any || g > gmax) gmax = g;
          any = true;
        }
      }
      if (gmax <= cfg_.min_gain && all_settled) break;

      auto [leaf_slot, hyp] = select(gmax);
      double g_before = objective();
      double err_before = error();
      do_split(leaf_slot, hyp, iter, g_before, err_before, trace);
    }
    trace.final_g = objective();
    trace.final_err = error();
    return {tree_, std::move(trace)};
  }

 private:
  void fill_stats(LeafState& lf) {
    const auto& flat = dist_.flat();
    double w = 0.0, wpos = 0.0;
    for (auto i : lf.cells) {
      w += flat[static_cast<std::size_t>(i)].w;
      wpos += flat[static_cast<std::size_t>(i)].wpos;
    }
    lf.w = w;
    lf.wpos = wpos;
  }

  void compute_gains(LeafState& lf) {
    const std::size_t nh = cfg_.hypotheses.size();
    lf.wgain.assign(nh, 0.0);
    if (lf.w <= 0.0) return;
    const auto& flat = dist_.flat();
    const double scale = lf.w / total_w_;
    auto one = [&](std::size_t h) {
      double w1 = 0.0, wpos1 = 0.0;
      for (auto i : lf.cells) {
        const auto& c = flat[static_cast<std::size_t>(i)];
        if (cfg_.hypotheses.eval(static_cast<int>(h), c.bits)) {
          w1 += c.w;
          wpos1 += c.wpos;
        }
      }
      lf.wgain[h] =
          gain_from_aggregates(lf.w, lf.wpos, w1, wpos1, cfg_.impurity, scale).weighted_delta;
    };
    if (lf.cells.size() * nh >= (std::size_t(1) << 16)) {
      parallel_tasks(nh, one);
    } else {
      for (std::size_t h = 0; h < nh; ++h) one(h);
    }
  }

  // Two-pass argmax: candidates within min_gain of the maximum tie, and the
  // tie policy picks over (leaf creation order, hypothesis index).
  std::pair<int, int> select(double gmax) {
    const double cut = gmax - cfg_.min_gain;
    const int nh = static_cast<int>(cfg_.hypotheses.size());
    int best_slot = -1, best_hyp = -1;
    if (cfg_.tie_break == TieBreak::SeededRandom) {
      std::vector<std::pair<int, int>> ties;
      for (int s = 0; s < static_cast<int>(leaves_.size()); ++s) {
        if (!leaves_[static_cast<std::size_t>(s)].alive) continue;
        for (int h = 0; h < nh; ++h)
          if (leaves_[static_cast<std::size_t>(s)].wgain[static_cast<std::size_t>(h)] >= cut)
            ties.push_back({s, h});
      }
      auto pick = ties[static_cast<std::size_t>(rng_() % ties.size())];
      return pick;
    }
    const bool highest = cfg_.tie_break == TieBreak::HighestIndexFirst;
    for (int s = 0; s < static_cast<int>(leaves_.size()); ++s) {
      const auto& lf = leaves_[static_cast<std::size_t>(s)];
      if (!lf.alive) continue;
      for (int h = 0; h < nh; ++h) {
        if (lf.wgain[static_cast<std::size_t>(h)] < cut) continue;
        if (best_slot < 0) {
          best_slot = s;
          best_hyp = h;
        } else if (highest) {
          if (s > best_slot || (s == best_slot && h > best_hyp)) {
            best_slot = s;
            best_hyp = h;
          }
        }
        // lowest: the scan order already visits (creation, hyp) ascending, so
        // the first hit wins.
      }
      if (!highest && best_slot >= 0) break;
    }
    return {best_slot, best_hyp};
  }

  void do_split(int slot, int hyp, int iter, double g_before, double err_before,
                TrainTrace& trace) {
    LeafState& parent = leaves_[static_cast<std::size_t>(slot)];
    const double chosen_gain = parent.wgain[static_cast<std::size_t>(hyp)];
    int c0 = tree_.split_leaf(parent.node, hyp);

    LeafState left, right;
    left.node = c0;
    right.node = c0 + 1;
    left.creation = static_cast<int>(leaves_.size());
    right.creation = left.creation + 1;
    const auto& flat = dist_.flat();
    for (auto i : parent.cells) {
      if (cfg_.hypotheses.eval(hyp, flat[static_cast<std::size_t>(i)].bits))
        right.cells.push_back(i);
      else
        left.cells.push_back(i);
    }
    fill_stats(left);
    fill_stats(right);
    if (left.w > 0.0) tree_.set_label(left.node, left.mu() > 0.5 ? 1 : 0);
    if (right.w > 0.0) tree_.set_label(right.node, right.mu() > 0.5 ? 1 : 0);
    compute_gains(left);
    compute_gains(right);

    parent.alive = false;
    parent.cells.clear();
    parent.cells.shrink_to_fit();
    parent.wgain.clear();
    int parent_creation = parent.creation;
    leaves_.push_back(std::move(left));
    leaves_.push_back(std::move(right));

    TraceRow row;
    row.iter = iter;
    row.leaf_id = parent_creation;
    row.hyp_id = hyp;
    row.weighted_gain = chosen_gain;
    row.g_before = g_before;
    row.err_before = err_before;
    row.g_after = objective();
    row.err_after = error();
    trace.rows.push_back(row);

    if (cfg_.observer) {
      SplitEvent ev;
      ev.iter = iter;
      ev.node = leaves_[static_cast<std::size_t>(slot)].node;
      ev.hyp = hyp;
      ev.child0 = c0;
      ev.child1 = c0 + 1;
      ev.leaves_after = tree_.leaf_count();
      ev.tree = &tree_;
      cfg_.observer(ev);
    }
  }

  double objective() const {
    double acc = 0.0;
    for (const auto& lf : leaves_) {
      if (!lf.alive || lf.w <= 0.0) continue;
      acc += (lf.w / total_w_) * cfg_.impurity(lf.mu());
    }
    return acc;
  }

  double error() const {
    double acc = 0.0;
    for (const auto& lf : leaves_) {
      if (!lf.alive || lf.w <= 0.0) continue;
      double m = lf.mu();
      acc += (lf.w / total_w_) * std::min(m, 1.0 - m);
    }
    return acc;
  }

  const LabeledDistribution& dist_;
  const TrainConfig& cfg_;
  DecisionTree tree_;
  std::mt19937_64 rng_;
  std::vector<LeafState> leaves_;
  double total_w_ = 0.0;
};

}  // namespace

std::pair<DecisionTree, TrainTrace> train(const LabeledDistribution& dist,
                                          const TrainConfig& cfg) {
  Trainer tr(dist, cfg);
  return tr.run();
}

double evaluate_error(const DecisionTree& tree, const HypothesisClass& hyps,
                      const LabeledDistribution& dist) {
  if (tree.dim() != dist.dim()) throw DimMismatch("evaluate_error: dim mismatch");
  double acc = 0.0;
  for (const auto& c : dist.flat()) {
    Label y = tree.eval(hyps, c.bits);
    acc += y ? (c.w - c.wpos) : c.wpos;
  }
  return acc / dist.total_weight();
}

std::vector<AuditRow> progress_audit(const LabeledDistribution& dist, const TrainConfig& cfg,
                                     double gamma, double eta, double threshold_constant) {
  if (!dist.explicit_mode()) throw Error("progress_audit: explicit mode only");
  if (gamma <= 0.0) throw OutOfRange("progress_audit: gamma must be positive");
  auto [tree, trace] = train(dist, cfg);
  (void)tree;
  const double kappa = cfg.impurity.kappa();
  std::vector<AuditRow> out;
  for (const auto& row : trace.rows) {
    double excess = row.err_before - threshold_constant * eta / gamma;
    if (excess <= 0.0) continue;
    AuditRow a;
    a.iter = row.iter;
    a.leaves = row.iter;  // size grows by one per iteration, starting from 1
    a.err = row.err_before;
    a.excess = excess;
    a.bound = (kappa / 2.0) * gamma * gamma * excess * excess / a.leaves;
    a.actual = row.weighted_gain;
    a.pass = a.actual >= a.bound - 1e-12;
    out.push_back(a);
  }
  return out;
}

std::string TrainTrace::to_csv() const {
  std::string out = "iter,leaf_id,hyp_id,weighted_gain,g_before,g_after,err_before,err_after\n";
  for (const auto& r : rows) {
    out += std::to_string(r.iter) + "," + std::to_string(r.leaf_id) + "," +
           std::to_string(r.hyp_id) + "," + fmt17(r.weighted_gain) + "," + fmt17(r.g_before) +
           "," + fmt17(r.g_after) + "," + fmt17(r.err_before) + "," + fmt17(r.err_after) + "\n";
  }
  return out;
}

TrainTrace TrainTrace::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("iter,", 0) != 0)
    throw ParseError("trace csv: missing header");
  TrainTrace t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TraceRow r;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    if (!(row >> r.iter >> r.leaf_id >> r.hyp_id >> r.weighted_gain >> r.g_before >>
          r.g_after >> r.err_before >> r.err_after))
      throw ParseError("trace csv: bad row");
    t.rows.push_back(r);
  }
  if (!t.rows.empty()) {
    t.final_g = t.rows.back().g_after;
    t.final_err = t.rows.back().err_after;
  }
  return t;
}

double sample_size_bound(double tau, std::int64_t t, std::int64_t class_size,
                         double confidence) {
  if (!(tau > 0.0 && tau <= 0.5)) throw OutOfRange("sample_size: tau outside (0, 1/2]");
  if (t < 1 || class_size < 1) throw OutOfRange("sample_size: t and |H| must be >= 1");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw OutOfRange("sample_size: confidence outside (0,1)");
  const double c = 8.0;
  double td = static_cast<double>(t);
  double hd = static_cast<double>(class_size);
  double delta = 1.0 - confidence;
  return c * td * td * hd * std::log(td * hd / delta) / (tau * tau);
}

std::int64_t sample_size_for(double tau, std::int64_t t, std::int64_t class_size,
                             double confidence) {
  return static_cast<std::int64_t>(std::ceil(sample_size_bound(tau, t, class_size, confidence)));
}

}  // namespace noisytd
