#include "noisytd/targets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace noisytd {

PointFn tribes(int w, int s) {
  if (w < 1 || s < 1 || w * s > kMaxExplicitDim)
    throw OutOfRange("tribes: need w,s >= 1 and w*s <= 24");
  return [w, s](BitPoint p) {
    if (p.dim < w * s) throw DimMismatch("tribes: point dim below w*s");
    for (int t = 0; t < s; ++t) {
      Word term_mask = ((Word(1) << w) - 1) << (t * w);
      if ((p.bits & term_mask) == term_mask) return true;
    }
    return false;
  };
}

double tribes_negative_rate(int w, int s) {
  if (w < 1 || s < 1) throw OutOfRange("tribes_negative_rate: need w,s >= 1");
  double q = 1.0 - std::ldexp(1.0, -w);
  double val = 1.0;
  for (int i = 0; i < s; ++i) val *= q;
  return val;
}

double tribes_signed_correlation(int w, int s) {
  return 2.0 / (std::ldexp(1.0, w) - 1.0) * tribes_negative_rate(w, s);
}

TribesParams tribes_params_for(double eps, int d) {
  if (!(eps > 0.0 && eps <= 1.0 / 3.0))
    throw InfeasibleParameters("tribes_params_for: eps outside (0, 1/3]");
  if (static_cast<double>(d) < std::log2(1.0 / eps))
    throw InfeasibleParameters("tribes_params_for: d below log2(1/eps)");

  auto largest_s = [eps](int w) {
    double q = 1.0 - std::ldexp(1.0, -w);
    double val = 1.0;
    int s = 0;
    while (val * q >= eps && s <= 1 << 26) {
      val *= q;
      ++s;
    }
    return s;
  };

  // s_w is nondecreasing in w, so k_w = w * s_w is strictly increasing and the
  // scan can stop at the first overshoot.
  TribesParams best;
  for (int w = 1; w <= d; ++w) {
    int s = largest_s(w);
    if (s < 1) break;
    if (static_cast<long long>(w) * s > d) break;
    best = TribesParams{w, s, w * s};
  }
  if (best.w == 0) throw InfeasibleParameters("tribes_params_for: no width fits d");
  return best;
}

DecisionTree read_once_dnf_tree(const std::vector<int>& widths, const std::vector<int>& coords,
                                int dim) {
  int total = std::accumulate(widths.begin(), widths.end(), 0);
  if (total != static_cast<int>(coords.size()))
    throw OutOfRange("read_once_dnf_tree: coords size != sum of widths");
  for (int c : coords)
    if (c < 0 || c >= dim) throw OutOfRange("read_once_dnf_tree: coordinate out of range");
  long long leaves = 1;
  for (auto it = widths.rbegin(); it != widths.rend(); ++it) {
    leaves = 1 + *it * leaves;
    if (leaves > (1 << 20)) throw OutOfRange("read_once_dnf_tree: expansion too large");
  }

  DecisionTree tree(dim);
  // grow(node, term, var): queries coords[offset(term)+var]; the false branch
  // falls through to the next term, the final true branch accepts.
  std::vector<int> offsets(widths.size(), 0);
  for (std::size_t t = 1; t < widths.size(); ++t)
    offsets[t] = offsets[t - 1] + widths[t - 1];

  std::function<void(int, std::size_t)> grow = [&](int node, std::size_t term) {
    if (term == widths.size()) {
      tree.set_label(node, 0);
      return;
    }
    int w = widths[term];
    int cur = node;
    for (int v = 0; v < w; ++v) {
      int c0 = tree.split_leaf(cur, coords[static_cast<std::size_t>(offsets[term] + v)]);
      grow(c0, term + 1);  // literal false: try the next term
      if (v + 1 == w) {
        tree.set_label(c0 + 1, 1);  // whole term satisfied
      } else {
        cur = c0 + 1;
      }
    }
  };
  grow(tree.root(), 0);
  return tree;
}

MonotoneGenerator monotone_generator_from_id(const std::string& id) {
  if (id == "read-once-dnf") return MonotoneGenerator::ReadOnceDnf;
  if (id == "rejection-sampled-tree") return MonotoneGenerator::RejectionSampledTree;
  throw ConfigError("unknown monotone generator: " + id);
}

namespace {

MonotoneTarget dnf_target(int d, int s, std::mt19937_64& rng) {
  // Leaf count of a term list is built back to front: L = 1 + w * L_rest.
  for (int attempt = 0; attempt < 4096; ++attempt) {
    std::vector<int> widths;
    int leaves = 1;
    int vars = 0;
    std::uniform_int_distribution<int> wdist(1, 3);
    while (true) {
      int w = wdist(rng);
      if (1 + w * leaves > s || vars + w > d) break;
      widths.insert(widths.begin(), w);
      leaves = 1 + w * leaves;
      vars += w;
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) break;
    }
    if (widths.empty()) continue;
    std::vector<int> coords(static_cast<std::size_t>(d));
    std::iota(coords.begin(), coords.end(), 0);
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(static_cast<std::size_t>(vars));

    MonotoneTarget target;
    target.dim = d;
    target.tree = read_once_dnf_tree(widths, coords, d);
    target.claimed_size = leaves;
    auto hyps = HypothesisClass::projections(d);
    target.table = truth_table(tree_as_function(target.tree, hyps), d);
    bool constant = std::all_of(target.table.begin(), target.table.end(),
                                [&](std::uint8_t v) { return v == target.table[0]; });
    if (constant) continue;
    return target;
  }
  throw GenerationFailed("random_monotone_target: dnf generation budget exhausted");
}

MonotoneTarget rejection_target(int d, int s, std::mt19937_64& rng) {
  auto hyps = HypothesisClass::projections(d);
  for (int attempt = 0; attempt < 20000; ++attempt) {
    DecisionTree tree(d);
    struct Leaf {
      int node;
      Word path_mask;
    };
    std::vector<Leaf> leaves{{tree.root(), 0}};
    bool stuck = false;
    while (tree.leaf_count() < s) {
      std::vector<std::size_t> splittable;
      for (std::size_t i = 0; i < leaves.size(); ++i)
        if (static_cast<int>(std::popcount(leaves[i].path_mask)) < d) splittable.push_back(i);
      if (splittable.empty()) {
        stuck = true;
        break;
      }
      std::size_t pick =
          splittable[std::uniform_int_distribution<std::size_t>(0, splittable.size() - 1)(rng)];
      Leaf lf = leaves[pick];
      int coord;
      do {
        coord = std::uniform_int_distribution<int>(0, d - 1)(rng);
      } while ((lf.path_mask >> coord) & 1u);
      int c0 = tree.split_leaf(lf.node, coord);
      leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(pick));
      Word mask = lf.path_mask | (Word(1) << coord);
      leaves.push_back({c0, mask});
      leaves.push_back({c0 + 1, mask});
    }
    if (stuck) continue;
    for (const auto& lf : leaves)
      tree.set_label(lf.node, std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : 0);

    auto table = truth_table(tree_as_function(tree, hyps), d);
    bool constant = std::all_of(table.begin(), table.end(),
                                [&](std::uint8_t v) { return v == table[0]; });
    if (constant || !is_monotone(table, d)) continue;

    MonotoneTarget target;
    target.dim = d;
    target.claimed_size = tree.leaf_count();
    target.tree = std::move(tree);
    target.table = std::move(table);
    return target;
  }
  throw GenerationFailed("random_monotone_target: rejection budget exhausted");
}

}  // namespace

MonotoneTarget random_monotone_target(int d, int s, std::uint64_t seed, MonotoneGenerator gen) {
  if (d < 1 || d > 16) throw OutOfRange("random_monotone_target: d must be in [1,16]");
  if (s < 2) throw OutOfRange("random_monotone_target: s must be >= 2");
  std::mt19937_64 rng(seed);
  MonotoneTarget target = gen == MonotoneGenerator::ReadOnceDnf ? dnf_target(d, s, rng)
                                                                : rejection_target(d, s, rng);
  if (!is_monotone(target.table, d))
    throw InvariantFailure("random_monotone_target: emitted function fails monotone check");
  if (target.claimed_size > s)
    throw InvariantFailure("random_monotone_target: representation exceeds size bound");
  return target;
}

LabeledDistribution distribution_from_table(const ProductDistribution& px,
                                            const std::vector<std::uint8_t>& table) {
  const int d = px.dim();
  if (table.size() != (std::size_t(1) << d))
    throw DimMismatch("distribution_from_table: table size != 2^d");
  std::vector<ExplicitRow> rows;
  rows.reserve(table.size());
  for (Word x = 0; x < table.size(); ++x)
    rows.push_back({x, px.mass(x), table[x] ? 1.0 : 0.0});
  return LabeledDistribution::make_explicit(d, std::move(rows));
}

LabeledDistribution distribution_from_function(const ProductDistribution& px, const PointFn& f) {
  return distribution_from_table(px, truth_table(f, px.dim()));
}

}  // namespace noisytd
