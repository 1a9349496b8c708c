#pragma once

#include <cstdint>
#include <vector>

#include "noisytd/analysis.hpp"
#include "noisytd/tree.hpp"

namespace noisytd {

struct TribesSpec {
  int w = 1;
  int s = 1;
  int k() const { return w * s; }
};

// Read-once DNF of s disjoint width-w AND terms over the first w*s
// coordinates (-1 is logical false). The returned predicate accepts points of
// any dim >= w*s and reads the first w*s coordinates.
PointFn tribes(int w, int s);

double tribes_negative_rate(int w, int s);       // Pr[Tribes = -1] = (1 - 2^-w)^s
double tribes_signed_correlation(int w, int s);  // E[x_i Tribes] = 2/(2^w - 1) * Pr[Tribes = -1]

struct TribesParams {
  int w = 0;
  int s = 0;
  int k = 0;
};

// s_w = largest s with (1-2^-w)^s >= eps; w* = largest w with w*s_w <= d.
// Requires eps in (0, 1/3] and d >= log2(1/eps).
TribesParams tribes_params_for(double eps, int d);

// Decision tree for a read-once monotone DNF: term coordinates are queried in
// order, a failed literal falls through to the next term's subtree. widths[i]
// gives the i-th term's width; coords lists the term variables consecutively.
DecisionTree read_once_dnf_tree(const std::vector<int>& widths, const std::vector<int>& coords,
                                int dim);

enum class MonotoneGenerator { ReadOnceDnf, RejectionSampledTree };

MonotoneGenerator monotone_generator_from_id(const std::string& id);

struct MonotoneTarget {
  int dim = 0;
  int claimed_size = 0;  // leaf count of the tree representation
  DecisionTree tree;     // over HypothesisClass::projections(dim)
  std::vector<std::uint8_t> table;

  PointFn fn() const {
    auto t = table;
    return [t](BitPoint p) { return t[p.bits] != 0; };
  }
};

// Nonconstant monotone target with a decision-tree representation of at most
// s leaves; the emitted function is brute-force verified monotone (d <= 16).
MonotoneTarget random_monotone_target(int d, int s, std::uint64_t seed, MonotoneGenerator gen);

// Explicit joint with the given product marginal and deterministic labels.
LabeledDistribution distribution_from_function(const ProductDistribution& px, const PointFn& f);
LabeledDistribution distribution_from_table(const ProductDistribution& px,
                                            const std::vector<std::uint8_t>& table);

}  // namespace noisytd
