#pragma once

#include <functional>
#include <string>
#include <vector>

#include "noisytd/cube.hpp"
#include "noisytd/distribution.hpp"
#include "noisytd/hypothesis.hpp"

namespace noisytd {

struct TreeNode {
  int hyp = -1;  // index into the hypothesis class; -1 for leaves
  int child0 = -1;
  int child1 = -1;
  Label label = 0;

  bool is_leaf() const { return hyp < 0; }
};

// Binary decision tree over a hypothesis class. Nodes are stored by index;
// evaluation follows the unique root-to-leaf path (h=0 -> child0).
class DecisionTree {
 public:
  explicit DecisionTree(int dim) : dim_(dim) { nodes_.push_back(TreeNode{}); }

  int dim() const { return dim_; }
  int root() const { return 0; }
  const TreeNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int leaf_count() const;
  int max_depth() const;

  // Replaces leaf `node` with an internal node splitting on `hyp`; returns
  // the index of child0 (child1 is child0+1).
  int split_leaf(int node, int hyp);
  void set_label(int node, Label y) { nodes_[static_cast<std::size_t>(node)].label = y; }

  Label eval(const HypothesisClass& hyps, Word bits) const;
  Label eval(const HypothesisClass& hyps, BitPoint p) const;
  int leaf_of(const HypothesisClass& hyps, Word bits) const;
  int depth_of(int node) const;

  // Preorder text form: one "node split=<h>" or "leaf label=<0|1>" per line.
  std::string to_text() const;
  static DecisionTree from_text(const std::string& text, int dim);

 private:
  int dim_;
  std::vector<TreeNode> nodes_;
};

std::function<bool(BitPoint)> tree_as_function(const DecisionTree& tree,
                                               const HypothesisClass& hyps);

struct TreeStats {
  int leaves = 0;
  int max_depth = 0;
};

TreeStats tree_size_and_depth(const DecisionTree& tree);
double expected_depth(const DecisionTree& tree, const HypothesisClass& hyps,
                      const LabeledDistribution& dist);

}  // namespace noisytd
