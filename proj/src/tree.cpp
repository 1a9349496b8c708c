#include "noisytd/tree.hpp"

#include <sstream>

namespace noisytd {

int DecisionTree::leaf_count() const {
  int n = 0;
  for (const auto& nd : nodes_) n += nd.is_leaf();
  return n;
}

int DecisionTree::split_leaf(int node, int hyp) {
  auto& nd = nodes_[static_cast<std::size_t>(node)];
  if (!nd.is_leaf()) throw Error("split_leaf: node is not a leaf");
  if (hyp < 0) throw OutOfRange("split_leaf: bad hypothesis index");
  int c0 = static_cast<int>(nodes_.size());
  Label inherited = nd.label;
  nd.hyp = hyp;
  nd.child0 = c0;
  nd.child1 = c0 + 1;
  nodes_.push_back(TreeNode{-1, -1, -1, inherited});
  nodes_.push_back(TreeNode{-1, -1, -1, inherited});
  return c0;
}

Label DecisionTree::eval(const HypothesisClass& hyps, Word bits) const {
  return nodes_[static_cast<std::size_t>(leaf_of(hyps, bits))].label;
}

Label DecisionTree::eval(const HypothesisClass& hyps, BitPoint p) const {
  if (p.dim != dim_) throw DimMismatch("eval: point dim != tree dim");
  return eval(hyps, p.bits);
}

int DecisionTree::leaf_of(const HypothesisClass& hyps, Word bits) const {
  int i = 0;
  while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
    const auto& nd = nodes_[static_cast<std::size_t>(i)];
    i = hyps.eval(nd.hyp, bits) ? nd.child1 : nd.child0;
  }
  return i;
}

int DecisionTree::depth_of(int node) const {
  // Nodes only reference forward, so walk from the root.
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    if (i == node) return d;
    const auto& nd = nodes_[static_cast<std::size_t>(i)];
    if (!nd.is_leaf()) {
      stack.push_back({nd.child0, d + 1});
      stack.push_back({nd.child1, d + 1});
    }
  }
  throw OutOfRange("depth_of: node not reachable");
}

int DecisionTree::max_depth() const {
  int best = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    const auto& nd = nodes_[static_cast<std::size_t>(i)];
    if (nd.is_leaf()) {
      best = std::max(best, d);
    } else {
      stack.push_back({nd.child0, d + 1});
      stack.push_back({nd.child1, d + 1});
    }
  }
  return best;
}

std::string DecisionTree::to_text() const {
  std::string out;
  // Preorder, child0 before child1.
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    const auto& nd = nodes_[static_cast<std::size_t>(i)];
    if (nd.is_leaf()) {
      out += "leaf label=" + std::to_string(int(nd.label)) + "\n";
    } else {
      out += "node split=" + std::to_string(nd.hyp) + "\n";
      stack.push_back(nd.child1);
      stack.push_back(nd.child0);
    }
  }
  return out;
}

DecisionTree DecisionTree::from_text(const std::string& text, int dim) {
  std::istringstream in(text);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  if (lines.empty()) throw ParseError("tree text: empty");

  DecisionTree t(dim);
  t.nodes_.clear();
  std::size_t pos = 0;
  // Recursive descent over the preorder list.
  std::function<int()> build = [&]() -> int {
    if (pos >= lines.size()) throw ParseError("tree text: truncated");
    const std::string& l = lines[pos++];
    int idx = static_cast<int>(t.nodes_.size());
    t.nodes_.push_back(TreeNode{});
    if (l.rfind("leaf label=", 0) == 0) {
      int v = std::stoi(l.substr(11));
      if (v != 0 && v != 1) throw ParseError("tree text: bad label");
      t.nodes_[static_cast<std::size_t>(idx)].label = static_cast<Label>(v);
    } else if (l.rfind("node split=", 0) == 0) {
      int h = std::stoi(l.substr(11));
      int c0 = build();
      int c1 = build();
      t.nodes_[static_cast<std::size_t>(idx)].hyp = h;
      t.nodes_[static_cast<std::size_t>(idx)].child0 = c0;
      t.nodes_[static_cast<std::size_t>(idx)].child1 = c1;
    } else {
      throw ParseError("tree text: bad line: " + l);
    }
    return idx;
  };
  build();
  if (pos != lines.size()) throw ParseError("tree text: trailing lines");
  return t;
}

std::function<bool(BitPoint)> tree_as_function(const DecisionTree& tree,
                                               const HypothesisClass& hyps) {
  return [tree, hyps](BitPoint p) { return tree.eval(hyps, p) != 0; };
}

TreeStats tree_size_and_depth(const DecisionTree& tree) {
  return TreeStats{tree.leaf_count(), tree.max_depth()};
}

double expected_depth(const DecisionTree& tree, const HypothesisClass& hyps,
                      const LabeledDistribution& dist) {
  if (dist.dim() != tree.dim()) throw DimMismatch("expected_depth: dim mismatch");
  double acc = 0.0;
  for (const auto& c : dist.flat()) {
    int i = 0, d = 0;
    while (!tree.node(i).is_leaf()) {
      const auto& nd = tree.node(i);
      i = hyps.eval(nd.hyp, c.bits) ? nd.child1 : nd.child0;
      ++d;
    }
    acc += c.w * d;
  }
  return acc / dist.total_weight();
}

}  // namespace noisytd
