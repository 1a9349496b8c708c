#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "noisytd/cube.hpp"

namespace noisytd {

// A splitting predicate h : {-1,+1}^d -> {0,1}. Coordinate projections
// h_i(x) = 1[x_i = +1] get a fast path (coord >= 0); anything else evaluates
// through fn. Evaluation must be pure; index order inside a class is stable
// and defines tie-breaking.
struct Hypothesis {
  std::string name;
  int coord = -1;
  std::function<bool(BitPoint)> fn;

  bool eval(Word bits, int dim) const {
    if (coord >= 0) return (bits >> coord) & 1u;
    return fn(BitPoint(bits, dim));
  }
};

class HypothesisClass {
 public:
  HypothesisClass() = default;
  explicit HypothesisClass(int dim) : dim_(dim) {}

  static HypothesisClass projections(int dim) {
    HypothesisClass hc(dim);
    for (int i = 0; i < dim; ++i) {
      Hypothesis h;
      h.name = "x" + std::to_string(i + 1);
      h.coord = i;
      hc.hyps_.push_back(std::move(h));
    }
    return hc;
  }

  void add(std::string name, std::function<bool(BitPoint)> fn) {
    Hypothesis h;
    h.name = std::move(name);
    h.fn = std::move(fn);
    hyps_.push_back(std::move(h));
  }

  int dim() const { return dim_; }
  std::size_t size() const { return hyps_.size(); }
  bool empty() const { return hyps_.empty(); }
  const Hypothesis& operator[](std::size_t i) const { return hyps_[i]; }

  bool eval(int idx, Word bits) const {
    return hyps_[static_cast<std::size_t>(idx)].eval(bits, dim_);
  }

  bool all_projections() const {
    for (const auto& h : hyps_)
      if (h.coord < 0) return false;
    return !hyps_.empty();
  }

 private:
  int dim_ = 0;
  std::vector<Hypothesis> hyps_;
};

// A path constraint h(x) = branch, used both by tree conditioning and by the
// induced-distribution enumeration.
struct PathConstraint {
  int hyp = 0;
  std::uint8_t branch = 0;
};

}  // namespace noisytd
