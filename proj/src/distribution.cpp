#include "noisytd/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace noisytd {

namespace {

constexpr double kMassTol = 1e-12;

}  // namespace

LabeledDistribution LabeledDistribution::make_explicit(int dim, std::vector<ExplicitRow> rows) {
  if (dim < 1 || dim > kMaxExplicitDim)
    throw OutOfRange("make_explicit: dim must be in [1, 24]");
  double sum = 0.0;
  for (const auto& r : rows) {
    if ((r.bits >> dim) != 0) throw DimMismatch("make_explicit: point outside {-1,+1}^dim");
    if (r.mass < 0.0 || !std::isfinite(r.mass)) throw NonNormalized("make_explicit: negative mass");
    if (r.pos_rate < 0.0 || r.pos_rate > 1.0) throw OutOfRange("make_explicit: positive rate outside [0,1]");
    sum += r.mass;
  }
  if (std::fabs(sum - 1.0) > kMassTol)
    throw NonNormalized("make_explicit: masses sum to " + fmt17(sum));
  std::sort(rows.begin(), rows.end(),
            [](const ExplicitRow& a, const ExplicitRow& b) { return a.bits < b.bits; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].bits == rows[i - 1].bits) throw DuplicatePoint("make_explicit: duplicate point");

  LabeledDistribution d;
  d.mode_ = Mode::Explicit;
  d.dim_ = dim;
  d.rows_ = std::move(rows);
  d.flat_.reserve(d.rows_.size());
  d.cdf_.reserve(d.rows_.size());
  double acc = 0.0;
  for (const auto& r : d.rows_) {
    d.flat_.push_back({r.bits, r.mass, r.mass * r.pos_rate});
    acc += r.mass;
    d.cdf_.push_back(acc);
  }
  d.total_w_ = acc;
  return d;
}

LabeledDistribution LabeledDistribution::from_samples(int dim, std::vector<SampleRecord> records) {
  if (dim < 1 || dim > kMaxEmpiricalDim)
    throw OutOfRange("from_samples: dim must be in [1, 30]");
  if (records.empty()) throw OutOfRange("from_samples: empty sample");
  for (const auto& r : records) {
    if ((r.bits >> dim) != 0) throw DimMismatch("from_samples: point outside {-1,+1}^dim");
    if (r.y > 1) throw OutOfRange("from_samples: label not in {0,1}");
  }

  LabeledDistribution d;
  d.mode_ = Mode::Empirical;
  d.dim_ = dim;
  d.records_ = std::move(records);

  // Aggregate identical points: plain frequencies, no smoothing.
  std::vector<SampleRecord> sorted = d.records_;
  std::sort(sorted.begin(), sorted.end(), [](const SampleRecord& a, const SampleRecord& b) {
    return a.bits < b.bits;
  });
  const double unit = 1.0 / static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    std::size_t pos = 0;
    while (j < sorted.size() && sorted[j].bits == sorted[i].bits) {
      pos += sorted[j].y;
      ++j;
    }
    d.flat_.push_back({sorted[i].bits, static_cast<double>(j - i) * unit,
                       static_cast<double>(pos) * unit});
    i = j;
  }
  double acc = 0.0;
  for (const auto& c : d.flat_) acc += c.w;
  d.total_w_ = acc;
  return d;
}

const std::vector<ExplicitRow>& LabeledDistribution::rows() const {
  if (mode_ != Mode::Explicit) throw Error("rows(): not an explicit distribution");
  return rows_;
}

const std::vector<SampleRecord>& LabeledDistribution::records() const {
  if (mode_ != Mode::Empirical) throw Error("records(): not an empirical distribution");
  return records_;
}

Moments LabeledDistribution::moments() const {
  double w = 0.0, wpos = 0.0;
  for (const auto& c : flat_) {
    w += c.w;
    wpos += c.wpos;
  }
  if (w <= 0.0) throw ZeroWeight("moments: zero total weight");
  Moments m;
  m.weight = w;
  m.mu = wpos / w;
  m.var = m.mu * (1.0 - m.mu);
  return m;
}

std::vector<SampleRecord> LabeledDistribution::sample(std::size_t n, std::mt19937_64& rng) const {
  if (mode_ != Mode::Explicit) throw Error("sample(): explicit mode only");
  std::vector<SampleRecord> out;
  out.reserve(n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double u = unif(rng) * total_w_;
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t idx = std::min<std::size_t>(
        static_cast<std::size_t>(it - cdf_.begin()), rows_.size() - 1);
    const auto& r = rows_[idx];
    Label y = unif(rng) < r.pos_rate ? 1 : 0;
    out.push_back({r.bits, y});
  }
  return out;
}

std::string LabeledDistribution::to_text() const {
  if (mode_ != Mode::Explicit) throw Error("to_text(): explicit mode only");
  std::string out = "dim=" + std::to_string(dim_) + "\n";
  for (const auto& r : rows_) {
    if (r.mass == 0.0) continue;
    out += "point(" + bits_to_string(r.bits, dim_) + ") " + fmt17(r.mass) + " " +
           fmt17(r.pos_rate) + "\n";
  }
  return out;
}

LabeledDistribution LabeledDistribution::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("dim=", 0) != 0)
    throw ParseError("distribution text: missing dim= header");
  int dim = std::stoi(line.substr(4));
  std::vector<ExplicitRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("point(", 0) != 0) throw ParseError("distribution text: bad row: " + line);
    auto close = line.find(')');
    if (close == std::string::npos) throw ParseError("distribution text: missing ')'");
    ExplicitRow r;
    r.bits = bits_from_string(line.substr(6, close - 6), dim);
    std::istringstream rest(line.substr(close + 1));
    if (!(rest >> r.mass >> r.pos_rate)) throw ParseError("distribution text: bad numbers");
    rows.push_back(r);
  }
  return make_explicit(dim, std::move(rows));
}

LabeledDistribution make_explicit(int dim, std::vector<ExplicitRow> rows) {
  return LabeledDistribution::make_explicit(dim, std::move(rows));
}

ConditionedView::ConditionedView(const LabeledDistribution& base, const HypothesisClass& hyps,
                                 std::vector<PathConstraint> path)
    : base_(&base), hyps_(&hyps), path_(std::move(path)) {
  if (!hyps.empty() && hyps.dim() != base.dim())
    throw DimMismatch("condition: hypothesis class dim != distribution dim");
  for (const auto& c : path_)
    if (c.hyp < 0 || c.hyp >= static_cast<int>(hyps.size()))
      throw OutOfRange("condition: hypothesis index out of range");
  const auto& flat = base.flat();
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(flat.size()); ++i) {
    bool ok = true;
    for (const auto& c : path_) {
      if (hyps.eval(c.hyp, flat[static_cast<std::size_t>(i)].bits) != (c.branch != 0)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    cells_.push_back(i);
    w_ += flat[static_cast<std::size_t>(i)].w;
    wpos_ += flat[static_cast<std::size_t>(i)].wpos;
  }
}

Moments ConditionedView::moments() const {
  if (degenerate()) throw ZeroWeight("moments: degenerate view");
  Moments m;
  m.weight = w_;
  m.mu = wpos_ / w_;
  m.var = m.mu * (1.0 - m.mu);
  return m;
}

ConditionedView ConditionedView::refined(PathConstraint c) const {
  auto path = path_;
  path.push_back(c);
  return ConditionedView(*base_, *hyps_, std::move(path));
}

ConditionedView condition(const LabeledDistribution& dist, const HypothesisClass& hyps,
                          std::vector<PathConstraint> path) {
  return ConditionedView(dist, hyps, std::move(path));
}

}  // namespace noisytd
