#include "noisytd/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "noisytd/parallel.hpp"

namespace noisytd {

double ProductDistribution::mass(Word bits) const {
  double m = 1.0;
  for (int i = 0; i < dim(); ++i)
    m *= ((bits >> i) & 1u) ? p[static_cast<std::size_t>(i)]
                            : 1.0 - p[static_cast<std::size_t>(i)];
  return m;
}

ProductDistribution ProductDistribution::uniform(int d) {
  if (d < 1 || d > kMaxExplicitDim) throw OutOfRange("uniform: dim out of range");
  ProductDistribution px;
  px.p.assign(static_cast<std::size_t>(d), 0.5);
  return px;
}

ProductDistribution product_distribution(std::vector<double> p) {
  if (p.empty() || static_cast<int>(p.size()) > kMaxExplicitDim)
    throw OutOfRange("product_distribution: dim out of range");
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0)) throw OutOfRange("product_distribution: p outside [0,1]");
  ProductDistribution px;
  px.p = std::move(p);
  return px;
}

std::vector<std::uint8_t> truth_table(const PointFn& f, int dim) {
  if (dim < 1 || dim > kMaxExplicitDim) throw OutOfRange("truth_table: dim out of range");
  std::vector<std::uint8_t> t(std::size_t(1) << dim);
  for (Word x = 0; x < t.size(); ++x) t[x] = f(BitPoint(x, dim)) ? 1 : 0;
  return t;
}

bool is_monotone(const std::vector<std::uint8_t>& table, int dim) {
  // Single-bit-increase edges cover the partial order by transitivity.
  const Word n = Word(1) << dim;
  for (Word x = 0; x < n; ++x)
    for (int i = 0; i < dim; ++i)
      if (!((x >> i) & 1u) && table[x] > table[x | (Word(1) << i)]) return false;
  return true;
}

double influence(const std::vector<std::uint8_t>& table, const ProductDistribution& px, int i) {
  const int d = px.dim();
  if (i < 0 || i >= d) throw OutOfRange("influence: coordinate out of range");
  if ((std::size_t(1) << d) != table.size()) throw DimMismatch("influence: table size != 2^d");
  double acc = 0.0;
  const double pi = px.p[static_cast<std::size_t>(i)];
  for (Word x = 0; x < table.size(); ++x) {
    Word y = x ^ (Word(1) << i);
    if (table[x] == table[y]) continue;
    // Rerandomizing coordinate i changes f only if the fresh bit lands on the
    // other side.
    acc += px.mass(x) * (((x >> i) & 1u) ? (1.0 - pi) : pi);
  }
  return 2.0 * acc;
}

double influence(const PointFn& f, const ProductDistribution& px, int i) {
  return influence(truth_table(f, px.dim()), px, i);
}

double expectation(const LabeledDistribution& dist, const JointFn& f) {
  double acc = 0.0;
  const int d = dist.dim();
  for (const auto& c : dist.flat()) {
    BitPoint p(c.bits, d);
    acc += c.wpos * f(p, 1) + (c.w - c.wpos) * f(p, 0);
  }
  return acc / dist.total_weight();
}

double variance(const LabeledDistribution& dist, const JointFn& f) {
  double e = expectation(dist, f);
  double e2 = expectation(dist, [&](BitPoint p, Label y) {
    double v = f(p, y);
    return v * v;
  });
  return e2 - e * e;
}

double covariance(const LabeledDistribution& dist, const JointFn& f, const JointFn& g) {
  double ef = expectation(dist, f);
  double eg = expectation(dist, g);
  double efg = expectation(dist, [&](BitPoint p, Label y) { return f(p, y) * g(p, y); });
  return efg - ef * eg;
}

double expectation(const ProductDistribution& px, const std::function<double(BitPoint)>& f) {
  const int d = px.dim();
  double acc = 0.0;
  for (Word x = 0; x < (Word(1) << d); ++x) acc += px.mass(x) * f(BitPoint(x, d));
  return acc;
}

double covariance(const ProductDistribution& px, const std::function<double(BitPoint)>& f,
                  const std::function<double(BitPoint)>& g) {
  double ef = expectation(px, f);
  double eg = expectation(px, g);
  double efg = expectation(px, [&](BitPoint p) { return f(p) * g(p); });
  return efg - ef * eg;
}

std::vector<InfCovRow> inf_cov_identity_check(const PointFn& f, const ProductDistribution& px) {
  const int d = px.dim();
  auto table = truth_table(f, d);
  if (!is_monotone(table, d)) throw NotMonotone("inf_cov_identity_check: f is not monotone");
  // Signed view and per-coordinate accumulators in one sweep.
  std::vector<double> exi(static_cast<std::size_t>(d), 0.0);
  std::vector<double> exify(static_cast<std::size_t>(d), 0.0);
  double ef = 0.0;
  for (Word x = 0; x < table.size(); ++x) {
    double m = px.mass(x);
    double fy = table[x] ? 1.0 : -1.0;
    ef += m * fy;
    for (int i = 0; i < d; ++i) {
      double xi = ((x >> i) & 1u) ? 1.0 : -1.0;
      exi[static_cast<std::size_t>(i)] += m * xi;
      exify[static_cast<std::size_t>(i)] += m * xi * fy;
    }
  }
  std::vector<InfCovRow> rows;
  rows.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    InfCovRow r;
    r.coord = i;
    r.influence = influence(table, px, i);
    r.covariance = exify[static_cast<std::size_t>(i)] - exi[static_cast<std::size_t>(i)] * ef;
    rows.push_back(r);
  }
  return rows;
}

double tv_distance(const LabeledDistribution& a, const LabeledDistribution& b) {
  if (a.dim() != b.dim()) throw DimMismatch("tv_distance: dim mismatch");
  if (!a.explicit_mode() || !b.explicit_mode())
    throw Error("tv_distance: explicit mode only");
  const auto& ra = a.rows();
  const auto& rb = b.rows();
  double l1 = 0.0;
  std::size_t i = 0, j = 0;
  auto joint_gap = [&](double ma, double qa, double mb, double qb) {
    l1 += std::fabs(ma * qa - mb * qb) + std::fabs(ma * (1.0 - qa) - mb * (1.0 - qb));
  };
  while (i < ra.size() || j < rb.size()) {
    if (j >= rb.size() || (i < ra.size() && ra[i].bits < rb[j].bits)) {
      joint_gap(ra[i].mass, ra[i].pos_rate, 0.0, 0.0);
      ++i;
    } else if (i >= ra.size() || rb[j].bits < ra[i].bits) {
      joint_gap(0.0, 0.0, rb[j].mass, rb[j].pos_rate);
      ++j;
    } else {
      joint_gap(ra[i].mass, ra[i].pos_rate, rb[j].mass, rb[j].pos_rate);
      ++i;
      ++j;
    }
  }
  return 0.5 * l1;
}

double tv_distance_marginal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimMismatch("tv_distance_marginal: size mismatch");
  double l1 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) l1 += std::fabs(a[i] - b[i]);
  return 0.5 * l1;
}

TvMomentReport tv_moment_bounds_check(const LabeledDistribution& a,
                                      const LabeledDistribution& b, const JointFn& f,
                                      const JointFn& g) {
  auto checked = [](const JointFn& fn) {
    return [&fn](BitPoint p, Label y) {
      double v = fn(p, y);
      if (v < -1e-12 || v > 1.0 + 1e-12)
        throw OutOfRange("tv_moment_bounds_check: function value outside [0,1]");
      return v;
    };
  };
  auto fc = checked(f);
  auto gc = checked(g);
  TvMomentReport r;
  r.eta = tv_distance(a, b);
  r.de = std::fabs(expectation(a, fc) - expectation(b, fc));
  r.dvar = std::fabs(variance(a, fc) - variance(b, fc));
  r.dcov = std::fabs(covariance(a, fc, gc) - covariance(b, fc, gc));
  const double tol = 1e-12;
  r.pass_e = r.de <= r.eta + tol;
  r.pass_var = r.dvar <= r.eta + tol;
  r.pass_cov = r.dcov <= 2.0 * r.eta + tol;
  return r;
}

FiniteJoint FiniteJoint::zeros(int nl, int nx) {
  FiniteJoint j;
  j.nl = nl;
  j.nx = nx;
  j.mass.assign(static_cast<std::size_t>(nl) * nx, 0.0);
  return j;
}

LeafTvReport leaf_tv_check(const FiniteJoint& a, const FiniteJoint& b) {
  if (a.nl != b.nl || a.nx != b.nx) throw DimMismatch("leaf_tv_check: shape mismatch");
  double total_a = 0.0, total_b = 0.0;
  for (double m : a.mass) total_a += m;
  for (double m : b.mass) total_b += m;
  if (total_a <= 0.0 || total_b <= 0.0) throw ZeroWeight("leaf_tv_check: empty joint");

  double lhs = 0.0;
  for (int l = 0; l < a.nl; ++l) {
    double wa = 0.0, wb = 0.0;
    for (int x = 0; x < a.nx; ++x) {
      wa += a.at(l, x);
      wb += b.at(l, x);
    }
    double pa = wa / total_a;
    if (pa <= 0.0) continue;  // leaves outside a's marginal support contribute 0
    double d;
    if (wb <= 0.0) {
      d = 1.0;  // conditional undefined under b; distance counts as maximal
    } else {
      double l1 = 0.0;
      for (int x = 0; x < a.nx; ++x)
        l1 += std::fabs(a.at(l, x) / wa - b.at(l, x) / wb);
      d = 0.5 * l1;
    }
    lhs += pa * d;
  }

  double l1 = 0.0;
  for (std::size_t i = 0; i < a.mass.size(); ++i)
    l1 += std::fabs(a.mass[i] / total_a - b.mass[i] / total_b);
  LeafTvReport r;
  r.lhs = lhs;
  r.rhs = 2.0 * 0.5 * l1;
  r.pass = r.lhs <= r.rhs + 1e-12;
  return r;
}

namespace {

// Restriction sweep for projection classes: one mixed-radix counter over
// {-1,+1,star}^k in lexicographic symbol order (-1 < +1 < star), coordinate
// order following the hypothesis list.
struct SweepBest {
  double gamma = 0.0;
  long long counter = -1;
  int hyp = -1;
  bool found = false;
};

struct SweepTotals {
  long long considered = 0;
  long long degenerate = 0;
};

}  // namespace

AdvantageReport weak_learning_advantage(const LabeledDistribution& dist,
                                        const HypothesisClass& hyps, const WlaOptions& opts) {
  if (!dist.explicit_mode()) throw Error("weak_learning_advantage: explicit mode only");
  if (hyps.empty()) throw EmptyHypothesisClass("weak_learning_advantage: empty class");
  if (hyps.dim() != dist.dim()) throw DimMismatch("weak_learning_advantage: dim mismatch");

  const int d = dist.dim();
  const int nh = static_cast<int>(hyps.size());

  if (opts.restrictions_only && hyps.all_projections()) {
    std::vector<int> coords(static_cast<std::size_t>(nh));
    for (int h = 0; h < nh; ++h) coords[static_cast<std::size_t>(h)] = hyps[static_cast<std::size_t>(h)].coord;

    long long total = 1;
    for (int h = 0; h < nh; ++h) {
      total *= 3;
      if (total > opts.max_views)
        throw ExplosionGuard("weak_learning_advantage: 3^|H| exceeds view cap");
    }

    // Dense tables over the cube.
    std::vector<double> w(std::size_t(1) << d, 0.0), wy(std::size_t(1) << d, 0.0);
    for (const auto& c : dist.flat()) {
      w[c.bits] += c.w;
      wy[c.bits] += c.wpos;
    }

    // Free cube coordinates = everything not fixed by the restriction; the
    // coordinates in `coords` toggle between fixed and free per digit.
    const long long chunk = 4096;
    const std::size_t nchunks = static_cast<std::size_t>((total + chunk - 1) / chunk);
    std::vector<SweepBest> best(nchunks);
    std::vector<SweepTotals> totals(nchunks);
    std::vector<std::vector<RestrictionStat>> tables(opts.keep_table ? nchunks : 0);

    parallel_tasks(nchunks, [&](std::size_t ci) {
      long long b = static_cast<long long>(ci) * chunk;
      long long e = std::min(total, b + chunk);
      std::vector<int> digits(static_cast<std::size_t>(nh));
      std::vector<int> free_pos;
      std::vector<double> w1(static_cast<std::size_t>(nh)), wy1(static_cast<std::size_t>(nh));
      SweepBest& bb = best[ci];
      SweepTotals& tt = totals[ci];
      for (long long ctr = b; ctr < e; ++ctr) {
        long long rem = ctr;
        for (int h = nh - 1; h >= 0; --h) {
          digits[static_cast<std::size_t>(h)] = static_cast<int>(rem % 3);
          rem /= 3;
        }
        Word fixed_bits = 0;
        Word fixed_mask = 0;
        for (int h = 0; h < nh; ++h) {
          int dg = digits[static_cast<std::size_t>(h)];
          if (dg == 2) continue;  // star
          Word bit = Word(1) << coords[static_cast<std::size_t>(h)];
          fixed_mask |= bit;
          if (dg == 1) fixed_bits |= bit;
        }
        free_pos.clear();
        for (int i = 0; i < d; ++i)
          if (!((fixed_mask >> i) & 1u)) free_pos.push_back(i);

        double W = 0.0, WY = 0.0;
        std::fill(w1.begin(), w1.end(), 0.0);
        std::fill(wy1.begin(), wy1.end(), 0.0);
        const Word nfree = Word(1) << free_pos.size();
        for (Word m = 0; m < nfree; ++m) {
          Word x = fixed_bits;
          for (std::size_t fp = 0; fp < free_pos.size(); ++fp)
            if ((m >> fp) & 1u) x |= Word(1) << free_pos[fp];
          double ww = w[x];
          if (ww == 0.0 && wy[x] == 0.0) continue;
          W += ww;
          WY += wy[x];
          for (int h = 0; h < nh; ++h) {
            if ((fixed_mask >> coords[static_cast<std::size_t>(h)]) & 1u) continue;
            if ((x >> coords[static_cast<std::size_t>(h)]) & 1u) {
              w1[static_cast<std::size_t>(h)] += ww;
              wy1[static_cast<std::size_t>(h)] += wy[x];
            }
          }
        }

        double var = 0.0, mu = 0.0;
        bool degenerate = W <= 0.0;
        if (!degenerate) {
          mu = WY / W;
          var = mu * (1.0 - mu);
          degenerate = var <= opts.var_eps;
        }
        if (degenerate) {
          ++tt.degenerate;
          continue;
        }
        ++tt.considered;
        double g_best = 0.0;
        int h_best = -1;
        for (int h = 0; h < nh; ++h) {
          double cov;
          if ((fixed_mask >> coords[static_cast<std::size_t>(h)]) & 1u) {
            cov = 0.0;  // hypothesis constant on the view
          } else {
            cov = wy1[static_cast<std::size_t>(h)] / W -
                  (w1[static_cast<std::size_t>(h)] / W) * mu;
          }
          double ratio = std::fabs(cov) / var;
          if (h_best < 0 || ratio > g_best) {
            g_best = ratio;
            h_best = h;
          }
        }
        if (opts.keep_table) {
          RestrictionStat st;
          st.rho = Restriction::all_free(d);
          for (int h = 0; h < nh; ++h) {
            int dg = digits[static_cast<std::size_t>(h)];
            if (dg != 2)
              st.rho.values[static_cast<std::size_t>(coords[static_cast<std::size_t>(h)])] =
                  dg == 1 ? 1 : -1;
          }
          st.weight = W;
          st.var = var;
          st.best_ratio = g_best;
          st.best_hyp = h_best;
          tables[ci].push_back(st);
        }
        if (!bb.found || g_best < bb.gamma) {
          bb.found = true;
          bb.gamma = g_best;
          bb.counter = ctr;
          bb.hyp = h_best;
        }
      }
    });

    AdvantageReport rep;
    SweepBest overall;
    for (const auto& bb : best) {
      if (!bb.found) continue;
      if (!overall.found || bb.gamma < overall.gamma ||
          (bb.gamma == overall.gamma && bb.counter < overall.counter)) {
        overall = bb;
      }
    }
    for (const auto& tt : totals) {
      rep.considered += tt.considered;
      rep.degenerate += tt.degenerate;
    }
    if (opts.keep_table)
      for (auto& tb : tables)
        rep.table.insert(rep.table.end(), tb.begin(), tb.end());

    if (overall.found) {
      rep.gamma_star = overall.gamma;
      rep.witness_hyp = overall.hyp;
      Restriction rho = Restriction::all_free(d);
      long long rem = overall.counter;
      std::vector<int> digits(static_cast<std::size_t>(nh));
      for (int h = nh - 1; h >= 0; --h) {
        digits[static_cast<std::size_t>(h)] = static_cast<int>(rem % 3);
        rem /= 3;
      }
      for (int h = 0; h < nh; ++h) {
        int dg = digits[static_cast<std::size_t>(h)];
        if (dg == 2) continue;
        rho.values[static_cast<std::size_t>(coords[static_cast<std::size_t>(h)])] =
            dg == 1 ? 1 : -1;
        rep.witness_path.push_back(
            PathConstraint{h, static_cast<std::uint8_t>(dg == 1 ? 1 : 0)});
      }
      rep.witness = rho;
    }
    return rep;
  }

  // General classes: conjunctions of distinct hypotheses with branch bits,
  // depth-capped.
  long long views = 0;
  AdvantageReport rep;
  std::vector<PathConstraint> path;
  bool found = false;

  std::function<void(int)> recurse = [&](int start) {
    {
      ConditionedView view(dist, hyps, path);
      if (view.degenerate()) {
        ++rep.degenerate;
      } else {
        auto m = view.moments();
        if (m.var <= opts.var_eps) {
          ++rep.degenerate;
        } else {
          ++rep.considered;
          const auto& flat = dist.flat();
          double g_best = 0.0;
          int h_best = -1;
          for (int h = 0; h < nh; ++h) {
            double w1 = 0.0, wy1 = 0.0;
            for (auto i : view.cells()) {
              const auto& c = flat[static_cast<std::size_t>(i)];
              if (hyps.eval(h, c.bits)) {
                w1 += c.w;
                wy1 += c.wpos;
              }
            }
            double cov = wy1 / m.weight - (w1 / m.weight) * m.mu;
            double ratio = std::fabs(cov) / m.var;
            if (h_best < 0 || ratio > g_best) {
              g_best = ratio;
              h_best = h;
            }
          }
          if (!found || g_best < rep.gamma_star) {
            found = true;
            rep.gamma_star = g_best;
            rep.witness_hyp = h_best;
            rep.witness_path = path;
          }
        }
      }
    }
    if (static_cast<int>(path.size()) >= opts.depth_cap) return;
    for (int h = start; h < nh; ++h) {
      for (int b = 0; b <= 1; ++b) {
        if (++views > opts.max_views)
          throw ExplosionGuard("weak_learning_advantage: conjunction cap exceeded");
        path.push_back(PathConstraint{h, static_cast<std::uint8_t>(b)});
        recurse(h + 1);
        path.pop_back();
      }
    }
  };
  recurse(0);
  return rep;
}

OsssReport osss_oracle(const DecisionTree& tree, const HypothesisClass& hyps,
                       const ProductDistribution& px) {
  const int d = px.dim();
  if (d > 20) throw OutOfRange("osss_oracle: d must be <= 20");
  if (tree.dim() != d) throw DimMismatch("osss_oracle: dim mismatch");
  auto table = truth_table(tree_as_function(tree, hyps), d);

  OsssReport r;
  r.size = tree.leaf_count();
  double ef = 0.0;
  for (Word x = 0; x < table.size(); ++x)
    ef += px.mass(x) * (table[x] ? 1.0 : -1.0);
  r.var = 1.0 - ef * ef;
  for (int i = 0; i < d; ++i) r.max_inf = std::max(r.max_inf, influence(table, px, i));
  r.rhs = r.size >= 2 ? r.var / std::log2(static_cast<double>(r.size)) : 0.0;
  r.ratio = r.rhs > 0.0 ? r.max_inf / r.rhs : (r.max_inf > 0.0 ? HUGE_VAL : 1.0);
  r.pass = r.max_inf >= r.rhs - 1e-12;
  return r;
}

KklReport kkl_oracle(const PointFn& f, int k) {
  auto px = ProductDistribution::uniform(k);
  auto table = truth_table(f, k);
  KklReport r;
  double ef = 0.0;
  for (Word x = 0; x < table.size(); ++x)
    ef += px.mass(x) * (table[x] ? 1.0 : -1.0);
  double var = 1.0 - ef * ef;
  for (int i = 0; i < k; ++i) r.max_inf = std::max(r.max_inf, influence(table, px, i));
  // log2(max(k,2)) keeps the k=1 dictator case well-defined (rhs = var).
  r.rhs = std::log2(static_cast<double>(std::max(k, 2))) / k * var;
  r.ratio = r.rhs > 0.0 ? r.max_inf / r.rhs : (r.max_inf > 0.0 ? HUGE_VAL : 1.0);
  return r;
}

}  // namespace noisytd
