#include "olproj/bregman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace olproj {

namespace {

double safe_exp(double a) { return std::exp(std::clamp(a, -700.0, 700.0)); }

double xlog_ratio(double a, double b) {
  // a log(a/b) with the 0 log 0 = 0 convention
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("divergence: shifted entry below zero");
  if (a == 0.0) return 0.0;
  if (b == 0.0) return std::numeric_limits<double>::infinity();
  return a * std::log(a / b);
}

}  // namespace

double divergence(const Vec& x, const Vec& xp, const DivergenceParams& params) {
  const Vec& w = params.tree->atom_weights();
  if (x.size() != w.size() || xp.size() != w.size())
    throw std::invalid_argument("divergence: dimension mismatch");
  double d = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    double a = x[i] + params.shift, b = xp[i] + params.shift;
    d += w[i] * (xlog_ratio(a, b) - a + b);
  }
  return d;
}

double pdiv(const Vec& p, const Vec& q, const DivergenceParams& params) {
  const Vec& w = params.tree->atom_weights();
  if (p.size() != w.size() || q.size() != w.size())
    throw std::invalid_argument("pdiv: dimension mismatch");
  double d = 0.0;
  for (int i = 0; i < p.size(); ++i)
    d += w[i] * xlog_ratio(p[i] + params.shift, q[i] + params.shift);
  return d;
}

double potential(const Vec& y, const Vec& x, const DivergenceParams& params) {
  const Vec& w = params.tree->atom_weights();
  if (y.size() != w.size() || x.size() != w.size())
    throw std::invalid_argument("potential: dimension mismatch");
  const double s = params.shift;
  double phi = 0.0;
  bool in_box = (x >= -1e-9).all() && (x <= 1.0 + 1e-9).all();
  double lo = 0.0, hi = 0.0;
  if (s > 0.0) {
    lo = -s * std::log1p(1.0 / s) - 1e-9;
    hi = (1.0 + s) * std::log1p(1.0 / s) + 1e-9;
  }
  for (int i = 0; i < y.size(); ++i) {
    if (std::abs(y[i]) > 1e-12 && std::abs(y[i] - 1.0) > 1e-12)
      throw std::invalid_argument("potential: comparator not Boolean");
    double term = xlog_ratio(y[i] + s, x[i] + s);
    if (s > 0.0 && in_box && (term < lo || term > hi))
      throw std::logic_error("potential: term outside the admissible range");
    phi += w[i] * term;
  }
  return phi;
}

double weighted_mass(const Vec& x, const DivergenceParams& params) {
  const Vec& w = params.tree->atom_weights();
  if (x.size() != w.size()) throw std::invalid_argument("weighted_mass: dimension mismatch");
  return (w * x).sum();
}

void DualCertificate::assemble(const WeightedTree& tree, Vec& a, Vec& b) const {
  a = Vec::Zero(tree.atom_count());
  b = Vec::Zero(tree.atom_count());
  for (const auto& [S, lam] : subsets) {
    for (int j = 1; j <= S.size(); ++j) b[tree.atom(S.parent, j)] += lam;
    for (int m : S.members) a[m] += lam;
  }
  const int r = tree.root();
  for (int j = 1; j <= tree.subtree_leaves(r); ++j) a[tree.atom(r, j)] += root[j - 1];
}

namespace {

// Cyclic Bregman-Dykstra over the request cap, root lower bounds, the box,
// and an active list of subset half-spaces. For half-spaces the correction
// is exactly theta * c, so the accumulated thetas are the dual multipliers.
struct DykstraEngine {
  const WeightedTree& tree;
  const PolytopeSpec& spec;
  double shift;
  Vec xt0;  // x_prev + shift
  Vec xt;   // current iterate, shifted

  int cap_atom = -1;
  double cap_bound = 0.0;  // on xt
  double e_cap = 0.0;      // correction exponent q/w

  Vec root_bound;  // on xt, per root slot
  Vec e_root;
  Vec e_box;  // per atom

  struct Active {
    SubsetConstraint c;
    std::vector<int> prefix;  // parent atoms 1..|S|
    double theta = 0.0;
  };
  std::vector<Active> active;

  DykstraEngine(const Vec& x_prev, const PolytopeSpec& s, double shift_)
      : tree(*s.tree), spec(s), shift(shift_) {
    xt0 = x_prev + shift;
    xt = xt0;
    if (spec.request) {
      cap_atom = tree.atom(*spec.request, 1);
      cap_bound = spec.delta + shift;
    }
    const int r = tree.root();
    root_bound.resize(tree.subtree_leaves(r));
    for (int j = 1; j <= tree.subtree_leaves(r); ++j)
      root_bound[j - 1] = (j > spec.h ? 1.0 : 0.0) + shift;
    e_root = Vec::Zero(root_bound.size());
    e_box = Vec::Zero(tree.atom_count());
  }

  bool has(const SubsetConstraint& c) const {
    for (const auto& a : active)
      if (a.c == c) return true;
    return false;
  }

  void add(SubsetConstraint c) {
    Active a;
    a.prefix.reserve(c.size());
    for (int j = 1; j <= c.size(); ++j) a.prefix.push_back(tree.atom(c.parent, j));
    a.c = std::move(c);
    active.push_back(std::move(a));
  }

  double halfspace_value(const Active& a) const {
    double v = 0.0;
    for (int i : a.prefix) v += xt[i];
    for (int i : a.c.members) v -= xt[i];
    return v;
  }

  // v(theta) = sum_prefix xt e^{-theta/w} - sum_members xt e^{+theta/w}
  double halfspace_value_at(const Active& a, double theta) const {
    const Vec& w = tree.atom_weights();
    double v = 0.0;
    for (int i : a.prefix) v += xt[i] * safe_exp(-theta / w[i]);
    for (int i : a.c.members) v -= xt[i] * safe_exp(theta / w[i]);
    return v;
  }

  void apply_halfspace(Active& a, double theta) {
    if (theta == 0.0) return;
    const Vec& w = tree.atom_weights();
    for (int i : a.prefix) xt[i] *= safe_exp(-theta / w[i]);
    for (int i : a.c.members) xt[i] *= safe_exp(theta / w[i]);
  }

  void step_halfspace(Active& a, double tol_bisect) {
    apply_halfspace(a, -a.theta);  // undo stored correction
    double v0 = halfspace_value(a);
    if (v0 <= 0.0) {
      a.theta = 0.0;
      return;
    }
    double lo = 0.0, hi = std::max(1e-3, 2.0 * a.theta);
    while (halfspace_value_at(a, hi) > 0.0 && hi < 1e30) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      double v = halfspace_value_at(a, mid);
      if (v > 0.0) lo = mid; else hi = mid;
      if (hi - lo <= 1e-16 * (1.0 + hi) && std::abs(v) <= tol_bisect) break;
    }
    a.theta = 0.5 * (lo + hi);
    apply_halfspace(a, a.theta);
  }

  static double log_ratio_or_zero(double y, double after) {
    if (y == after) return 0.0;
    if (y <= 0.0 || after <= 0.0)
      throw std::runtime_error("project: zero coordinate pinned below a lower bound");
    return std::log(y / after);
  }

  void step_cap() {
    if (cap_atom < 0) return;
    double y = xt[cap_atom] * safe_exp(e_cap);
    double after = std::min(y, cap_bound);
    e_cap = log_ratio_or_zero(y, after);
    xt[cap_atom] = after;
  }

  void step_root() {
    const int r = tree.root();
    for (int j = 0; j < root_bound.size(); ++j) {
      int i = tree.atom(r, j + 1);
      double y = xt[i] * safe_exp(e_root[j]);
      double after = std::max(y, root_bound[j]);
      e_root[j] = log_ratio_or_zero(y, after);
      xt[i] = after;
    }
  }

  void step_box() {
    const double lo = shift, hi = 1.0 + shift;
    for (int i = 0; i < xt.size(); ++i) {
      double y = xt[i] * safe_exp(e_box[i]);
      double after = std::clamp(y, lo, hi);
      e_box[i] = log_ratio_or_zero(y, after);
      xt[i] = after;
    }
  }

  double worst_violation() const {
    double v = 0.0;
    if (cap_atom >= 0) v = std::max(v, xt[cap_atom] - cap_bound);
    const int r = tree.root();
    for (int j = 0; j < root_bound.size(); ++j)
      v = std::max(v, root_bound[j] - xt[tree.atom(r, j + 1)]);
    v = std::max(v, (shift - xt).maxCoeff());
    v = std::max(v, (xt - (1.0 + shift)).maxCoeff());
    for (const auto& a : active) v = std::max(v, halfspace_value(a));
    return v;
  }

  // re-derive xt from the correction invariant to cancel numerical drift
  void resync() {
    const Vec& w = tree.atom_weights();
    Vec e = -e_box;
    for (int j = 0; j < root_bound.size(); ++j) e[tree.atom(tree.root(), j + 1)] -= e_root[j];
    if (cap_atom >= 0) e[cap_atom] -= e_cap;
    for (const auto& a : active) {
      for (int i : a.prefix) e[i] -= a.theta / w[i];
      for (int i : a.c.members) e[i] += a.theta / w[i];
    }
    for (int i = 0; i < xt.size(); ++i) xt[i] = xt0[i] * safe_exp(e[i]);
  }
};

}  // namespace

ProjectionResult project(const Vec& x_prev, const PolytopeSpec& spec,
                         const DivergenceParams& params, const ProjectOptions& opts) {
  const WeightedTree& tree = *spec.tree;
  if (!spec.request || !tree.is_leaf(*spec.request))
    throw std::invalid_argument("project: request must be a leaf");
  {
    auto rep = check_membership(x_prev, spec);
    if (!rep.in_P(100 * opts.tol_feas) || rep.leaf_shift > 100 * opts.tol_feas)
      throw std::invalid_argument("project: infeasible start");
  }

  ProjectionResult res;
  const int cap_atom = tree.atom(*spec.request, 1);
  if (x_prev[cap_atom] <= spec.delta + 1e-15) {
    // already in P_t; the projection of a member point is itself
    res.x = x_prev;
    res.converged = true;
    res.feas_residual = 0.0;
    res.stationarity_residual = 0.0;
    if (opts.want_certificate) {
      DualCertificate cert;
      cert.root = Vec::Zero(tree.subtree_leaves(tree.root()));
      res.certificate = std::move(cert);
    }
    return res;
  }

  DykstraEngine eng(x_prev, spec, params.shift);
  long sweeps = 0;
  bool inner_ok = false;

  for (int round = 0; round < opts.max_rounds; ++round) {
    res.rounds = round + 1;
    inner_ok = false;
    while (sweeps < opts.max_sweeps) {
      Vec before = eng.xt;
      eng.step_cap();
      eng.step_root();
      eng.step_box();
      for (auto& a : eng.active) eng.step_halfspace(a, opts.tol_bisect);
      ++sweeps;
      if ((sweeps & 255) == 0) eng.resync();
      double change = (eng.xt - before).abs().maxCoeff();
      if (change <= 1e-13 && eng.worst_violation() <= opts.tol_inner) {
        inner_ok = true;
        break;
      }
    }
    eng.resync();
    Vec x = eng.xt - params.shift;
    auto worst = violated_subsets(tree, x, 0.25 * opts.tol_feas);
    bool added = false;
    for (auto& c : worst)
      if (!eng.has(c)) {
        eng.add(std::move(c));
        added = true;
      }
    if (!added) break;
    if (sweeps >= opts.max_sweeps) break;
  }

  res.x = eng.xt - params.shift;
  res.sweeps = sweeps;
  res.active_set_size = static_cast<int>(eng.active.size());
  {
    auto rep = check_membership(res.x, spec);
    res.feas_residual = std::max({rep.box, rep.root, rep.subset, rep.request_cap});
    res.converged = inner_ok && res.feas_residual <= opts.tol_feas;
  }

  res.stationarity_residual = std::numeric_limits<double>::quiet_NaN();
  if (opts.want_certificate) {
    DualCertificate cert;
    cert.gamma = tree.atom_weights()[cap_atom] * eng.e_cap;
    cert.root = Vec::Zero(eng.root_bound.size());
    for (int j = 0; j < eng.root_bound.size(); ++j)
      cert.root[j] = -tree.weight(tree.root()) * eng.e_root[j];
    for (const auto& a : eng.active)
      if (a.theta > 0.0) cert.subsets.emplace_back(a.c, a.theta);

    Vec av, bv;
    cert.assemble(tree, av, bv);
    const Vec& w = tree.atom_weights();
    double r_stat = 0.0;
    for (int i = 0; i < res.x.size(); ++i) {
      double lhs = w[i] * std::log((res.x[i] + params.shift) / (x_prev[i] + params.shift));
      double rhs = av[i] - bv[i] - (i == cap_atom ? cert.gamma : 0.0);
      r_stat = std::max(r_stat, std::abs(lhs - rhs));
    }
    res.stationarity_residual = r_stat;

    double r_cs = 0.0;
    for (const auto& [S, lam] : cert.subsets)
      r_cs = std::max(r_cs, lam * std::abs(S.violation(tree, res.x)));
    for (int j = 0; j < cert.root.size(); ++j) {
      double bound = (j + 1 > spec.h) ? 1.0 : 0.0;
      r_cs = std::max(r_cs, cert.root[j] * std::abs(res.x[tree.atom(tree.root(), j + 1)] - bound));
    }
    r_cs = std::max(r_cs, cert.gamma * std::abs(res.x[cap_atom] - spec.delta));

    bool root_nonneg = (cert.root >= -1e-12).all();
    if (res.converged && r_stat <= 1e-6 && r_cs <= 1e-7 && cert.gamma >= -1e-12 && root_nonneg) {
      cert.gamma = std::max(cert.gamma, 0.0);
      cert.root = cert.root.max(0.0);
      res.certificate = std::move(cert);
    }
  }
  return res;
}

}  // namespace olproj
