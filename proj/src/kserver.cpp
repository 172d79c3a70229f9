#include "olproj/kserver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace olproj {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

KServerState init_state(const WeightedTree& tree, int k, int h,
                        const std::vector<int>& initial_leaves) {
  const int n = tree.leaf_count();
  if (k < 1 || h < 1 || h > k) throw std::invalid_argument("init_state: need 1 <= h <= k");
  if (static_cast<int>(initial_leaves.size()) != k)
    throw std::invalid_argument("init_state: need exactly k initial leaves");
  if (k >= n)
    throw std::invalid_argument("init_state: k must be below the leaf count (delta conflict)");

  KServerState st;
  st.tree = &tree;
  st.k = k;
  st.h = h;
  st.delta = PolytopeSpec::delta_for(k, h);

  const double rest = (n - h - st.delta * k) / (n - k);
  Vec leaf_vals = Vec::Constant(n, rest);
  std::vector<bool> seen(n, false);
  for (int v : initial_leaves) {
    int p = tree.leaf_pos(v);
    if (p < 0) throw std::invalid_argument("init_state: not a leaf");
    if (seen[p]) throw std::invalid_argument("init_state: duplicate leaf");
    seen[p] = true;
    leaf_vals[p] = st.delta;
  }

  Vec x = Vec::Zero(tree.atom_count());
  for (int i = 0; i < n; ++i) x[tree.leaf_atom(i)] = leaf_vals[i];
  // bottom-up: each internal node's slots are its children's values, sorted
  for (int d = tree.depth() - 1; d >= 1; --d) {
    for (int u : tree.level(d)) {
      if (tree.is_leaf(u)) continue;
      std::vector<double> vals;
      for (int a : children_atoms(tree, u)) vals.push_back(x[a]);
      std::sort(vals.begin(), vals.end());
      for (int j = 1; j <= tree.subtree_leaves(u); ++j) x[tree.atom(u, j)] = vals[j - 1];
    }
  }
  const int r = tree.root();
  for (int j = 1; j <= n; ++j) x[tree.atom(r, j)] = j > h ? 1.0 : 0.0;

  st.x = std::move(x);
  auto rep = check_membership(st.x, st.spec());
  if (!rep.in_P(1e-12) || rep.leaf_shift > 1e-12)
    throw std::invalid_argument("init_state: construction infeasible for these (k,h)");
  return st;
}

void AuditReport::add(std::string name, bool ok, double residual) {
  checks.push_back({std::move(name), ok, false, residual});
}

void AuditReport::skip(std::string name) { checks.push_back({std::move(name), true, true, 0.0}); }

bool AuditReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.skipped && !c.passed) return false;
  return true;
}

int AuditReport::passed_count() const {
  int k = 0;
  for (const auto& c : checks)
    if (!c.skipped && c.passed) ++k;
  return k;
}

int AuditReport::skipped_count() const {
  int k = 0;
  for (const auto& c : checks)
    if (c.skipped) ++k;
  return k;
}

AuditReport structural_report(const WeightedTree& tree, int h, double delta,
                              std::optional<int> request, const Vec& x, double tol) {
  AuditReport rep;
  const int n = tree.leaf_count();
  const int r = tree.root();

  double root_res = 0.0;
  for (int j = 1; j <= n; ++j)
    root_res = std::max(root_res, std::abs(x[tree.atom(r, j)] - (j > h ? 1.0 : 0.0)));
  rep.add("root_tight", root_res <= tol, root_res);

  double box_res = std::max(0.0, std::max((-x).maxCoeff(), (x - 1.0).maxCoeff()));
  for (int i = 0; i < n; ++i) box_res = std::max(box_res, delta - x[tree.leaf_atom(i)]);
  if (request) box_res = std::max(box_res, std::abs(x[tree.atom(*request, 1)] - delta));
  rep.add("box", box_res <= tol, box_res);

  double mono_res = 0.0;
  for (int u = 0; u < tree.node_count(); ++u)
    for (int j = 1; j < tree.subtree_leaves(u); ++j)
      mono_res = std::max(mono_res, x[tree.atom(u, j)] - x[tree.atom(u, j + 1)]);
  rep.add("slot_monotone", mono_res <= tol, mono_res);

  double mass_res = 0.0;
  for (int d = 0; d <= tree.depth(); ++d) {
    double m = 0.0;
    for (int u : tree.level(d))
      for (int j = 1; j <= tree.subtree_leaves(u); ++j) m += x[tree.atom(u, j)];
    mass_res = std::max(mass_res, std::abs(m - (n - h)));
  }
  rep.add("level_mass", mass_res <= tol, mass_res);
  return rep;
}

AuditReport audit_step(const WeightedTree& tree, double delta, const Vec& x_prev,
                       const Vec& x_new, const ProjectionResult& result, const Vec& y_prev,
                       const Vec& y_new) {
  AuditReport rep;
  const DivergenceParams dp{&tree, delta};
  const double tol = 1e-7;

  // (a) OPT's move: potential gain bounded by the log factor times its cost
  double opt_pos = tree_norm_pos(tree, y_new - y_prev);
  double gain = potential(y_new, x_prev, dp) - potential(y_prev, x_prev, dp);
  double bound = (1.0 + delta) * std::log1p(1.0 / delta) * opt_pos;
  rep.add("opt_charge", gain <= bound + tol, gain - bound);

  // (b) the algorithm's move: shadow cost plus potential change is nonpositive
  double shadow = pdiv(x_new, x_prev, dp);
  double dphi = potential(y_new, x_new, dp) - potential(y_new, x_prev, dp);
  rep.add("shadow_cost", shadow + dphi <= tol, shadow + dphi);

  // reverse-Pythagorean against the comparator point
  double lhs = divergence(y_new, x_prev, dp);
  double rhs = divergence(y_new, x_new, dp) + divergence(x_new, x_prev, dp);
  rep.add("rev_pythagorean", lhs >= rhs - tol, rhs - lhs);

  if (!result.certificate) {
    rep.skip("eq5");
    rep.skip("cs_level");
    rep.skip("charge_up");
    rep.skip("second_bound");
    return rep;
  }
  const DualCertificate& cert = *result.certificate;
  Vec a, b;
  cert.assemble(tree, a, b);
  Vec xt = x_new + delta;
  Vec A = xt * a, B = xt * b;

  double move_pos = tree_norm_pos(tree, x_new - x_prev);
  rep.add("eq5", move_pos <= A.sum() + tol, move_pos - A.sum());

  double cs_res = 0.0, charge_res = 0.0;
  for (int u = 0; u < tree.node_count(); ++u) {
    if (tree.is_leaf(u)) continue;
    double bu = 0.0, av = 0.0, au = 0.0, du = 0.0;
    for (int j = 1; j <= tree.subtree_leaves(u); ++j) {
      int i = tree.atom(u, j);
      bu += B[i];
      au += A[i];
      du += x_new[i] - x_prev[i];
    }
    for (int m : children_atoms(tree, u)) av += A[m];
    cs_res = std::max(cs_res, std::abs(bu - av));
    charge_res = std::max(charge_res, av - (au - tree.weight(u) * du));
  }
  rep.add("cs_level", cs_res <= 1e-6, cs_res);
  rep.add("charge_up", charge_res <= tol, charge_res);

  double drop = divergence(y_new, x_prev, dp) - divergence(y_new, x_new, dp);
  double need = delta * cert.gamma;
  rep.add("second_bound", drop >= need - tol, need - drop);
  return rep;
}

KServerStepRecord serve(KServerState& state, int request_leaf, AuditLevel level,
                        const Vec* y_prev, const Vec* y_new, const ProjectOptions& opts) {
  const WeightedTree& tree = *state.tree;
  if (!tree.is_leaf(request_leaf)) throw std::invalid_argument("serve: request must be a leaf");

  KServerStepRecord rec;
  rec.request = request_leaf;

  auto spec = state.spec(request_leaf);
  auto result = project(state.x, spec, state.div_params(), opts);
  if (!result.converged)
    throw SolverError("serve: projection did not converge (residual " +
                      std::to_string(result.feas_residual) + ")");

  Vec dx = result.x - state.x;
  rec.movement = tree_norm(tree, dx);
  rec.movement_pos = tree_norm_pos(tree, dx);
  auto z_prev = to_server_vector(tree, state.x, state.delta);
  auto z_new = to_server_vector(tree, result.x, state.delta);
  rec.server_movement = server_distance(tree, z_prev.leaves, z_new.leaves);
  rec.converged = result.converged;
  rec.sweeps = result.sweeps;
  rec.rounds = result.rounds;
  rec.active_set_size = result.active_set_size;
  rec.feas_residual = result.feas_residual;
  rec.stationarity_residual = result.stationarity_residual;
  rec.has_certificate = result.certificate.has_value();
  rec.phi_before = kNaN;
  rec.phi_after = kNaN;

  if (level != AuditLevel::Off) {
    auto srep = structural_report(tree, state.h, state.delta, request_leaf, result.x);
    for (auto& c : srep.checks) rec.audit.checks.push_back(std::move(c));

    // flow direction: the requested leaf never rises, other leaves never drop
    double flow_res = 0.0;
    for (int i = 0; i < tree.leaf_count(); ++i) {
      int a = tree.leaf_atom(i);
      double d = result.x[a] - state.x[a];
      flow_res = std::max(flow_res, tree.leaves()[i] == request_leaf ? d : -d);
    }
    rec.audit.add("flow_direction", flow_res <= 1e-9, flow_res);
  }
  if (level == AuditLevel::Full && y_prev && y_new) {
    const DivergenceParams dp = state.div_params();
    rec.phi_before = potential(*y_new, state.x, dp);
    rec.phi_after = potential(*y_new, result.x, dp);
    auto arep = audit_step(tree, state.delta, state.x, result.x, result, *y_prev, *y_new);
    for (auto& c : arep.checks) rec.audit.checks.push_back(std::move(c));
  }

  state.total_move += rec.movement;
  state.total_move_pos += rec.movement_pos;
  state.total_server_move += rec.server_movement;
  state.x = std::move(result.x);
  state.last_request = request_leaf;
  state.step += 1;
  return rec;
}

KServerRunSummary run_kserver(KServerState& state, const std::vector<int>& requests,
                              AuditLevel level,
                              const std::vector<std::vector<int>>* comparator_configs,
                              const std::vector<int>* comparator_initial,
                              const ProjectOptions& opts) {
  const WeightedTree& tree = *state.tree;
  KServerRunSummary sum;
  const bool cmp = comparator_configs && comparator_initial;
  sum.has_comparator = cmp;
  if (cmp && comparator_configs->size() != requests.size())
    throw std::invalid_argument("run_kserver: comparator length mismatch");

  Vec y_prev, x0;
  if (cmp) {
    y_prev = encode_integer(tree, *comparator_initial, state.h);
    x0 = state.x;
    sum.phi0 = potential(y_prev, state.x, state.div_params());
    sum.W0 = weighted_mass(state.x, state.div_params());
  }

  for (size_t t = 0; t < requests.size(); ++t) {
    Vec y_new;
    if (cmp) {
      y_new = encode_integer(tree, (*comparator_configs)[t], state.h);
      sum.opt_move_pos += tree_norm_pos(tree, y_new - y_prev);
    }
    auto rec = serve(state, requests[t], level, cmp ? &y_prev : nullptr, cmp ? &y_new : nullptr,
                     opts);
    sum.steps.push_back(std::move(rec));
    if (cmp) y_prev = std::move(y_new);
  }
  sum.total_move = state.total_move;
  sum.total_move_pos = state.total_move_pos;
  sum.total_server_move = state.total_server_move;

  if (cmp) {
    sum.phiT = requests.empty() ? sum.phi0 : potential(y_prev, state.x, state.div_params());
    sum.WT = weighted_mass(state.x, state.div_params());
    const int D = tree.depth();
    const double logf = (1.0 + state.delta) * std::log1p(1.0 / state.delta);
    sum.aggregate_lhs = sum.total_move_pos;
    sum.aggregate_rhs = 3.0 * (D + 1) * logf * sum.opt_move_pos +
                        3.0 * (D + 1) * (sum.phi0 - sum.phiT) + D * (sum.W0 - sum.WT);
    sum.aggregate_ok = sum.aggregate_lhs <= sum.aggregate_rhs + 1e-6;
  }
  return sum;
}

}  // namespace olproj
