#include "olproj/paging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace olproj {

namespace {

void validate(const PagingParams& p) {
  const int n = p.n();
  if (n < 1) throw std::invalid_argument("paging: no pages");
  if (p.h < 1 || p.h > p.k) throw std::invalid_argument("paging: need 1 <= h <= k");
  if (p.k >= n) throw std::invalid_argument("paging: need k < n");
  if ((p.weights <= 0.0).any()) throw std::invalid_argument("paging: weights must be positive");
}

}  // namespace

Vec paging_initial(const PagingParams& p, const std::vector<int>& initial_pages) {
  validate(p);
  if (static_cast<int>(initial_pages.size()) != p.k)
    throw std::invalid_argument("paging: initial cache must have k pages");
  const int n = p.n();
  const double delta = p.delta();
  const double rest = (n - p.h - delta * p.k) / (n - p.k);
  Vec a = Vec::Constant(n, rest);
  std::vector<bool> seen(n, false);
  for (int i : initial_pages) {
    if (i < 0 || i >= n) throw std::invalid_argument("paging: page out of range");
    if (seen[i]) throw std::invalid_argument("paging: duplicate page in initial cache");
    seen[i] = true;
    a[i] = delta;
  }
  return a;
}

PagingStepResult paging_project(const Vec& a_prev, int request, const PagingParams& p,
                                double tol) {
  validate(p);
  const int n = p.n();
  if (a_prev.size() != n) throw std::invalid_argument("paging_project: dimension mismatch");
  if (request < 0 || request >= n) throw std::invalid_argument("paging_project: bad request");
  const double delta = p.delta();
  const double target = n - p.h;

  PagingStepResult out;
  if (a_prev[request] <= delta + 1e-15) {
    out.a = a_prev;
    out.a[request] = std::min(a_prev[request], delta);
    out.lambda = 0.0;
    out.residual = std::abs(out.a.sum() - target);
    return out;
  }

  // mass(lambda) = delta + sum_{i != r} min(1, a_i e^{lambda/w_i}), nondecreasing
  auto mass = [&](double lambda) {
    double s = delta;
    for (int i = 0; i < n; ++i) {
      if (i == request) continue;
      s += std::min(1.0, a_prev[i] * std::exp(std::min(lambda / p.weights[i], 700.0)));
    }
    return s;
  };

  double amin = a_prev.minCoeff();
  double hi = p.weights.maxCoeff() * std::log(static_cast<double>(n) / std::max(amin, 1e-300));
  hi = std::max(hi, 1.0);
  if (mass(hi) < target - tol)
    throw std::logic_error("paging_project: mass infeasible");  // impossible for n-h <= n-1+delta
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mass(mid) < target) lo = mid; else hi = mid;
    if (hi - lo <= 1e-16 * (1.0 + hi) && std::abs(mass(mid) - target) <= tol) break;
  }
  double lambda = 0.5 * (lo + hi);

  out.a = a_prev;
  out.a[request] = delta;
  for (int i = 0; i < n; ++i) {
    if (i == request) continue;
    out.a[i] = std::min(1.0, a_prev[i] * std::exp(std::min(lambda / p.weights[i], 700.0)));
  }
  out.lambda = lambda;
  out.residual = std::abs(out.a.sum() - target);
  return out;
}

PagingTrace paging_run(const PagingParams& p, const std::vector<int>& initial_pages,
                       const std::vector<int>& requests) {
  PagingTrace tr;
  tr.initial = paging_initial(p, initial_pages);
  Vec a = tr.initial;
  for (int r : requests) {
    auto step = paging_project(a, r, p);
    PagingStep rec;
    rec.request = r;
    rec.movement = (p.weights * (step.a - a).abs()).sum();
    rec.movement_pos = (p.weights * (step.a - a).max(0.0)).sum();
    rec.lambda = step.lambda;
    tr.total_movement += rec.movement;
    tr.total_movement_pos += rec.movement_pos;
    tr.steps.push_back(rec);
    a = step.a;
  }
  tr.final = a;
  return tr;
}

double paging_potential(const Vec& b, const Vec& a, const Vec& weights) {
  if (b.size() != a.size() || b.size() != weights.size())
    throw std::invalid_argument("paging_potential: dimension mismatch");
  double phi = 0.0;
  for (int i = 0; i < b.size(); ++i) {
    if (std::abs(b[i]) > 1e-12 && std::abs(b[i] - 1.0) > 1e-12)
      throw std::invalid_argument("paging_potential: comparator not Boolean");
    if (b[i] > 0.5) {
      if (a[i] <= 0.0) throw std::invalid_argument("paging_potential: nonpositive entry");
      phi += weights[i] * std::log(1.0 / a[i]);
    }
  }
  return phi;
}

}  // namespace olproj
