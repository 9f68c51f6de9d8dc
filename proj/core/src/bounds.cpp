#include "prosparse/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace prosparse {

namespace {

constexpr double kGuard = 1e-9;

bool strictly_below(double lhs, double rhs) {
  return lhs < rhs - kGuard * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

bool on_boundary(double lhs, double rhs) {
  return std::abs(lhs - rhs) <= kGuard * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

void validate(Index n, double mu) {
  if (n <= 0) throw SolverError("bounds: signal size must be positive");
  if (!(mu > 0.0) || mu > 1.0) throw SolverError("bounds: coherence must lie in (0, 1]");
}

Index largest_total(double mu, double rhs) {
  Index s = 0;
  while (strictly_below(static_cast<double>(s + 1) * mu, rhs)) ++s;
  return s;
}

}  // namespace

BoundFlags classify_pair(Index n, double mu, Index kp, Index kq) {
  validate(n, mu);
  if (kp < 0 || kq < 0) throw SolverError("bounds: negative sparsity");
  BoundFlags f;
  const double total = static_cast<double>(kp + kq);
  const double sum_mu = total * mu;

  f.p0_unique = strictly_below(sum_mu, 1.0);
  f.p0_boundary = on_boundary(sum_mu, 1.0);

  const double tight = 2.0 * mu * mu * static_cast<double>(kp) * static_cast<double>(kq) +
                       mu * static_cast<double>(std::max(kp, kq));
  f.bp_tight = strictly_below(tight, 1.0);
  f.bp_tight_boundary = on_boundary(tight, 1.0);

  const double simple_rhs = std::sqrt(2.0) - 0.5;
  f.bp_simple = strictly_below(sum_mu, simple_rhs);
  f.bp_simple_boundary = on_boundary(sum_mu, simple_rhs);

  f.product = 2 * kp * kq < n;
  f.product_boundary = 2 * kp * kq == n;

  const Index s = kp + kq;
  f.total = s * s < 2 * n;
  f.total_boundary = s * s == 2 * n;
  return f;
}

BoundReport evaluate_bounds(Index n, double mu, Index grid_limit) {
  validate(n, mu);
  BoundReport report;
  report.n = n;
  report.mu = mu;

  Index frontier = 0;
  while ((frontier + 1) * (frontier + 1) < 2 * n) ++frontier;
  report.max_total_overall = frontier;
  report.max_total_p0 = largest_total(mu, 1.0);
  report.max_total_bp_simple = largest_total(mu, std::sqrt(2.0) - 0.5);

  report.grid_limit = (grid_limit < 0) ? frontier + 2 : grid_limit;
  report.grid.reserve(static_cast<std::size_t>((report.grid_limit + 1) * (report.grid_limit + 1)));
  for (Index kp = 0; kp <= report.grid_limit; ++kp) {
    for (Index kq = 0; kq <= report.grid_limit; ++kq) {
      report.grid.push_back({kp, kq, classify_pair(n, mu, kp, kq)});
    }
  }
  return report;
}

std::vector<BoundCurveRow> bound_curves(Index n, double mu, Index kp_limit) {
  validate(n, mu);
  if (kp_limit < 1) throw SolverError("bounds: curve limit must be positive");
  std::vector<BoundCurveRow> rows;
  rows.reserve(static_cast<std::size_t>(kp_limit));
  for (Index kp = 1; kp <= kp_limit; ++kp) {
    BoundCurveRow row;
    row.kp = kp;
    // Every condition is monotone in kq, so walk up from zero.
    for (Index kq = 0; kq <= 2 * n; ++kq) {
      const BoundFlags f = classify_pair(n, mu, kp, kq);
      if (f.p0_unique) row.p0 = kq;
      if (f.bp_tight) row.bp_tight = kq;
      if (f.bp_simple) row.bp_simple = kq;
      if (f.product) row.product = kq;
      if (f.total) row.total = kq;
      if (!f.p0_unique && !f.bp_tight && !f.bp_simple && !f.product && !f.total) break;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace prosparse
