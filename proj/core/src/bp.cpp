#include "prosparse/bp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <deque>

namespace prosparse {

namespace {

ComplexVec soft_threshold(const ComplexVec& v, double kappa) {
  ComplexVec out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    out[i] = (mag > kappa) ? v[i] * ((mag - kappa) / mag) : Complex{0.0, 0.0};
  }
  return out;
}

}  // namespace

L1Result l1_equality_solve(const ComplexMat& a, const ComplexVec& y, const L1Options& opts) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (m == 0 || n == 0 || y.size() != m) {
    throw SolverError("l1_equality_solve: inconsistent system dimensions");
  }
  if (m > n) {
    throw SolverError("l1_equality_solve: system must be underdetermined");
  }

  const ComplexMat ah = a.adjoint();
  const Eigen::LLT<ComplexMat> gram((a * ah).eval());
  if (gram.info() != Eigen::Success) {
    throw SolverError("l1_equality_solve: A A^H is not positive definite (rank-deficient rows?)");
  }
  const ComplexVec particular = ah * gram.solve(y);  // minimum-norm feasible point

  auto project = [&](const ComplexVec& v) -> ComplexVec {
    return v - ah * gram.solve((a * v).eval()) + particular;
  };

  double rho = opts.penalty;
  ComplexVec x = particular;
  ComplexVec z = x;
  ComplexVec u = ComplexVec::Zero(n);

  std::deque<double> trail;
  L1Result res;
  res.x = x;

  for (int it = 1; it <= opts.max_iter; ++it) {
    x = project(z - u);
    const ComplexVec z_old = z;
    z = soft_threshold(x + u, 1.0 / rho);
    u += x - z;

    const double r_norm = (x - z).norm();
    const double s_norm = rho * (z - z_old).norm();
    const double obj = x.lpNorm<1>();

    if (opts.trailing_window > 0) {
      trail.push_back(obj);
      if (static_cast<int>(trail.size()) > opts.trailing_window) trail.pop_front();
    }

    res.iterations = it;
    res.primal_residual = r_norm;
    res.dual_residual = s_norm;

    const double pri_scale = std::max({x.norm(), z.norm(), 1.0});
    const double dual_scale = std::max(rho * u.norm(), 1.0);
    if (r_norm <= opts.feas_tol * pri_scale && s_norm <= opts.feas_tol * dual_scale) {
      res.converged = true;
      break;
    }

    if (opts.balance_every > 0 && it % opts.balance_every == 0) {
      if (r_norm > 10.0 * s_norm) {
        rho *= 2.0;
        u *= 0.5;
      } else if (s_norm > 10.0 * r_norm) {
        rho *= 0.5;
        u *= 2.0;
      }
    }
  }

  res.x = x;
  res.objective = x.lpNorm<1>();
  res.feasibility = (a * x - y).norm();
  res.trailing_objectives.assign(trail.begin(), trail.end());
  return res;
}

std::vector<Index> threshold_support(const ComplexVec& x, double rel_tol) {
  double peak = 0.0;
  for (Index i = 0; i < x.size(); ++i) peak = std::max(peak, std::abs(x[i]));
  std::vector<Index> support;
  if (peak == 0.0) return support;
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > rel_tol * peak) support.push_back(i);
  }
  return support;
}

DebiasResult debias_on_support(const ComplexMat& a, const ComplexVec& y,
                               const std::vector<Index>& support) {
  DebiasResult out;
  if (support.empty()) {
    out.coeffs = ComplexVec();
    out.residual = y.norm();
    return out;
  }
  ComplexMat sub(a.rows(), static_cast<Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) {
    const Index col = support[j];
    if (col < 0 || col >= a.cols()) throw SolverError("debias_on_support: column out of range");
    sub.col(static_cast<Index>(j)) = a.col(col);
  }
  const auto qr = sub.colPivHouseholderQr();
  out.coeffs = qr.solve(y);
  out.residual = (sub * out.coeffs - y).norm();
  return out;
}

}  // namespace prosparse
