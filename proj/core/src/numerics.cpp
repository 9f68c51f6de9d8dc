#include "prosparse/numerics.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace prosparse {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

Complex root_of_unity(Index k, Index n) {
  k %= n;
  if (k < 0) k += n;
  return std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(n));
}

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::DegenerateRank: return "degenerate-rank";
    case RejectReason::UnstableNormalization: return "unstable-normalization";
    case RejectReason::RootCountMismatch: return "root-count-mismatch";
    case RejectReason::OffGridRoots: return "off-grid-roots";
    case RejectReason::WeightUnderflow: return "weight-underflow";
    case RejectReason::WeightFitFailed: return "weight-fit-failed";
    case RejectReason::SegmentSolveFailed: return "segment-solve-failed";
  }
  return "unknown";
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit range
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % span);
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % span);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  const double u2 = uniform01();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  spare_ = mag * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return mag * std::cos(kTwoPi * u2);
}

Complex Rng::unit_phase() { return std::polar(1.0, kTwoPi * uniform01()); }

std::vector<Index> Rng::distinct_indices(Index n, Index k) {
  if (k < 0 || k > n) throw std::invalid_argument("distinct_indices: k out of range");
  // Floyd's sampling: k draws regardless of n.
  std::vector<Index> picked;
  picked.reserve(static_cast<std::size_t>(k));
  for (Index j = n - k; j < n; ++j) {
    const Index t = static_cast<Index>(uniform_int(0, j));
    if (std::find(picked.begin(), picked.end(), t) == picked.end()) {
      picked.push_back(t);
    } else {
      picked.push_back(j);
    }
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

ComplexVec dft(const ComplexVec& v, bool inverse) {
  const Index n = v.size();
  if (n == 0) return v;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const Index sign = inverse ? -1 : 1;
  ComplexVec out(n);
  for (Index row = 0; row < n; ++row) {
    Complex acc{0.0, 0.0};
    for (Index col = 0; col < n; ++col) {
      acc += v[col] * root_of_unity(sign * row * col, n);
    }
    out[row] = acc * scale;
  }
  return out;
}

ToeplitzSystem build_toeplitz(const ComplexVec& y, Index order, Index start, bool periodic) {
  const Index n = y.size();
  if (order < 1) throw std::invalid_argument("build_toeplitz: order must be positive");
  if (periodic) {
    if (2 * order > n) throw std::invalid_argument("build_toeplitz: window longer than signal");
  } else {
    if (start < 0 || start + 2 * order > n) {
      throw std::invalid_argument("build_toeplitz: window exceeds sample range");
    }
  }
  ToeplitzSystem t;
  t.order = order;
  t.start = start;
  t.source_length = n;
  t.periodic = periodic;
  t.entries.resize(order, order + 1);
  for (Index i = 0; i < order; ++i) {
    for (Index j = 0; j <= order; ++j) {
      Index idx = start + order + i - j;
      if (periodic) {
        idx %= n;
        if (idx < 0) idx += n;
      }
      t.entries(i, j) = y[idx];
    }
  }
  return t;
}

std::variant<NullspaceVector, Reject> nullspace_vector(const ToeplitzSystem& t, double rank_tol) {
  const Index k = t.order;
  Eigen::JacobiSVD<ComplexMat> svd(t.entries, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv[0] : 0.0;
  Index rank = 0;
  if (top > 0.0) {
    for (Index i = 0; i < sv.size(); ++i) {
      if (sv[i] > rank_tol * top) ++rank;
    }
  }
  if (rank < k && rank_tol > 0.0) return Reject{RejectReason::DegenerateRank, rank};
  ComplexVec h = svd.matrixV().col(k);
  const double norm = h.norm();
  if (std::abs(h[0]) <= 1e-12 * norm) {
    return Reject{RejectReason::UnstableNormalization, rank};
  }
  h /= h[0];
  return NullspaceVector{std::move(h), rank};
}

RealVec eval_poly_on_root_grid(const ComplexVec& h, Index n) {
  const Index k = h.size() - 1;
  RealVec mags(n);
  for (Index m = 0; m < n; ++m) {
    const Complex x = root_of_unity(m, n);
    // Horner on h[0] x^K + ... + h[K], h[0] is 1 by construction.
    Complex acc = h[0];
    for (Index j = 1; j <= k; ++j) acc = acc * x + h[j];
    mags[m] = std::abs(acc);
  }
  return mags;
}

RealVec eval_poly_at_nodes(const ComplexVec& h, const ComplexVec& nodes) {
  const Index k = h.size() - 1;
  RealVec mags(nodes.size());
  for (Index m = 0; m < nodes.size(); ++m) {
    Complex acc = h[0];
    for (Index j = 1; j <= k; ++j) acc = acc * nodes[m] + h[j];
    mags[m] = std::abs(acc);
  }
  return mags;
}

namespace {

WeightSolution solve_weights_impl(const ComplexMat& vandermonde, const ComplexVec& samples) {
  Eigen::ColPivHouseholderQR<ComplexMat> qr(vandermonde);
  ComplexVec w = qr.solve(samples);
  WeightSolution out;
  out.residual = (vandermonde * w - samples).norm();
  out.weights = std::move(w);
  return out;
}

}  // namespace

WeightSolution solve_weights(const ComplexVec& roots, const ComplexVec& samples, Index start) {
  const Index k = roots.size();
  const Index m = samples.size();
  if (k == 0) throw std::invalid_argument("solve_weights: no roots");
  if (m < k) throw std::invalid_argument("solve_weights: underdetermined window");
  for (Index a = 0; a < k; ++a) {
    for (Index b = a + 1; b < k; ++b) {
      if (std::abs(roots[a] - roots[b]) < 1e-9) {
        throw std::invalid_argument("solve_weights: coincident roots");
      }
    }
  }
  // Solve against local powers roots^i, then shift the weights back by start.
  ComplexMat v(m, k);
  for (Index col = 0; col < k; ++col) {
    Complex p{1.0, 0.0};
    for (Index row = 0; row < m; ++row) {
      v(row, col) = p;
      p *= roots[col];
    }
  }
  WeightSolution out = solve_weights_impl(v, samples);
  for (Index col = 0; col < k; ++col) {
    out.weights[col] *= std::pow(roots[col], static_cast<double>(-start));
  }
  return out;
}

WeightSolution solve_weights_on_grid(const std::vector<Index>& grid, Index n,
                                     const ComplexVec& samples, Index start) {
  const Index k = static_cast<Index>(grid.size());
  const Index m = samples.size();
  if (k == 0) throw std::invalid_argument("solve_weights_on_grid: no nodes");
  if (m < k) throw std::invalid_argument("solve_weights_on_grid: underdetermined window");
  ComplexMat v(m, k);
  for (Index col = 0; col < k; ++col) {
    for (Index row = 0; row < m; ++row) {
      v(row, col) = root_of_unity(grid[static_cast<std::size_t>(col)] * (start + row), n);
    }
  }
  // Weights already referenced to global indices: the Vandermonde rows carry start.
  return solve_weights_impl(v, samples);
}

}  // namespace prosparse
