#include "prosparse/prony.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <functional>
#include <cmath>
#include <numbers>
#include <numeric>

namespace prosparse {

namespace {

Complex grid_node(Index k, Index n) { return root_of_unity(k, n); }

/** The k candidates with the smallest polynomial magnitude, plus how they sit
 *  against the scaled tolerance. Ties at the cut are broken by ascending index
 *  so the selection is deterministic.
 */
struct RootRanking {
  std::vector<Index> chosen;  // k best candidates, ascending index
  Index passing = 0;          // candidates at or under the tolerance
  bool all_under = false;     // every chosen candidate is under the tolerance
};

RootRanking rank_roots(const RealVec& mags, Index k, double scaled_tol) {
  const Index m = mags.size();
  RootRanking out;
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return mags[a] < mags[b]; });
  out.chosen.assign(order.begin(), order.begin() + k);
  for (Index i = 0; i < m; ++i) {
    if (mags[i] <= scaled_tol) ++out.passing;
  }
  out.all_under = true;
  for (Index idx : out.chosen) {
    if (mags[idx] > scaled_tol) out.all_under = false;
  }
  std::sort(out.chosen.begin(), out.chosen.end());
  return out;
}

struct CoreFit {
  std::vector<Index> picked;  // candidate indices
  ComplexVec weights;
};

/** Annihilator with a one-shot rescue. Tightly clustered modes can sink the
 *  Toeplitz spectrum below the rank gate even though the trailing singular
 *  vector still annihilates the data, so when the gate trips at a positive
 *  rank the gateless candidate is taken anyway and the caller's snap and
 *  reproduction checks judge it. The gated diagnosis rides along so a failed
 *  rescue reports the rank story rather than the retry's side effects.
 */
struct AnnihilatorAttempt {
  ComplexVec h;
  bool rescued = false;
  Reject diagnosis{RejectReason::DegenerateRank};  // meaningful when rescued
};

std::variant<AnnihilatorAttempt, Reject> annihilator_with_rescue(const ToeplitzSystem& t,
                                                                 const Tolerances& tol) {
  auto gated = nullspace_vector(t, tol.rank);
  if (auto* nv = std::get_if<NullspaceVector>(&gated)) {
    return AnnihilatorAttempt{std::move(nv->h), false, Reject{RejectReason::DegenerateRank}};
  }
  const Reject rej = std::get<Reject>(gated);
  if (rej.reason != RejectReason::DegenerateRank || rej.rank <= 0) return rej;
  auto forced = nullspace_vector(t, 0.0);
  if (auto* nv = std::get_if<NullspaceVector>(&forced)) {
    return AnnihilatorAttempt{std::move(nv->h), true, rej};
  }
  return rej;
}

/** Shared pipeline tail: candidate scoring -> weights -> window reproduction
 *  guard. weigh() solves for the weights of a picked node subset.
 */
std::variant<CoreFit, Reject> fit_against_candidates(const ComplexVec& segment, Index k,
                                                     const RealVec& mags, const ComplexVec& h,
                                                     const std::function<WeightSolution(const std::vector<Index>&)>& weigh,
                                                     const Tolerances& tol) {
  if (mags.size() < k) return Reject{RejectReason::RootCountMismatch};
  double habs = 0.0;
  for (Index i = 1; i < h.size(); ++i) habs += std::abs(h[i]);
  const double scaled_tol = tol.root * (1.0 + habs);
  const RootRanking ranking = rank_roots(mags, k, scaled_tol);
  if (!ranking.all_under && ranking.passing == 0) {
    // Nothing even resembles a root; skip the weight solve entirely.
    return Reject{RejectReason::OffGridRoots};
  }
  // A partial snap (some candidates under the cut, some over) is the signature
  // of clustered roots flattening the polynomial: the magnitude cut is only a
  // fast filter, so run the best-ranked candidates through the reproduction
  // check and let that decide.

  const double seg_scale = segment.cwiseAbs().maxCoeff();
  WeightSolution ws = weigh(ranking.chosen);
  for (Index i = 0; i < ws.weights.size(); ++i) {
    if (std::abs(ws.weights[i]) <= tol.weight_floor * seg_scale) {
      return Reject{ranking.all_under ? RejectReason::WeightUnderflow
                                      : RejectReason::RootCountMismatch};
    }
  }
  // Reproduce the window from the fitted model; a bad fit rejects here even if
  // the algebra upstream looked plausible.
  if (ws.residual > tol.resynth * seg_scale * std::sqrt(static_cast<double>(segment.size()))) {
    return Reject{ranking.all_under ? RejectReason::WeightFitFailed
                                    : RejectReason::RootCountMismatch};
  }
  CoreFit out;
  out.picked = ranking.chosen;
  out.weights = std::move(ws.weights);
  return out;
}

}  // namespace

ComplexVec PronyModel::resynthesize(Index start, Index count) const {
  ComplexVec out = ComplexVec::Zero(count);
  if (on_grid()) {
    for (Index k = 0; k < order; ++k) {
      const Index m = grid_indices[static_cast<std::size_t>(k)];
      for (Index i = 0; i < count; ++i) {
        out[i] += weights[k] * grid_node(m * (start + i), signal_length);
      }
    }
  } else {
    for (Index k = 0; k < order; ++k) {
      Complex p = std::pow(roots[k], static_cast<double>(start));
      for (Index i = 0; i < count; ++i) {
        out[i] += weights[k] * p;
        p *= roots[k];
      }
    }
  }
  return out;
}

PronyOutcome prony_fit(const ComplexVec& segment, Index k, Index n, Index start,
                       bool require_grid, const Tolerances& tol) {
  if (k < 1) throw std::invalid_argument("prony_fit: order must be positive");
  if (segment.size() != 2 * k) throw std::invalid_argument("prony_fit: segment must hold 2K samples");

  ToeplitzSystem t = build_toeplitz(segment, k, 0, false);
  t.start = start;  // bookkeeping only; the slice already starts at the window

  if (require_grid) {
    auto ann = annihilator_with_rescue(t, tol);
    if (std::holds_alternative<Reject>(ann)) return std::get<Reject>(ann);
    AnnihilatorAttempt& att = std::get<AnnihilatorAttempt>(ann);
    const ComplexVec h = std::move(att.h);
    const RealVec mags = eval_poly_on_root_grid(h, n);
    auto fit = fit_against_candidates(
        segment, k, mags, h,
        [&](const std::vector<Index>& picked) {
          return solve_weights_on_grid(picked, n, segment, start);
        },
        tol);
    if (std::holds_alternative<Reject>(fit)) {
      return att.rescued ? att.diagnosis : std::get<Reject>(fit);
    }
    CoreFit& core = std::get<CoreFit>(fit);
    PronyModel model;
    model.order = k;
    model.signal_length = n;
    model.grid_indices = std::move(core.picked);
    model.roots.resize(k);
    for (Index i = 0; i < k; ++i) {
      model.roots[i] = grid_node(model.grid_indices[static_cast<std::size_t>(i)], n);
    }
    model.weights = std::move(core.weights);
    return model;
  }

  // Free roots via the companion matrix of the annihilator. No snap check
  // exists off grid, so the rank gate stays mandatory here: without it any
  // 2K samples would fit K generic modes.
  auto null_res = nullspace_vector(t, tol.rank);
  if (std::holds_alternative<Reject>(null_res)) return std::get<Reject>(null_res);
  const ComplexVec h = std::move(std::get<NullspaceVector>(null_res).h);
  ComplexMat companion = ComplexMat::Zero(k, k);
  for (Index i = 0; i < k; ++i) companion(0, i) = -h[i + 1];
  for (Index i = 1; i < k; ++i) companion(i, i - 1) = Complex{1.0, 0.0};
  Eigen::ComplexEigenSolver<ComplexMat> es(companion, false);
  if (es.info() != Eigen::Success) return Reject{RejectReason::RootCountMismatch};
  ComplexVec roots = es.eigenvalues();
  for (Index a = 0; a < k; ++a) {
    for (Index b = a + 1; b < k; ++b) {
      if (std::abs(roots[a] - roots[b]) < 1e-9) return Reject{RejectReason::RootCountMismatch};
    }
  }
  std::sort(roots.data(), roots.data() + roots.size(), [](const Complex& a, const Complex& b) {
    const double pa = std::arg(a);
    const double pb = std::arg(b);
    return pa != pb ? pa < pb : std::abs(a) < std::abs(b);
  });
  WeightSolution ws = solve_weights(roots, segment, start);
  const double seg_scale = segment.cwiseAbs().maxCoeff();
  for (Index i = 0; i < ws.weights.size(); ++i) {
    if (std::abs(ws.weights[i]) <= tol.weight_floor * seg_scale) {
      return Reject{RejectReason::WeightUnderflow};
    }
  }
  if (ws.residual > tol.resynth * seg_scale * std::sqrt(static_cast<double>(segment.size()))) {
    return Reject{RejectReason::WeightFitFailed};
  }
  PronyModel model;
  model.order = k;
  model.signal_length = 0;
  model.roots = std::move(roots);
  model.weights = std::move(ws.weights);
  return model;
}

PronyOutcome prony_fit_nodes(const ComplexVec& segment, Index k, const ComplexVec& nodes,
                             Index start, const Tolerances& tol) {
  if (k < 1) throw std::invalid_argument("prony_fit_nodes: order must be positive");
  if (segment.size() != 2 * k) throw std::invalid_argument("prony_fit_nodes: segment must hold 2K samples");
  if (nodes.size() < k) return Reject{RejectReason::RootCountMismatch};

  ToeplitzSystem t = build_toeplitz(segment, k, 0, false);
  t.start = start;
  auto ann = annihilator_with_rescue(t, tol);
  if (std::holds_alternative<Reject>(ann)) return std::get<Reject>(ann);
  AnnihilatorAttempt& att = std::get<AnnihilatorAttempt>(ann);
  const ComplexVec h = std::move(att.h);

  const RealVec mags = eval_poly_at_nodes(h, nodes);
  auto fit = fit_against_candidates(
      segment, k, mags, h,
      [&](const std::vector<Index>& picked) {
        ComplexVec chosen(k);
        for (Index i = 0; i < k; ++i) chosen[i] = nodes[picked[static_cast<std::size_t>(i)]];
        return solve_weights(chosen, segment, start);
      },
      tol);
  if (std::holds_alternative<Reject>(fit)) {
    return att.rescued ? att.diagnosis : std::get<Reject>(fit);
  }
  CoreFit& core = std::get<CoreFit>(fit);
  PronyModel model;
  model.order = k;
  model.signal_length = 0;
  model.grid_indices = std::move(core.picked);
  model.roots.resize(k);
  for (Index i = 0; i < k; ++i) {
    model.roots[i] = nodes[model.grid_indices[static_cast<std::size_t>(i)]];
  }
  model.weights = std::move(core.weights);
  return model;
}

SparseCoeffs fourier_coeffs_from_model(const PronyModel& model, Index n) {
  if (!model.on_grid()) throw std::invalid_argument("fourier_coeffs_from_model: model is off grid");
  const double scale = std::sqrt(static_cast<double>(n));
  SparseCoeffs out;
  out.reserve(static_cast<std::size_t>(model.order));
  for (Index i = 0; i < model.order; ++i) {
    out.push_back({model.grid_indices[static_cast<std::size_t>(i)], model.weights[i] * scale});
  }
  std::sort(out.begin(), out.end(), [](const CoeffEntry& a, const CoeffEntry& b) {
    return a.index < b.index;
  });
  return out;
}

ComplexMat FactorizedBasis::dense_synthesis() const {
  // Psi = Lambda V S assembled column by column: column c of S mixes nodes.
  ComplexMat psi = ComplexMat::Zero(n, n);
  for (Index col = 0; col < n; ++col) {
    for (const auto& [row, value] : mixing[static_cast<std::size_t>(col)]) {
      Complex p{1.0, 0.0};
      for (Index i = 0; i < n; ++i) {
        psi(i, col) += lambda[i] * value * p;
        p *= nodes[row];
      }
    }
  }
  return psi;
}

void FactorizedBasis::validate() const {
  if (n < 1) throw std::invalid_argument("factorized basis: empty signal");
  if (lambda.size() != n) throw std::invalid_argument("factorized basis: lambda length mismatch");
  if (nodes.size() != modes) throw std::invalid_argument("factorized basis: node count mismatch");
  if (static_cast<Index>(mixing.size()) != n) {
    throw std::invalid_argument("factorized basis: mixing must have one column per coefficient");
  }
  for (Index i = 0; i < n; ++i) {
    if (std::abs(lambda[i]) < 1e-300) throw std::invalid_argument("factorized basis: zero lambda entry");
  }
  for (Index a = 0; a < modes; ++a) {
    for (Index b = a + 1; b < modes; ++b) {
      if (std::abs(nodes[a] - nodes[b]) < 1e-9) {
        throw std::invalid_argument("factorized basis: coincident nodes");
      }
    }
  }
  for (const auto& column : mixing) {
    if (static_cast<Index>(column.size()) > expansion) {
      throw std::invalid_argument("factorized basis: column exceeds declared expansion");
    }
    for (const auto& [row, value] : column) {
      (void)value;
      if (row < 0 || row >= modes) throw std::invalid_argument("factorized basis: mixing row out of range");
    }
  }
  // Invertibility estimate on the assembled matrix.
  const ComplexMat psi = dense_synthesis();
  Eigen::PartialPivLU<ComplexMat> lu(psi);
  const double det_mag = std::abs(lu.determinant());
  if (!(det_mag > 0.0) || !std::isfinite(det_mag)) {
    throw std::invalid_argument("factorized basis: synthesis matrix is singular");
  }
}

namespace {

/** Node-domain sparse vector recovered from a normalized segment. */
std::variant<CoreFit, Reject> fit_modes(const ComplexVec& z, Index order, const FactorizedBasis& basis,
                                        Index start, const Tolerances& tol) {
  auto outcome = prony_fit_nodes(z.head(2 * order), order, basis.nodes, start, tol);
  if (std::holds_alternative<Reject>(outcome)) return std::get<Reject>(outcome);
  PronyModel& model = std::get<PronyModel>(outcome);
  CoreFit fit;
  fit.picked = std::move(model.grid_indices);
  fit.weights = std::move(model.weights);
  return fit;
}

}  // namespace

std::variant<SparseCoeffs, Reject> generalized_prony_fit(const ComplexVec& segment, Index start,
                                                         const FactorizedBasis& basis, Index k,
                                                         const Tolerances& tol) {
  if (k < 1) throw std::invalid_argument("generalized_prony_fit: order must be positive");
  const Index need = basis.segment_need(k);

  if (need >= basis.n) {
    // Whole signal available: dense inversion replaces the mode fit.
    if (segment.size() != basis.n || start != 0) {
      throw std::invalid_argument("generalized_prony_fit: full signal required at this order");
    }
    const ComplexMat psi = basis.dense_synthesis();
    ComplexVec c = Eigen::PartialPivLU<ComplexMat>(psi).solve(segment);
    const double scale = c.cwiseAbs().maxCoeff();
    SparseCoeffs out;
    for (Index i = 0; i < c.size(); ++i) {
      if (std::abs(c[i]) > tol.zero * scale) out.push_back({i, c[i]});
    }
    return out;
  }

  if (segment.size() != need) {
    throw std::invalid_argument("generalized_prony_fit: segment must hold 2DK samples");
  }
  if (start < 0 || start + need > basis.n) {
    throw std::invalid_argument("generalized_prony_fit: window out of range");
  }

  // Normalize by the diagonal so the samples become a pure exponential sum.
  ComplexVec z(need);
  for (Index i = 0; i < need; ++i) z[i] = segment[i] / basis.lambda[start + i];

  Index order = need / 2;  // DK
  auto fit = fit_modes(z, order, basis, start, tol);
  if (std::holds_alternative<Reject>(fit)) {
    const Reject r = std::get<Reject>(fit);
    // Fewer active modes than the worst case is legitimate; refit at the
    // revealed rank (an upper bound on the order is all the method needs).
    if (r.reason != RejectReason::DegenerateRank || r.rank <= 0) {
      if (r.reason == RejectReason::DegenerateRank && r.rank == 0) return SparseCoeffs{};
      return r;
    }
    order = r.rank;
    fit = fit_modes(z, order, basis, start, tol);
    if (std::holds_alternative<Reject>(fit)) return std::get<Reject>(fit);
  }
  CoreFit& core = std::get<CoreFit>(fit);

  // Fold node weights back to coefficients: x = S c with x supported on the
  // picked nodes. The least-squares system spans every row a candidate column
  // touches, so rows outside the picked set act as explicit zero constraints.
  std::vector<Index> candidate_cols;
  std::vector<Index> touched = core.picked;
  for (Index col = 0; col < basis.n; ++col) {
    bool hits = false;
    for (const auto& [row, value] : basis.mixing[static_cast<std::size_t>(col)]) {
      (void)value;
      if (std::binary_search(core.picked.begin(), core.picked.end(), row)) {
        hits = true;
        break;
      }
    }
    if (hits) {
      candidate_cols.push_back(col);
      for (const auto& [row, value] : basis.mixing[static_cast<std::size_t>(col)]) {
        (void)value;
        touched.push_back(row);
      }
    }
  }
  if (candidate_cols.empty()) return SparseCoeffs{};
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

  const Index rows = static_cast<Index>(touched.size());
  const Index cols = static_cast<Index>(candidate_cols.size());
  ComplexMat s_sub = ComplexMat::Zero(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (const auto& [row, value] : basis.mixing[static_cast<std::size_t>(candidate_cols[static_cast<std::size_t>(j)])]) {
      const auto it = std::lower_bound(touched.begin(), touched.end(), row);
      s_sub(static_cast<Index>(it - touched.begin()), j) = value;
    }
  }
  ComplexVec x = ComplexVec::Zero(rows);
  for (std::size_t i = 0; i < core.picked.size(); ++i) {
    const auto it = std::lower_bound(touched.begin(), touched.end(), core.picked[i]);
    x[static_cast<Index>(it - touched.begin())] = core.weights[static_cast<Index>(i)];
  }
  Eigen::ColPivHouseholderQR<ComplexMat> qr(s_sub);
  ComplexVec c_sub = qr.solve(x);
  const double fold_residual = (s_sub * c_sub - x).norm();
  if (fold_residual > tol.resynth * (1.0 + x.norm())) {
    return Reject{RejectReason::SegmentSolveFailed};
  }

  const double scale = std::max(c_sub.cwiseAbs().maxCoeff(), 1e-300);
  SparseCoeffs out;
  for (Index j = 0; j < cols; ++j) {
    if (std::abs(c_sub[j]) > tol.zero * scale) {
      out.push_back({candidate_cols[static_cast<std::size_t>(j)], c_sub[j]});
    }
  }
  return out;
}

}  // namespace prosparse
