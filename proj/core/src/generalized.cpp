#include "prosparse/generalized.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "scan_util.hpp"

namespace prosparse {

namespace {

SparseCoeffs entries_above(const ComplexVec& v, double threshold) {
  SparseCoeffs out;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > threshold) out.push_back({i, v[i]});
  }
  return out;
}

bool admitted(Index n, Index s_eff, Index l, Index kq, Index tau) {
  return (s_eff + l - 1) * (kq + tau) < n + tau * l;
}

/** Refit the coefficients of an admitted support against the whole signal.
 *  Window fits carry the conditioning of their segment, so two windows that
 *  admit the same support can disagree in the last digits; the least-squares
 *  solution depends only on the support and the signal, which makes duplicates
 *  coincide exactly and tightens the reported misfit for free. */
void refit_on_support(const Dictionary& dict, const ComplexVec& y, SparseSolution& sol) {
  const Index cols = sol.kp() + sol.kq();
  if (cols == 0) return;
  ComplexMat a(y.size(), cols);
  Index c = 0;
  for (const auto& e : sol.left) a.col(c++) = dict.left->atom(e.index);
  for (const auto& e : sol.right) a.col(c++) = dict.right->atom(e.index);
  const ComplexVec coef = a.completeOrthogonalDecomposition().solve(y);
  c = 0;
  for (auto& e : sol.left) e.value = coef[c++];
  for (auto& e : sol.right) e.value = coef[c++];
  sol.resynthesis_error = (y - a * coef).cwiseAbs().maxCoeff();
}

}  // namespace

SolutionSet gen_prosparse_solve(const Dictionary& dict, const ComplexVec& y,
                                const GenSolveOptions& opts) {
  if (dict.precondition) return preconditioned_solve(dict, y, opts);
  const Index n = dict.size();
  if (y.size() != n) throw SolverError("signal length does not match the dictionary");

  const BasisPtr& psi = dict.left;
  const BasisPtr& phi = dict.right;
  const Index l = *phi->support_length();
  const Index tau = psi->periodic_windows() ? 0 : 1;

  const double yscale = y.cwiseAbs().maxCoeff();
  const double ythresh = opts.tol.zero * yscale;
  // Right-side coefficients are judged against the scale y has in that basis,
  // so "zero" means the same thing across windows.
  const ComplexVec y_in_phi = phi->solve(y);
  const double phithresh = opts.tol.zero * y_in_phi.cwiseAbs().maxCoeff();

  std::vector<SparseSolution> found;

  {
    SparseSolution trivial;
    trivial.right = entries_above(y_in_phi, phithresh);
    trivial.found = {Discovery::Pass::Trivial, 0, -1};
    trivial.resynthesis_error =
        (y - phi->apply_sparse(trivial.right)).cwiseAbs().maxCoeff();
    if (trivial.resynthesis_error > ythresh) {
      // Overlapping right atoms can let sub-threshold dust pile up; the seed is
      // unconditional, so fall back to the full inverse image.
      trivial.right = entries_above(y_in_phi, 0.0);
      trivial.resynthesis_error =
          (y - phi->apply_sparse(trivial.right)).cwiseAbs().maxCoeff();
    }
    found.push_back(std::move(trivial));
  }

  const Index limit = (opts.sweep_limit < 0) ? n : std::min(opts.sweep_limit, n);
  for (Index kp = 1; kp <= limit; ++kp) {
    const Index s = psi->segment_need(kp);
    if (s >= n) {
      // From here on a window is the whole signal: recover by inversion once
      // and stop, since larger orders cannot need fewer samples.
      const ComplexVec c_full = psi->solve(y);
      const double cscale = c_full.cwiseAbs().maxCoeff();
      SparseSolution sol;
      sol.left = entries_above(c_full, opts.tol.zero * cscale);
      const Index kp_actual = sol.kp();
      if (kp_actual > 0) {
        const ComplexVec r = y - psi->apply_sparse(sol.left);
        sol.right = entries_above(phi->solve(r), phithresh);
        const Index s_eff = std::min<Index>(n, psi->segment_need(kp_actual));
        if (admitted(n, s_eff, l, sol.kq(), tau)) {
          sol.found = {Discovery::Pass::Inversion, kp, -1};
          sol.resynthesis_error =
              (r - phi->apply_sparse(sol.right)).cwiseAbs().maxCoeff();
          if (sol.resynthesis_error <= ythresh) found.push_back(std::move(sol));
        }
      }
      break;
    }

    const Index starts = (tau == 0) ? n : n - s + 1;
    std::vector<std::optional<SparseSolution>> slots(static_cast<std::size_t>(starts));
    detail::parallel_for(starts, opts.threads, [&](Index start) {
      const ComplexVec segment = (tau == 0) ? detail::cyclic_slice(y, start, s)
                                            : ComplexVec(y.segment(start, s));
      RecoverOutcome got = psi->recover_segment(segment, start, kp, opts.tol);
      const auto* c = std::get_if<SparseCoeffs>(&got);
      if (c == nullptr || c->empty()) return;  // rejected, or the trivial side's job

      SparseSolution sol;
      sol.left = *c;
      const ComplexVec r = y - psi->apply_sparse(sol.left);
      sol.right = entries_above(phi->solve(r), phithresh);
      const Index s_eff = std::min<Index>(n, psi->segment_need(sol.kp()));
      if (!admitted(n, s_eff, l, sol.kq(), tau)) return;

      sol.found = {Discovery::Pass::Direct, kp, start};
      sol.resynthesis_error = (r - phi->apply_sparse(sol.right)).cwiseAbs().maxCoeff();
      if (sol.resynthesis_error > ythresh) return;
      slots[static_cast<std::size_t>(start)] = std::move(sol);
    });
    for (auto& slot : slots) {
      if (slot) found.push_back(std::move(*slot));
    }
  }

  for (auto& sol : found) {
    if (sol.found.pass == Discovery::Pass::Direct) refit_on_support(dict, y, sol);
  }

  return SolutionSet::assemble(std::move(found));
}

SolutionSet preconditioned_solve(const Dictionary& dict, const ComplexVec& y,
                                 const GenSolveOptions& opts) {
  if (!dict.precondition) {
    throw SolverError("preconditioned_solve needs a dictionary with a conditioning matrix");
  }
  const Index n = dict.size();
  if (y.size() != n) throw SolverError("signal length does not match the dictionary");

  const ComplexVec z = Eigen::PartialPivLU<ComplexMat>(*dict.precondition).solve(y);
  const Dictionary bare(dict.left, dict.right);
  const SolutionSet inner = gen_prosparse_solve(bare, z, opts);

  // Report misfits against the original samples, and keep the zero gate honest
  // in that domain too.
  const double ythresh = opts.tol.zero * y.cwiseAbs().maxCoeff();
  std::vector<SparseSolution> rechecked;
  for (const auto& sol : inner.items()) {
    SparseSolution copy = sol;
    copy.resynthesis_error =
        (y - dict.synthesize(copy.left, copy.right)).cwiseAbs().maxCoeff();
    if (copy.resynthesis_error <= ythresh) rechecked.push_back(std::move(copy));
  }
  return SolutionSet::assemble(std::move(rechecked));
}

Index count_clean_intervals(Index n, Index window_len, bool periodic,
                            const std::vector<std::vector<Index>>& supports) {
  if (n <= 0 || window_len <= 0 || window_len > n) {
    throw SolverError("count_clean_intervals: bad window");
  }
  std::vector<char> occupied(static_cast<std::size_t>(n), 0);
  for (const auto& support : supports) {
    for (Index idx : support) {
      if (idx < 0 || idx >= n) throw SolverError("count_clean_intervals: support range");
      occupied[static_cast<std::size_t>(idx)] = 1;
    }
  }
  const Index starts = periodic ? n : n - window_len + 1;
  Index clean = 0;
  for (Index start = 0; start < starts; ++start) {
    bool hit = false;
    for (Index i = 0; i < window_len && !hit; ++i) {
      hit = occupied[static_cast<std::size_t>((start + i) % n)] != 0;
    }
    if (!hit) ++clean;
  }
  return clean;
}

Index clean_interval_floor(Index n, Index s, Index l, Index k, int tau) {
  const Index t = static_cast<Index>(tau);
  return std::max<Index>(0, n + t * l - (s + l - 1) * (k + t));
}

}  // namespace prosparse
