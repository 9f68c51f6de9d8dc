#include "prosparse/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <utility>

#include "prosparse/numerics.hpp"
#include "prosparse/prony.hpp"
#include "scan_util.hpp"

namespace prosparse {

namespace {

/** Entries of r above threshold, in index order; dust reports the largest
 *  magnitude left behind. */
SparseCoeffs residual_spikes(const ComplexVec& r, double threshold, double* dust) {
  SparseCoeffs out;
  double worst = 0.0;
  for (Index i = 0; i < r.size(); ++i) {
    const double mag = std::abs(r[i]);
    if (mag > threshold) {
      out.push_back({i, r[i]});
    } else {
      worst = std::max(worst, mag);
    }
  }
  if (dust != nullptr) *dust = worst;
  return out;
}

/** Largest model order that can still pass 2*kp*kq < n with kq >= kp. */
Index sweep_limit(Index n) {
  const double v = std::sqrt(static_cast<double>(n) / 2.0) - 1.0;
  return std::max<Index>(0, static_cast<Index>(std::ceil(v)));
}

struct ScanParams {
  Discovery::Pass window_pass = Discovery::Pass::Direct;
  Discovery::Pass trivial_pass = Discovery::Pass::Trivial;
  bool strict = false;  // admit kp < kq only (instead of kp <= kq)
  double zero_threshold = 0.0;
};

/** One full sweep: the all-residual seed, then every model order and every
 *  cyclic window start. Window results land in per-start slots and are merged
 *  in start order, so the discovery sequence does not depend on threading.
 */
void scan_signal(const ComplexVec& s, const ScanParams& params, const SolveOptions& opts,
                 std::vector<SparseSolution>& out) {
  const Index n = s.size();

  double dust = 0.0;
  SparseCoeffs seeds = residual_spikes(s, params.zero_threshold, &dust);
  if (!params.strict || !seeds.empty()) {
    SparseSolution trivial;
    trivial.right = std::move(seeds);
    trivial.found = {params.trivial_pass, 0, -1};
    trivial.resynthesis_error = dust;
    out.push_back(std::move(trivial));
  }

  const Index limit = std::min(sweep_limit(n), n / 2);
  for (Index kp = 1; kp <= limit; ++kp) {
    std::vector<std::optional<SparseSolution>> slots(static_cast<std::size_t>(n));
    detail::parallel_for(n, opts.threads, [&](Index start) {
      const ComplexVec segment = detail::cyclic_slice(s, start, 2 * kp);
      auto fit = prony_fit(segment, kp, n, start, true, opts.tol);
      const auto* model = std::get_if<PronyModel>(&fit);
      if (model == nullptr) return;

      const ComplexVec r = s - model->resynthesize(0, n);
      double window_dust = 0.0;
      SparseCoeffs right = residual_spikes(r, params.zero_threshold, &window_dust);
      const Index kq = static_cast<Index>(right.size());
      const bool order_ok = params.strict ? (kp < kq) : (kp <= kq);
      if (!order_ok || 2 * kp * kq >= n) return;

      SparseSolution sol;
      sol.left = fourier_coeffs_from_model(*model, n);
      sol.right = std::move(right);
      sol.found = {params.window_pass, kp, start};
      sol.resynthesis_error = window_dust;
      slots[static_cast<std::size_t>(start)] = std::move(sol);
    });
    for (auto& slot : slots) {
      if (slot) out.push_back(std::move(*slot));
    }
  }
}

ComplexVec resynthesize_pair(const SparseCoeffs& left, const SparseCoeffs& right, Index n) {
  ComplexVec yhat = ComplexVec::Zero(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (const auto& e : left) {
    for (Index i = 0; i < n; ++i) yhat[i] += e.value * scale * root_of_unity(i * e.index, n);
  }
  for (const auto& e : right) yhat[e.index] += e.value;
  return yhat;
}

}  // namespace

const char* to_string(Discovery::Pass pass) {
  switch (pass) {
    case Discovery::Pass::Trivial: return "trivial";
    case Discovery::Pass::Direct: return "direct";
    case Discovery::Pass::Dual: return "dual";
    case Discovery::Pass::Inversion: return "inversion";
  }
  return "unknown";
}

std::vector<Index> support_of(const SparseCoeffs& coeffs) {
  std::vector<Index> support;
  support.reserve(coeffs.size());
  for (const auto& e : coeffs) support.push_back(e.index);
  return support;
}

SolutionSet SolutionSet::assemble(std::vector<SparseSolution> discovered, double match_tol) {
  std::map<std::pair<std::vector<Index>, std::vector<Index>>, std::size_t> seen;
  std::vector<SparseSolution> kept;
  for (auto& sol : discovered) {
    auto key = std::make_pair(support_of(sol.left), support_of(sol.right));
    auto [it, inserted] = seen.emplace(std::move(key), kept.size());
    if (inserted) {
      kept.push_back(std::move(sol));
      continue;
    }
    const SparseSolution& first = kept[it->second];
    double scale = 0.0;
    for (const auto& e : first.left) scale = std::max(scale, std::abs(e.value));
    for (const auto& e : first.right) scale = std::max(scale, std::abs(e.value));
    scale = std::max(scale, 1e-300);
    double worst = 0.0;
    auto measure = [&](const SparseCoeffs& a, const SparseCoeffs& b) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i].value - b[i].value));
      }
    };
    measure(first.left, sol.left);
    measure(first.right, sol.right);
    if (worst > match_tol * scale) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", worst / scale);
      throw SolverError(std::string("two discoveries of the same support disagree on "
                                    "coefficients by ") +
                        buf + " relative");
    }
  }

  std::sort(kept.begin(), kept.end(), [](const SparseSolution& a, const SparseSolution& b) {
    const Index ta = a.kp() + a.kq();
    const Index tb = b.kp() + b.kq();
    if (ta != tb) return ta < tb;
    if (a.kp() != b.kp()) return a.kp() < b.kp();
    const auto la = support_of(a.left);
    const auto lb = support_of(b.left);
    if (la != lb) return la < lb;
    return support_of(a.right) < support_of(b.right);
  });

  SolutionSet set;
  set.items_ = std::move(kept);
  return set;
}

const SparseSolution* SolutionSet::find(const std::vector<Index>& left_support,
                                        const std::vector<Index>& right_support) const {
  for (const auto& sol : items_) {
    if (support_of(sol.left) == left_support && support_of(sol.right) == right_support) {
      return &sol;
    }
  }
  return nullptr;
}

SolutionSet SolutionSet::filtered_by_total(Index k_max) const {
  SolutionSet out;
  for (const auto& sol : items_) {
    if (sol.kp() + sol.kq() <= k_max) out.items_.push_back(sol);
  }
  return out;
}

SolutionSet prosparse_solve(const ComplexVec& y, const SolveOptions& opts) {
  const Index n = y.size();
  if (n <= 0) throw SolverError("cannot solve an empty signal");
  const double yscale = y.cwiseAbs().maxCoeff();
  const double ythresh = opts.tol.zero * yscale;

  std::vector<SparseSolution> found;

  ScanParams direct;
  direct.window_pass = Discovery::Pass::Direct;
  direct.trivial_pass = Discovery::Pass::Trivial;
  direct.strict = false;
  direct.zero_threshold = ythresh;
  scan_signal(y, direct, opts, found);

  // Scanning the spectrum covers the representations whose heavy side lies on
  // the spike basis. The spectrum signal obeys the same union-of-bases model
  // with the roles swapped and everything conjugated, so each finding maps back
  // by swapping sides and conjugating values. The strict order gate keeps the
  // two sweeps from claiming the same region twice.
  const ComplexVec ytilde = dft(y.conjugate().eval(), false);
  ScanParams dual;
  dual.window_pass = Discovery::Pass::Dual;
  // The mapped all-left seed is still a trivial representation; label it so.
  dual.trivial_pass = Discovery::Pass::Trivial;
  dual.strict = true;
  dual.zero_threshold = opts.tol.zero * ytilde.cwiseAbs().maxCoeff();

  std::vector<SparseSolution> dual_found;
  scan_signal(ytilde, dual, opts, dual_found);
  for (auto& ds : dual_found) {
    SparseSolution sol;
    sol.left.reserve(ds.right.size());
    sol.right.reserve(ds.left.size());
    for (const auto& e : ds.right) sol.left.push_back({e.index, std::conj(e.value)});
    for (const auto& e : ds.left) sol.right.push_back({e.index, std::conj(e.value)});
    sol.found = ds.found;

    const double err = (y - resynthesize_pair(sol.left, sol.right, n)).cwiseAbs().maxCoeff();
    if (err > ythresh) continue;  // a spectrum finding that does not survive the round trip
    sol.resynthesis_error = err;
    found.push_back(std::move(sol));
  }

  return SolutionSet::assemble(std::move(found));
}

SolutionSet total_sparsity_solve(const ComplexVec& y, Index k_max, const SolveOptions& opts) {
  return prosparse_solve(y, opts).filtered_by_total(k_max);
}

Index count_clean_windows(Index n, Index window_len, const std::vector<Index>& spikes) {
  if (n <= 0 || window_len <= 0 || window_len > n) {
    throw SolverError("count_clean_windows: bad window");
  }
  for (std::size_t i = 0; i < spikes.size(); ++i) {
    if (spikes[i] < 0 || spikes[i] >= n) throw SolverError("count_clean_windows: spike range");
    if (i > 0 && spikes[i] <= spikes[i - 1]) {
      throw SolverError("count_clean_windows: spikes must be sorted and distinct");
    }
  }
  if (spikes.empty()) return n;

  Index total = 0;
  const Index k = static_cast<Index>(spikes.size());
  for (Index i = 0; i < k; ++i) {
    const Index cur = spikes[static_cast<std::size_t>(i)];
    const Index next = (i + 1 < k) ? spikes[static_cast<std::size_t>(i + 1)] : spikes[0] + n;
    const Index gap = next - cur - 1;
    total += std::max<Index>(0, gap - window_len + 1);
  }
  return total;
}

Index clean_window_floor(Index n, Index kp, Index kq) {
  return std::max<Index>(0, n - 2 * kp * kq);
}

}  // namespace prosparse
