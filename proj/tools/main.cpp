// Command-line front end: instance generation, solving, single-window fits,
// bound tables, the l1 baseline, recovery-rate benchmarks, and a self test.
// All subcommands read stdin / write stdout unless --in / --out name files.
//
// Exit codes: 0 success, 1 malformed input (or an empty solve without
// --allow-empty), 2 solver invariant violation, 3 baseline non-convergence.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "prosparse/bases.hpp"
#include "prosparse/bounds.hpp"
#include "prosparse/bp.hpp"
#include "prosparse/fixtures.hpp"
#include "prosparse/generalized.hpp"
#include "prosparse/io.hpp"
#include "prosparse/numerics.hpp"
#include "prosparse/prony.hpp"
#include "prosparse/solver.hpp"

namespace {

using namespace prosparse;
using OrderedJson = nlohmann::ordered_json;

struct GlobalOptions {
  double tol_rank = Tolerances{}.rank;
  double tol_root = Tolerances{}.root;
  double tol_zero = Tolerances{}.zero;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string in = "-";
  std::string out = "-";
  std::string format;  // empty = subcommand default
};

Tolerances tolerances_of(const GlobalOptions& g) {
  Tolerances tol;
  tol.rank = g.tol_rank;
  tol.root = g.tol_root;
  tol.zero = g.tol_zero;
  return tol;
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin),
                       std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.good()) throw std::runtime_error("cannot write " + path);
  out << text;
}

void require_format(const GlobalOptions& g, const std::string& supported) {
  if (!g.format.empty() && g.format != supported) {
    throw std::invalid_argument("this subcommand only writes " + supported);
  }
}

OrderedJson coeffs_json(const SparseCoeffs& coeffs) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& e : coeffs) {
    OrderedJson entry;
    entry["index"] = e.index;
    entry["coeff"] = OrderedJson::array({e.value.real(), e.value.imag()});
    arr.push_back(std::move(entry));
  }
  return arr;
}

ComplexVec cyclic_window(const ComplexVec& y, Index start, Index len) {
  const Index n = y.size();
  ComplexVec out(len);
  for (Index i = 0; i < len; ++i) out[i] = y[((start + i) % n + n) % n];
  return out;
}

/** Calibrated spec for a seeded Gaussian pair; other kinds pass through. */
DictSpec finalize_spec(DictSpec spec, Index n, std::uint64_t seed) {
  if (spec.kind == "gaussian-canonical" && !spec.calibration) {
    spec.seed = seed;
    spec.calibration = gaussian_calibrate(n, seed, 1, 4, 0.95, seed + 1, 20);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string dict_kind;  // overrides the instance's dictionary kind
  Index block = 0;
  Index sweep_limit = -1;
  bool allow_empty = false;
};

int run_solve(const GlobalOptions& g, const SolveArgs& args) {
  require_format(g, "json");
  InstanceFile instance = instance_from_json(read_input(g.in));
  DictSpec spec = instance.dict;
  if (!args.dict_kind.empty()) {
    spec = DictSpec{};
    spec.kind = args.dict_kind;
    spec.block = args.block > 0 ? args.block : instance.dict.block;
    spec.seed = instance.dict.seed;
    spec.calibration = instance.dict.calibration;
    spec.factorization = instance.dict.factorization;
    spec.precondition = instance.dict.precondition;
  }

  SolutionSet solutions;
  if (spec.kind == "fourier-canonical" && !spec.precondition) {
    SolveOptions opts;
    opts.tol = tolerances_of(g);
    opts.threads = g.threads;
    solutions = prosparse_solve(instance.samples, opts);
  } else {
    Dictionary dict = make_dictionary(spec, instance.n);
    GenSolveOptions opts;
    opts.tol = tolerances_of(g);
    opts.threads = g.threads;
    opts.sweep_limit = args.sweep_limit;
    solutions = gen_prosparse_solve(dict, instance.samples, opts);
  }

  SolutionFile file{instance.n, spec, tolerances_of(g), solutions.items()};
  write_output(g.out, to_json(file));

  const bool nontrivial =
      std::any_of(solutions.items().begin(), solutions.items().end(), [](const SparseSolution& s) {
        return s.found.pass == Discovery::Pass::Direct || s.found.pass == Discovery::Pass::Dual;
      });
  return (nontrivial || args.allow_empty) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// prony

struct PronyArgs {
  Index order = 1;
  Index start = 0;
  bool free_roots = false;
};

int run_prony(const GlobalOptions& g, const PronyArgs& args) {
  require_format(g, "json");
  InstanceFile instance = instance_from_json(read_input(g.in));
  if (args.order < 1 || 2 * args.order > instance.n) {
    throw std::invalid_argument("order must satisfy 1 <= order <= n/2");
  }
  const ComplexVec segment = cyclic_window(instance.samples, args.start, 2 * args.order);
  auto outcome = prony_fit(segment, args.order, instance.n, args.start, !args.free_roots,
                           tolerances_of(g));

  OrderedJson j;
  j["schema_version"] = 1;
  j["kind"] = "prony-fit";
  j["version"] = kToolVersion;
  j["n"] = instance.n;
  j["order"] = args.order;
  j["start"] = args.start;
  j["grid"] = !args.free_roots;
  if (const auto* rej = std::get_if<Reject>(&outcome)) {
    j["outcome"] = "reject";
    j["reason"] = to_string(rej->reason);
  } else {
    const PronyModel& model = std::get<PronyModel>(outcome);
    j["outcome"] = "model";
    if (model.on_grid()) j["indices"] = model.grid_indices;
    OrderedJson roots = OrderedJson::array();
    for (Index i = 0; i < model.order; ++i) {
      roots.push_back(OrderedJson::array({model.roots[i].real(), model.roots[i].imag()}));
    }
    j["roots"] = std::move(roots);
    OrderedJson weights = OrderedJson::array();
    for (Index i = 0; i < model.order; ++i) {
      weights.push_back(OrderedJson::array({model.weights[i].real(), model.weights[i].imag()}));
    }
    j["weights"] = std::move(weights);
    const ComplexVec back = model.resynthesize(args.start, segment.size());
    j["window_error"] = (back - segment).cwiseAbs().maxCoeff();
  }
  write_output(g.out, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
  Index n = 0;
  double mu = 0.0;  // 0 = 1/sqrt(n)
  Index grid_limit = -1;
  bool curves = false;
};

int run_bounds(const GlobalOptions& g, const BoundsArgs& args) {
  if (args.n < 1) throw std::invalid_argument("bounds needs --n >= 1");
  const double mu = args.mu > 0.0 ? args.mu : 1.0 / std::sqrt(static_cast<double>(args.n));
  if (args.curves) {
    require_format(g, "csv");
    const Index kp_limit = args.grid_limit > 0 ? args.grid_limit : args.n / 2;
    write_output(g.out, bounds_curves_csv(args.n, mu, bound_curves(args.n, mu, kp_limit)));
    return 0;
  }
  const BoundReport report = evaluate_bounds(args.n, mu, args.grid_limit);
  if (g.format == "json") {
    OrderedJson j;
    j["schema_version"] = 1;
    j["kind"] = "bounds";
    j["version"] = kToolVersion;
    j["n"] = report.n;
    j["mu"] = report.mu;
    j["grid_limit"] = report.grid_limit;
    j["max_total_p0"] = report.max_total_p0;
    j["max_total_bp_simple"] = report.max_total_bp_simple;
    j["max_total_overall"] = report.max_total_overall;
    write_output(g.out, j.dump(2) + "\n");
    return 0;
  }
  write_output(g.out, bounds_grid_csv(report));
  return 0;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string kind;
  Index d = 4;
  Index n = 64;
  Index kp = 2;
  Index kq = 3;
  std::string dict_kind = "fourier-canonical";
  Index block = 8;
};

int run_generate(const GlobalOptions& g, const GenerateArgs& args) {
  require_format(g, "json");
  InstanceFile out;
  out.provenance.generator = "generate " + args.kind;
  out.provenance.seed = g.seed;
  out.provenance.timestamp = current_timestamp();

  if (args.kind == "counterexample-bp") {
    CounterexampleInstance ce = make_bp_counterexample(args.d);
    out.n = ce.n;
    out.samples = ce.instance.samples;
    out.known.push_back({ce.instance.left, ce.instance.right});
    out.known.push_back({ce.alt_left, ce.alt_right});
  } else if (args.kind == "two-solution") {
    TwoSolutionInstance ts = make_two_solution_instance(args.d, g.seed);
    out.n = ts.n;
    out.samples = ts.instance.samples;
    out.known.push_back({ts.instance.left, ts.instance.right});
    out.known.push_back({ts.alt_left, ts.alt_right});
  } else if (args.kind == "planted") {
    DictSpec spec;
    spec.kind = args.dict_kind;
    spec.block = args.block;
    spec = finalize_spec(std::move(spec), args.n, g.seed);
    Rng rng(g.seed);
    PlantedInstance planted;
    if (spec.kind == "fourier-canonical") {
      planted = make_random_planted_fourier(args.n, args.kp, args.kq, rng);
    } else {
      planted = make_random_planted(make_dictionary(spec, args.n), args.kp, args.kq, rng);
    }
    out.n = args.n;
    out.dict = std::move(spec);
    out.samples = planted.samples;
    out.known.push_back({planted.left, planted.right});
  } else if (args.kind == "zero") {
    out.n = args.n;
    out.samples = ComplexVec::Zero(args.n);
  } else {
    throw std::invalid_argument(
        "unknown generate kind (counterexample-bp, two-solution, planted, zero): " + args.kind);
  }
  write_output(g.out, to_json(out));
  return 0;
}

// ---------------------------------------------------------------------------
// bp

struct BpArgs {
  double feas_tol = L1Options{}.feas_tol;
  int max_iter = L1Options{}.max_iter;
  double penalty = L1Options{}.penalty;
};

int run_bp(const GlobalOptions& g, const BpArgs& args) {
  require_format(g, "json");
  InstanceFile instance = instance_from_json(read_input(g.in));
  Dictionary dict = make_dictionary(instance.dict, instance.n);
  L1Options opts;
  opts.feas_tol = args.feas_tol;
  opts.max_iter = args.max_iter;
  opts.penalty = args.penalty;
  const L1Result result = l1_equality_solve(dict.dense(), instance.samples, opts);

  const Index n = instance.n;
  SparseCoeffs fourier, local;
  for (Index idx : threshold_support(result.x, 1e-6)) {
    if (idx < n) {
      fourier.push_back({idx, result.x[idx]});
    } else {
      local.push_back({idx - n, result.x[idx]});
    }
  }
  OrderedJson j;
  j["schema_version"] = 1;
  j["kind"] = "bp-result";
  j["version"] = kToolVersion;
  j["n"] = n;
  j["objective"] = result.objective;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["feasibility"] = result.feasibility;
  j["primal_residual"] = result.primal_residual;
  j["dual_residual"] = result.dual_residual;
  j["fourier"] = coeffs_json(fourier);
  j["local"] = coeffs_json(local);
  write_output(g.out, j.dump(2) + "\n");
  return result.converged ? 0 : 3;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::vector<Index> sizes{64};
  int trials = 50;
  std::string dict_kind = "fourier-canonical";
  Index block = 8;
  std::string placement = "random";
};

struct BenchCell {
  Index n = 0;
  Index kp = 0;
  Index kq = 0;
  bool picket = false;
};

/** Planted spikes on an even grid with a seeded offset; every length-2kp
 *  window then touches a spike, which is the configuration that defeats the
 *  window sweep when 2 kp kq = n.
 */
PlantedInstance make_picket_planted(Index n, Index kp, Index kq, Rng& rng) {
  const Index spacing = n / kq;
  const Index offset = static_cast<Index>(rng.uniform_int(0, spacing - 1));
  PlantedInstance out;
  std::vector<Index> freqs = rng.distinct_indices(n, kp);
  for (Index f : freqs) out.left.push_back({f, rng.unit_phase()});
  for (Index j = 0; j < kq; ++j) out.right.push_back({offset + j * spacing, rng.unit_phase()});
  ComplexVec y = ComplexVec::Zero(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (const auto& e : out.left) {
    for (Index i = 0; i < n; ++i) y[i] += e.value * root_of_unity(e.index * i, n) * scale;
  }
  for (const auto& e : out.right) y[e.index] += e.value;
  out.samples = std::move(y);
  return out;
}

std::uint64_t trial_seed(std::uint64_t base, const BenchCell& cell, int trial) {
  std::uint64_t h = base;
  for (std::uint64_t v :
       {static_cast<std::uint64_t>(cell.n), static_cast<std::uint64_t>(cell.kp),
        static_cast<std::uint64_t>(cell.kq), static_cast<std::uint64_t>(trial)}) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool planted_recovered(const SolutionSet& solutions, const PlantedInstance& planted) {
  const SparseSolution* hit =
      solutions.find(support_of(planted.left), support_of(planted.right));
  if (hit == nullptr) return false;
  double scale = 0.0;
  for (const auto& e : planted.left) scale = std::max(scale, std::abs(e.value));
  for (const auto& e : planted.right) scale = std::max(scale, std::abs(e.value));
  double err = 0.0;
  for (std::size_t i = 0; i < planted.left.size(); ++i) {
    err = std::max(err, std::abs(hit->left[i].value - planted.left[i].value));
  }
  for (std::size_t i = 0; i < planted.right.size(); ++i) {
    err = std::max(err, std::abs(hit->right[i].value - planted.right[i].value));
  }
  return err <= 1e-7 * std::max(scale, 1.0);
}

int run_bench(const GlobalOptions& g, const BenchArgs& args) {
  require_format(g, "csv");
  if (args.trials < 1) throw std::invalid_argument("bench needs --trials >= 1");
  if (args.placement != "random" && args.placement != "picket") {
    throw std::invalid_argument("placement must be random or picket");
  }
  const bool picket = args.placement == "picket";
  const bool classic = args.dict_kind == "fourier-canonical";

  std::vector<BenchCell> cells;
  for (Index n : args.sizes) {
    if (n < 4) throw std::invalid_argument("bench sizes must be at least 4");
    if (picket) {
      // Tight cells: kp kq = n/2 with the spikes on an even grid.
      for (Index kq = 1; kq <= n / 2; ++kq) {
        if ((n / 2) % kq != 0 || n % kq != 0) continue;
        cells.push_back({n, (n / 2) / kq, kq, true});
      }
      continue;
    }
    // One column inside, at, and just outside the admission frontier per kp.
    const auto limit = static_cast<Index>(
        std::ceil(std::sqrt(static_cast<double>(n) / 2.0)));
    for (Index kp = 1; kp <= limit; ++kp) {
      const Index kq_max = (n / 2 - 1) / kp;
      if (kq_max < 1) continue;
      std::vector<Index> kqs{std::max<Index>(1, kq_max / 2), kq_max, kq_max + 1};
      std::sort(kqs.begin(), kqs.end());
      kqs.erase(std::unique(kqs.begin(), kqs.end()), kqs.end());
      for (Index kq : kqs) cells.push_back({n, kp, kq, false});
    }
  }
  std::sort(cells.begin(), cells.end(), [](const BenchCell& a, const BenchCell& b) {
    return std::tie(a.n, a.kp, a.kq) < std::tie(b.n, b.kp, b.kq);
  });

  DictSpec spec;
  spec.kind = args.dict_kind;
  spec.block = args.block;

  std::vector<BenchRow> rows;
  for (const BenchCell& cell : cells) {
    DictSpec cell_spec = finalize_spec(spec, cell.n, g.seed);
    std::optional<Dictionary> dict;
    if (!classic) dict = make_dictionary(cell_spec, cell.n);

    int hits = 0;
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(args.trials));
    for (int t = 0; t < args.trials; ++t) {
      Rng rng(trial_seed(g.seed, cell, t));
      PlantedInstance planted;
      if (cell.picket) {
        planted = make_picket_planted(cell.n, cell.kp, cell.kq, rng);
      } else if (classic) {
        planted = make_random_planted_fourier(cell.n, cell.kp, cell.kq, rng);
      } else {
        planted = make_random_planted(*dict, cell.kp, cell.kq, rng);
      }
      const auto t0 = std::chrono::steady_clock::now();
      SolutionSet solutions;
      if (classic) {
        SolveOptions opts;
        opts.tol = tolerances_of(g);
        opts.threads = g.threads;
        solutions = prosparse_solve(planted.samples, opts);
      } else {
        GenSolveOptions opts;
        opts.tol = tolerances_of(g);
        opts.threads = g.threads;
        opts.sweep_limit = cell.kp + 1;
        solutions = gen_prosparse_solve(*dict, planted.samples, opts);
      }
      times.push_back(std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count());
      if (planted_recovered(solutions, planted)) ++hits;
    }
    std::sort(times.begin(), times.end());
    const double median = times[times.size() / 2];
    rows.push_back({cell.n, cell.kp, cell.kq, args.trials,
                    static_cast<double>(hits) / args.trials, median});
  }

  std::vector<std::pair<std::string, std::string>> meta{
      {"tool", "prosparse bench"},
      {"version", kToolVersion},
      {"dict", args.dict_kind},
      {"placement", args.placement},
      {"seed", std::to_string(g.seed)},
      {"trials", std::to_string(args.trials)},
      {"threads", std::to_string(g.threads)},
  };
  write_output(g.out, bench_csv(rows, meta));
  return 0;
}

// ---------------------------------------------------------------------------
// selftest

int run_selftest(const GlobalOptions& g, std::ostream& log) {
  require_format(g, "json");
  struct Check {
    const char* name;
    bool (*fn)();
  };
  const Check checks[] = {
      {"transform-unitary",
       [] {
         Rng rng(1);
         ComplexVec v(16);
         for (Index i = 0; i < 16; ++i) v[i] = {rng.normal(), rng.normal()};
         const ComplexVec round = dft(dft(v, true), false);
         return (round - v).cwiseAbs().maxCoeff() < 1e-12;
       }},
      {"window-fit-roundtrip",
       [] {
         Rng rng(2);
         auto inst = make_random_planted_fourier(32, 2, 3, rng);
         auto sols = prosparse_solve(inst.samples, SolveOptions{});
         return sols.find(support_of(inst.left), support_of(inst.right)) != nullptr;
       }},
      {"dual-side-solutions",
       [] {
         Rng rng(3);
         auto inst = make_random_planted_fourier(32, 5, 2, rng);
         auto sols = prosparse_solve(inst.samples, SolveOptions{});
         return sols.find(support_of(inst.left), support_of(inst.right)) != nullptr;
       }},
      {"generalized-matches-classic",
       [] {
         Rng rng(4);
         auto inst = make_random_planted_fourier(32, 2, 4, rng);
         auto classic = prosparse_solve(inst.samples, SolveOptions{});
         auto dict = make_fourier_canonical(32);
         auto gen = gen_prosparse_solve(dict, inst.samples, GenSolveOptions{});
         if (classic.size() != gen.size()) return false;
         for (std::size_t i = 0; i < classic.size(); ++i) {
           if (support_of(classic[i].left) != support_of(gen[i].left)) return false;
           if (support_of(classic[i].right) != support_of(gen[i].right)) return false;
         }
         return true;
       }},
      {"cosine-pair-recovery",
       [] {
         auto dict = make_dct_canonical(32);
         Rng rng(5);
         auto inst = make_random_planted(dict, 2, 2, rng);
         auto sols = gen_prosparse_solve(dict, inst.samples, GenSolveOptions{});
         return sols.find(support_of(inst.left), support_of(inst.right)) != nullptr;
       }},
      {"bound-thresholds",
       [] {
         const BoundReport r = evaluate_bounds(144, 1.0 / 12.0);
         return r.max_total_p0 == 11 && r.max_total_bp_simple == 10 &&
                r.max_total_overall == 16;
       }},
      {"counterexample-arithmetic",
       [] {
         const CounterexampleInstance ce = make_bp_counterexample(4);
         return ce.n == 128 && support_of(ce.instance.left).size() == 8 &&
                support_of(ce.instance.right).size() == 3 &&
                std::abs(ce.planted_l1 - (16.0 * std::numbers::sqrt2 + 6.0)) < 1e-12 &&
                ce.gap > 0.0;
       }},
      {"split-pair-instances",
       [] {
         const TwoSolutionInstance ts = make_two_solution_instance(3, 11);
         auto sols = prosparse_solve(ts.instance.samples, SolveOptions{});
         return sols.find(support_of(ts.instance.left), support_of(ts.instance.right)) &&
                sols.find(support_of(ts.alt_left), support_of(ts.alt_right));
       }},
      {"clean-window-floors",
       [] {
         Rng rng(6);
         for (int t = 0; t < 50; ++t) {
           const Index n = 8 + static_cast<Index>(rng.uniform_int(0, 8));
           const Index kp = 1 + static_cast<Index>(rng.uniform_int(0, 2));
           const Index kq = 1 + static_cast<Index>(rng.uniform_int(0, 2));
           if (2 * kp > n) continue;
           const auto spikes = rng.distinct_indices(n, kq);
           if (count_clean_windows(n, 2 * kp, spikes) < clean_window_floor(n, kp, kq)) {
             return false;
           }
         }
         return true;
       }},
      {"baseline-feasible",
       [] {
         Rng rng(7);
         auto inst = make_random_planted_fourier(32, 2, 3, rng);
         auto dict = make_fourier_canonical(32);
         const L1Result r = l1_equality_solve(dict.dense(), inst.samples, L1Options{});
         return r.converged && r.feasibility < 1e-6;
       }},
      {"file-roundtrip",
       [] {
         Rng rng(8);
         auto inst = make_random_planted_fourier(16, 1, 2, rng);
         InstanceFile f;
         f.n = 16;
         f.samples = inst.samples;
         f.known.push_back({inst.left, inst.right});
         f.provenance = {"selftest", 8, "1970-01-01T00:00:00Z"};
         const InstanceFile back = instance_from_json(to_json(f));
         return back.n == f.n && (back.samples - f.samples).cwiseAbs().maxCoeff() == 0.0 &&
                back.known.size() == 1 &&
                to_json(back) == to_json(f);
       }},
  };

  int failures = 0;
  for (const Check& check : checks) {
    bool ok = false;
    try {
      ok = check.fn();
    } catch (const std::exception&) {
      ok = false;
    }
    log << (ok ? "ok   " : "FAIL ") << check.name << "\n";
    if (!ok) ++failures;
  }
  log << (failures == 0 ? "all checks passed" : std::to_string(failures) + " checks failed")
      << "\n";
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse representations in a union of two bases"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--tol-rank", g.tol_rank, "relative rank threshold");
  app.add_option("--tol-root", g.tol_root, "relative root acceptance threshold");
  app.add_option("--tol-zero", g.tol_zero, "relative zero threshold");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--threads", g.threads, "worker threads (never changes output bytes)");
  app.add_option("--in", g.in, "input file, - for stdin");
  app.add_option("--out", g.out, "output file, - for stdout");
  app.add_option("--format", g.format, "output format (json or csv)")
      ->check(CLI::IsMember({"json", "csv"}));

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "find every sparse two-basis representation");
  solve_cmd->fallthrough();
  solve_cmd->add_option("--dict", solve_args.dict_kind, "override the instance dictionary kind");
  solve_cmd->add_option("--block", solve_args.block, "right-basis atom length override");
  solve_cmd->add_option("--sweep-limit", solve_args.sweep_limit,
                        "cap the left-order sweep (generalized path)");
  solve_cmd->add_flag("--allow-empty", solve_args.allow_empty,
                      "exit 0 even when only trivial representations exist");

  PronyArgs prony_args;
  auto* prony_cmd = app.add_subcommand("prony", "fit one window of 2*order samples");
  prony_cmd->fallthrough();
  prony_cmd->add_option("--order", prony_args.order, "number of exponentials")->required();
  prony_cmd->add_option("--start", prony_args.start, "window start sample");
  prony_cmd->add_flag("--free", prony_args.free_roots, "free roots instead of the unit grid");

  BoundsArgs bounds_args;
  auto* bounds_cmd = app.add_subcommand("bounds", "uniqueness and admission bound tables");
  bounds_cmd->fallthrough();
  bounds_cmd->add_option("--n", bounds_args.n, "signal length")->required();
  bounds_cmd->add_option("--mu", bounds_args.mu, "coherence (default 1/sqrt(n))");
  bounds_cmd->add_option("--grid-limit", bounds_args.grid_limit, "largest sparsity in the table");
  bounds_cmd->add_flag("--curves", bounds_args.curves, "per-kp threshold curves instead of a grid");

  GenerateArgs gen_args;
  auto* gen_cmd = app.add_subcommand("generate", "write a test instance");
  gen_cmd->fallthrough();
  gen_cmd->add_option("kind", gen_args.kind,
                      "counterexample-bp | two-solution | planted | zero")
      ->required();
  gen_cmd->add_option("--d", gen_args.d, "construction scale parameter");
  gen_cmd->add_option("--n", gen_args.n, "signal length (planted, zero)");
  gen_cmd->add_option("--kp", gen_args.kp, "left sparsity (planted)");
  gen_cmd->add_option("--kq", gen_args.kq, "right sparsity (planted)");
  gen_cmd->add_option("--dict", gen_args.dict_kind, "dictionary kind (planted)");
  gen_cmd->add_option("--block", gen_args.block, "right-basis atom length");

  BpArgs bp_args;
  auto* bp_cmd = app.add_subcommand("bp", "l1 baseline on the dictionary");
  bp_cmd->fallthrough();
  bp_cmd->add_option("--feas-tol", bp_args.feas_tol, "convergence tolerance");
  bp_cmd->add_option("--max-iter", bp_args.max_iter, "iteration cap");
  bp_cmd->add_option("--penalty", bp_args.penalty, "initial splitting penalty");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "planted recovery-rate sweep");
  bench_cmd->fallthrough();
  bench_cmd->add_option("--n", bench_args.sizes, "signal lengths");
  bench_cmd->add_option("--trials", bench_args.trials, "trials per cell");
  bench_cmd->add_option("--dict", bench_args.dict_kind, "dictionary kind");
  bench_cmd->add_option("--block", bench_args.block, "right-basis atom length");
  bench_cmd->add_option("--placement", bench_args.placement, "random | picket");

  auto* selftest_cmd = app.add_subcommand("selftest", "run the built-in invariant checks");
  selftest_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(g, solve_args);
    if (prony_cmd->parsed()) return run_prony(g, prony_args);
    if (bounds_cmd->parsed()) return run_bounds(g, bounds_args);
    if (gen_cmd->parsed()) return run_generate(g, gen_args);
    if (bp_cmd->parsed()) return run_bp(g, bp_args);
    if (bench_cmd->parsed()) return run_bench(g, bench_args);
    if (selftest_cmd->parsed()) return run_selftest(g, std::cerr);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
