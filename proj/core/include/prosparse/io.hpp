#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prosparse/bases.hpp"
#include "prosparse/bounds.hpp"
#include "prosparse/solver.hpp"

namespace prosparse {

inline constexpr const char* kToolVersion = "1.0.0";

/** Serializable recipe for a dictionary. kind selects the pair:
 *  fourier-canonical, fourier-localfourier (block = atom length),
 *  dct-canonical, gaussian-canonical (seed + calibration), or custom
 *  (explicit factorization for the left side plus a right-side recipe).
 *  precondition, when present, wraps the pair in a conditioning matrix.
 */
struct DictSpec {
  std::string kind = "fourier-canonical";
  Index block = 0;
  std::uint64_t seed = 0;
  std::optional<GaussianCalibration> calibration;
  std::optional<FactorizedBasis> factorization;  // custom only
  std::string right_kind = "canonical";          // custom only
  Index right_block = 1;                         // custom + local-fourier/banded right
  std::uint64_t right_seed = 0;                  // custom + banded right
  std::optional<ComplexMat> precondition;
};

Dictionary make_dictionary(const DictSpec& spec, Index n);

struct Provenance {
  std::string generator;
  std::uint64_t seed = 0;
  std::string timestamp;
};

/** ISO-8601 UTC now; the SOURCE_DATE_EPOCH environment variable overrides the
 *  clock so generated files can be reproduced byte for byte. */
std::string current_timestamp();

struct LabeledRepresentation {
  SparseCoeffs left;
  SparseCoeffs right;
};

struct InstanceFile {
  Index n = 0;
  DictSpec dict;
  ComplexVec samples;
  std::vector<LabeledRepresentation> known;  // planted representation(s), if any
  Provenance provenance;
};

std::string to_json(const InstanceFile& instance);
InstanceFile instance_from_json(const std::string& text);
void save_instance(const InstanceFile& instance, const std::string& path);
InstanceFile load_instance(const std::string& path);

/** Solver output. Carries no timestamp on purpose: identical input, seed, and
 *  version must serialize to identical bytes whatever the thread count.
 */
struct SolutionFile {
  Index n = 0;
  DictSpec dict;
  Tolerances tol;
  std::vector<SparseSolution> solutions;
};

std::string to_json(const SolutionFile& file);
SolutionFile solutions_from_json(const std::string& text);
void save_solutions(const SolutionFile& file, const std::string& path);
SolutionFile load_solutions(const std::string& path);

struct BenchRow {
  Index n = 0;
  Index kp = 0;
  Index kq = 0;
  int trials = 0;
  double exact_recovery_rate = 0.0;
  double median_ms = 0.0;
};

/** CSV with one row per cell; meta pairs land in leading "# key=value" lines. */
std::string bench_csv(const std::vector<BenchRow>& rows,
                      const std::vector<std::pair<std::string, std::string>>& meta);

std::string bounds_grid_csv(const BoundReport& report);
std::string bounds_curves_csv(Index n, double mu, const std::vector<BoundCurveRow>& rows);

/** Shortest decimal form that round-trips the double. */
std::string format_double(double v);

}  // namespace prosparse
