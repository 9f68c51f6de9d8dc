#include <prosparse/io.hpp>

#include <gtest/gtest.h>

#include <cstdlib>

#include <prosparse/fixtures.hpp>
#include <prosparse/generalized.hpp>

#include "oracles.hpp"

using namespace prosparse;

namespace {

InstanceFile sample_instance() {
  InstanceFile file;
  file.n = 8;
  file.dict.kind = "fourier-canonical";
  Rng rng(3);
  const PlantedInstance inst = make_random_planted_fourier(8, 1, 2, rng);
  file.samples = inst.samples;
  file.known.push_back({inst.left, inst.right});
  file.provenance = {"unit-test", 3, "2026-01-01T00:00:00Z"};
  return file;
}

}  // namespace

TEST(InstanceIo, RoundTripIsByteStable) {
  const InstanceFile file = sample_instance();
  const std::string text = to_json(file);
  const InstanceFile back = instance_from_json(text);
  EXPECT_EQ(to_json(back), text);
  EXPECT_EQ(back.n, 8);
  EXPECT_EQ(back.dict.kind, "fourier-canonical");
  ASSERT_EQ(back.known.size(), 1u);
  ASSERT_EQ(back.known[0].left.size(), file.known[0].left.size());
  EXPECT_EQ(back.known[0].left[0].index, file.known[0].left[0].index);
  EXPECT_EQ(back.known[0].left[0].value, file.known[0].left[0].value);
  EXPECT_EQ(back.provenance.generator, "unit-test");
  for (Index i = 0; i < 8; ++i) EXPECT_EQ(back.samples[i], file.samples[i]);
}

TEST(SolutionIo, RoundTripPreservesSolverOutput) {
  Rng rng(5);
  const PlantedInstance inst = make_random_planted_fourier(16, 2, 2, rng);
  SolutionFile file;
  file.n = 16;
  file.dict.kind = "fourier-canonical";
  file.solutions = prosparse_solve(inst.samples).items();
  ASSERT_FALSE(file.solutions.empty());

  const std::string text = to_json(file);
  const SolutionFile back = solutions_from_json(text);
  EXPECT_EQ(to_json(back), text);
  ASSERT_EQ(back.solutions.size(), file.solutions.size());
  for (std::size_t i = 0; i < file.solutions.size(); ++i) {
    EXPECT_EQ(back.solutions[i].found.pass, file.solutions[i].found.pass);
    EXPECT_EQ(back.solutions[i].resynthesis_error, file.solutions[i].resynthesis_error);
    ASSERT_EQ(back.solutions[i].kp(), file.solutions[i].kp());
    for (Index j = 0; j < file.solutions[i].kp(); ++j) {
      EXPECT_EQ(back.solutions[i].left[j].index, file.solutions[i].left[j].index);
      EXPECT_EQ(back.solutions[i].left[j].value, file.solutions[i].left[j].value);
    }
  }
}

TEST(InstanceIo, RejectsMalformedInput) {
  EXPECT_THROW(instance_from_json("this is not json"), std::invalid_argument);
  try {
    instance_from_json("{nope");
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("malformed"), std::string::npos);
  }
}

TEST(InstanceIo, RejectsSchemaDrift) {
  const std::string text = to_json(sample_instance());
  const std::string bumped = [&] {
    std::string t = text;
    const auto pos = t.find("\"schema_version\": 1");
    EXPECT_NE(pos, std::string::npos);
    t.replace(pos, std::string("\"schema_version\": 1").size(), "\"schema_version\": 2");
    return t;
  }();
  EXPECT_THROW(instance_from_json(bumped), std::invalid_argument);
}

TEST(InstanceIo, RejectsUnsortedCoefficients) {
  std::string text = to_json(sample_instance());
  // known[0].right holds two entries; swapping their indices breaks ordering.
  const InstanceFile file = sample_instance();
  ASSERT_EQ(file.known[0].right.size(), 2u);
  const std::string a = "\"index\": " + std::to_string(file.known[0].right[0].index);
  const std::string b = "\"index\": " + std::to_string(file.known[0].right[1].index);
  const auto pos_a = text.find(a, text.find("\"local\""));
  ASSERT_NE(pos_a, std::string::npos);
  text.replace(pos_a, a.size(), b);
  EXPECT_THROW(instance_from_json(text), std::invalid_argument);
}

TEST(SolutionIo, RejectsInconsistentSparsityCounts) {
  SolutionFile file;
  file.n = 8;
  SparseSolution s;
  s.left = {{2, Complex{1.0, 0.0}}};
  s.right = {{5, Complex{0.0, 1.0}}};
  file.solutions = {s};
  std::string text = to_json(file);
  const auto pos = text.find("\"kp\": 1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 7, "\"kp\": 2");
  EXPECT_THROW(solutions_from_json(text), std::invalid_argument);
}

TEST(InstanceIo, RejectsNonFiniteNumbers) {
  std::string text = to_json(sample_instance());
  const auto pos = text.find("\"samples\"");
  ASSERT_NE(pos, std::string::npos);
  const auto bracket = text.find('[', pos);
  const auto first_num_end = text.find(',', bracket);
  // Overflow to infinity on parse.
  text.replace(bracket + 1, first_num_end - bracket - 1, "[1e999, 0.0");
  EXPECT_THROW(instance_from_json(text), std::invalid_argument);
}

TEST(DictIo, AllKindsSurviveTheRoundTrip) {
  std::vector<DictSpec> specs;
  specs.push_back({});  // fourier-canonical
  DictSpec local;
  local.kind = "fourier-localfourier";
  local.block = 4;
  specs.push_back(local);
  DictSpec dct;
  dct.kind = "dct-canonical";
  specs.push_back(dct);
  DictSpec gauss;
  gauss.kind = "gaussian-canonical";
  gauss.seed = 7;
  gauss.calibration = gaussian_calibrate(16, 7, 1, 2, 0.9, 8, 6);
  specs.push_back(gauss);

  for (const DictSpec& spec : specs) {
    InstanceFile file;
    file.n = 16;
    file.dict = spec;
    file.samples = ComplexVec::Zero(16);
    const InstanceFile back = instance_from_json(to_json(file));
    EXPECT_EQ(back.dict.kind, spec.kind);
    const Dictionary dict = make_dictionary(back.dict, 16);
    EXPECT_EQ(dict.size(), 16);
    if (spec.calibration.has_value()) {
      ASSERT_TRUE(back.dict.calibration.has_value());
      EXPECT_EQ(back.dict.calibration->c1, spec.calibration->c1);
    }
  }

  DictSpec unknown;
  unknown.kind = "wavelet-canonical";
  EXPECT_THROW(make_dictionary(unknown, 16), std::invalid_argument);
}

TEST(DictIo, GaussianWithoutCalibrationIsRejectedByTheFactory) {
  DictSpec spec;
  spec.kind = "gaussian-canonical";
  spec.seed = 3;
  EXPECT_THROW(make_dictionary(spec, 16), std::invalid_argument);
}

TEST(FormatDouble, ShortestFormRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02e23, -0.0, 2.0, 1234.5678}) {
    const std::string s = format_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
  }
}

TEST(Csv, BenchAndBoundsCarryHeaders) {
  BenchRow row;
  row.n = 16;
  row.kp = 2;
  row.kq = 3;
  row.trials = 10;
  row.exact_recovery_rate = 1.0;
  row.median_ms = 0.5;
  const std::string bench = bench_csv({row}, {{"tool", "unit"}, {"seed", "1"}});
  EXPECT_NE(bench.find("# tool=unit"), std::string::npos);
  EXPECT_NE(bench.find("n,kp,kq,trials"), std::string::npos);
  EXPECT_NE(bench.find("16,2,3,10,1,0.5"), std::string::npos);

  const std::string grid = bounds_grid_csv(evaluate_bounds(64, 0.125, 3));
  EXPECT_NE(grid.find("kp,kq"), std::string::npos);
  const std::string curves = bounds_curves_csv(64, 0.125, bound_curves(64, 0.125, 4));
  EXPECT_NE(curves.find("kp"), std::string::npos);
}

TEST(Timestamp, EpochOverridePinsTheClock) {
  ASSERT_EQ(setenv("SOURCE_DATE_EPOCH", "0", 1), 0);
  EXPECT_EQ(current_timestamp(), "1970-01-01T00:00:00Z");
  ASSERT_EQ(setenv("SOURCE_DATE_EPOCH", "1756857600", 1), 0);
  EXPECT_EQ(current_timestamp(), "2025-09-03T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
  const std::string now = current_timestamp();
  EXPECT_EQ(now.size(), 20u);
  EXPECT_EQ(now.back(), 'Z');
}
