#include "prosparse/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace prosparse {

namespace {

using OrderedJson = nlohmann::ordered_json;

void require_input(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
  return v;
}

OrderedJson complex_to_json(const Complex& v) {
  return OrderedJson::array({finite(v.real(), "complex"), finite(v.imag(), "complex")});
}

Complex complex_from_json(const OrderedJson& j) {
  require_input(j.is_array() && j.size() == 2, "complex values must be [re, im]");
  return {finite(j[0].get<double>(), "complex"), finite(j[1].get<double>(), "complex")};
}

OrderedJson coeffs_to_json(const SparseCoeffs& coeffs) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& e : coeffs) {
    OrderedJson entry;
    entry["index"] = e.index;
    entry["coeff"] = complex_to_json(e.value);
    arr.push_back(std::move(entry));
  }
  return arr;
}

SparseCoeffs coeffs_from_json(const OrderedJson& j, Index n) {
  require_input(j.is_array(), "coefficient lists must be arrays");
  SparseCoeffs out;
  Index prev = -1;
  for (const auto& item : j) {
    require_input(item.is_object() && item.contains("index") && item.contains("coeff"),
                  "coefficients must be {index, coeff: [re, im]}");
    const Index idx = item.at("index").get<Index>();
    require_input(idx >= 0 && idx < n, "coefficient index out of range");
    require_input(idx > prev, "coefficient indices must be strictly ascending");
    prev = idx;
    out.push_back({idx, complex_from_json(item.at("coeff"))});
  }
  return out;
}

OrderedJson vec_to_json(const ComplexVec& v) {
  OrderedJson arr = OrderedJson::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v[i]));
  return arr;
}

ComplexVec vec_from_json(const OrderedJson& j) {
  require_input(j.is_array(), "sample lists must be arrays");
  ComplexVec v(static_cast<Index>(j.size()));
  Index i = 0;
  for (const auto& item : j) v[i++] = complex_from_json(item);
  return v;
}

OrderedJson mat_to_json(const ComplexMat& m) {
  OrderedJson rows = OrderedJson::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i).transpose()));
  return rows;
}

ComplexMat mat_from_json(const OrderedJson& j) {
  require_input(j.is_array() && !j.empty(), "matrices must be arrays of rows");
  const Index rows = static_cast<Index>(j.size());
  ComplexMat m;
  for (Index i = 0; i < rows; ++i) {
    const ComplexVec row = vec_from_json(j[static_cast<std::size_t>(i)]);
    if (i == 0) m.resize(rows, row.size());
    require_input(row.size() == m.cols(), "matrix rows must have equal length");
    m.row(i) = row.transpose();
  }
  return m;
}

OrderedJson dict_to_json(const DictSpec& spec) {
  OrderedJson j;
  j["kind"] = spec.kind;
  OrderedJson params = OrderedJson::object();
  if (spec.kind == "fourier-localfourier") params["block"] = spec.block;
  if (spec.kind == "gaussian-canonical" && spec.calibration) {
    const auto& c = *spec.calibration;
    OrderedJson cj;
    cj["c1"] = finite(c.c1, "calibration");
    cj["floor_len"] = c.floor_len;
    cj["target_rate"] = finite(c.target_rate, "calibration");
    cj["trials_per_k"] = c.trials_per_k;
    cj["seed"] = c.seed;
    cj["rates"] = c.rates;
    params["calibration"] = std::move(cj);
  }
  if (spec.kind == "custom") {
    require_input(spec.factorization.has_value(), "custom dictionary needs a factorization");
    const auto& fb = *spec.factorization;
    OrderedJson fj;
    fj["n"] = fb.n;
    fj["modes"] = fb.modes;
    fj["expansion"] = fb.expansion;
    fj["lambda"] = vec_to_json(fb.lambda);
    fj["nodes"] = vec_to_json(fb.nodes);
    OrderedJson mixing = OrderedJson::array();
    for (const auto& column : fb.mixing) {
      OrderedJson col = OrderedJson::array();
      for (const auto& [row, value] : column) {
        col.push_back(OrderedJson::array(
            {row, finite(value.real(), "mixing"), finite(value.imag(), "mixing")}));
      }
      mixing.push_back(std::move(col));
    }
    fj["mixing"] = std::move(mixing);
    params["factorization"] = std::move(fj);
    OrderedJson rj;
    rj["kind"] = spec.right_kind;
    if (spec.right_kind != "canonical") rj["block"] = spec.right_block;
    if (spec.right_kind == "banded") rj["seed"] = spec.right_seed;
    params["right"] = std::move(rj);
  }
  if (spec.precondition) params["precondition"] = mat_to_json(*spec.precondition);
  j["params"] = std::move(params);
  if (spec.kind == "gaussian-canonical") j["seed"] = spec.seed;
  return j;
}

DictSpec dict_from_json(const OrderedJson& j) {
  require_input(j.is_object() && j.contains("kind"), "dictionary spec needs a kind");
  DictSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  const OrderedJson params = j.value("params", OrderedJson::object());
  require_input(params.is_object(), "dictionary params must be an object");
  if (params.contains("block")) spec.block = params.at("block").get<Index>();
  if (params.contains("calibration")) {
    const auto& cj = params.at("calibration");
    GaussianCalibration c;
    c.c1 = finite(cj.at("c1").get<double>(), "calibration");
    c.floor_len = cj.at("floor_len").get<Index>();
    c.target_rate = finite(cj.at("target_rate").get<double>(), "calibration");
    c.trials_per_k = cj.at("trials_per_k").get<int>();
    c.seed = cj.at("seed").get<std::uint64_t>();
    if (cj.contains("rates")) c.rates = cj.at("rates").get<std::vector<double>>();
    spec.calibration = std::move(c);
  }
  if (params.contains("factorization")) {
    const auto& fj = params.at("factorization");
    FactorizedBasis fb;
    fb.n = fj.at("n").get<Index>();
    fb.modes = fj.at("modes").get<Index>();
    fb.expansion = fj.at("expansion").get<Index>();
    fb.lambda = vec_from_json(fj.at("lambda"));
    fb.nodes = vec_from_json(fj.at("nodes"));
    require_input(fj.at("mixing").is_array(), "mixing must be an array of columns");
    for (const auto& col : fj.at("mixing")) {
      std::vector<std::pair<Index, Complex>> column;
      require_input(col.is_array(), "mixing columns must be arrays");
      for (const auto& item : col) {
        require_input(item.is_array() && item.size() == 3, "mixing entries are [row, re, im]");
        column.emplace_back(item[0].get<Index>(),
                            Complex{finite(item[1].get<double>(), "mixing"),
                                    finite(item[2].get<double>(), "mixing")});
      }
      fb.mixing.push_back(std::move(column));
    }
    spec.factorization = std::move(fb);
  }
  if (params.contains("right")) {
    const auto& rj = params.at("right");
    spec.right_kind = rj.at("kind").get<std::string>();
    if (rj.contains("block")) spec.right_block = rj.at("block").get<Index>();
    if (rj.contains("seed")) spec.right_seed = rj.at("seed").get<std::uint64_t>();
  }
  if (params.contains("precondition")) spec.precondition = mat_from_json(params.at("precondition"));
  return spec;
}

OrderedJson parse(const std::string& text) {
  try {
    return OrderedJson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require_input(in.good(), "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.good()) throw std::runtime_error("cannot write " + path);
  out << text;
}

Discovery::Pass pass_from_string(const std::string& s) {
  if (s == "trivial") return Discovery::Pass::Trivial;
  if (s == "direct") return Discovery::Pass::Direct;
  if (s == "dual") return Discovery::Pass::Dual;
  if (s == "inversion") return Discovery::Pass::Inversion;
  throw std::invalid_argument("unknown discovery pass: " + s);
}

}  // namespace

Dictionary make_dictionary(const DictSpec& spec, Index n) {
  require_input(n >= 1, "dictionary size must be positive");
  auto with_precondition = [&](BasisPtr left, BasisPtr right) {
    return Dictionary(std::move(left), std::move(right), spec.precondition);
  };
  try {
    if (spec.kind == "fourier-canonical") {
      return with_precondition(make_fourier(n), make_canonical(n));
    }
    if (spec.kind == "fourier-localfourier") {
      require_input(spec.block >= 1, "fourier-localfourier needs a block length");
      return with_precondition(make_fourier(n), make_local_fourier(n, spec.block));
    }
    if (spec.kind == "dct-canonical") {
      return with_precondition(make_dct(n), make_canonical(n));
    }
    if (spec.kind == "gaussian-canonical") {
      require_input(spec.calibration.has_value(),
                    "gaussian-canonical needs a calibration (run calibrate first)");
      return with_precondition(make_gaussian(n, spec.seed, spec.calibration),
                               make_canonical(n));
    }
    if (spec.kind == "custom") {
      require_input(spec.factorization.has_value(), "custom dictionary needs a factorization");
      require_input(spec.factorization->n == n, "factorization size disagrees with n");
      BasisPtr right;
      if (spec.right_kind == "canonical") {
        right = make_canonical(n);
      } else if (spec.right_kind == "local-fourier") {
        right = make_local_fourier(n, spec.right_block);
      } else if (spec.right_kind == "banded") {
        right = make_banded(n, spec.right_block, spec.right_seed);
      } else {
        throw std::invalid_argument("unknown right basis kind: " + spec.right_kind);
      }
      return with_precondition(make_factorized(*spec.factorization), std::move(right));
    }
  } catch (const SolverError& e) {
    throw std::invalid_argument(e.what());
  }
  throw std::invalid_argument("unknown dictionary kind: " + spec.kind);
}

std::string current_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long parsed = std::strtoll(epoch, &end, 10);
    if (end != epoch && *end == '\0') t = static_cast<std::time_t>(parsed);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string to_json(const InstanceFile& instance) {
  require_input(instance.n >= 1 && instance.samples.size() == instance.n,
                "instance samples must match n");
  OrderedJson j;
  j["schema_version"] = 1;
  j["kind"] = "instance";
  j["version"] = kToolVersion;
  j["n"] = instance.n;
  j["dict"] = dict_to_json(instance.dict);
  j["samples"] = vec_to_json(instance.samples);
  if (!instance.known.empty()) {
    OrderedJson planted = OrderedJson::array();
    for (const auto& rep : instance.known) {
      OrderedJson rj;
      rj["fourier"] = coeffs_to_json(rep.left);
      rj["local"] = coeffs_to_json(rep.right);
      planted.push_back(std::move(rj));
    }
    j["planted"] = std::move(planted);
  }
  OrderedJson pj;
  pj["generator"] = instance.provenance.generator;
  pj["seed"] = instance.provenance.seed;
  pj["timestamp"] = instance.provenance.timestamp;
  j["provenance"] = std::move(pj);
  return j.dump(2) + "\n";
}

InstanceFile instance_from_json(const std::string& text) {
  const OrderedJson j = parse(text);
  try {
    require_input(j.is_object(), "instance file must be a JSON object");
    require_input(j.value("kind", "") == "instance", "not an instance file");
    require_input(j.value("schema_version", 0) == 1, "unsupported instance schema version");
    InstanceFile out;
    out.n = j.at("n").get<Index>();
    require_input(out.n >= 1, "instance n must be positive");
    out.dict = dict_from_json(j.at("dict"));
    out.samples = vec_from_json(j.at("samples"));
    require_input(out.samples.size() == out.n, "sample count disagrees with n");
    if (j.contains("planted")) {
      for (const auto& rj : j.at("planted")) {
        LabeledRepresentation rep;
        rep.left = coeffs_from_json(rj.at("fourier"), out.n);
        rep.right = coeffs_from_json(rj.at("local"), out.n);
        out.known.push_back(std::move(rep));
      }
    }
    if (j.contains("provenance")) {
      const auto& pj = j.at("provenance");
      out.provenance.generator = pj.value("generator", "");
      out.provenance.seed = pj.value("seed", std::uint64_t{0});
      out.provenance.timestamp = pj.value("timestamp", "");
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad instance file: ") + e.what());
  }
}

void save_instance(const InstanceFile& instance, const std::string& path) {
  write_file(path, to_json(instance));
}

InstanceFile load_instance(const std::string& path) {
  return instance_from_json(read_file(path));
}

std::string to_json(const SolutionFile& file) {
  OrderedJson j;
  j["schema_version"] = 1;
  j["kind"] = "solutions";
  j["version"] = kToolVersion;
  j["n"] = file.n;
  j["dict"] = dict_to_json(file.dict);
  OrderedJson tj;
  tj["rank"] = finite(file.tol.rank, "tolerance");
  tj["root"] = finite(file.tol.root, "tolerance");
  tj["zero"] = finite(file.tol.zero, "tolerance");
  tj["weight_floor"] = finite(file.tol.weight_floor, "tolerance");
  tj["resynth"] = finite(file.tol.resynth, "tolerance");
  j["tolerances"] = std::move(tj);
  j["count"] = file.solutions.size();
  OrderedJson sols = OrderedJson::array();
  for (const auto& sol : file.solutions) {
    OrderedJson sj;
    sj["kp"] = sol.kp();
    sj["kq"] = sol.kq();
    sj["fourier"] = coeffs_to_json(sol.left);
    sj["local"] = coeffs_to_json(sol.right);
    OrderedJson dj;
    dj["pass"] = to_string(sol.found.pass);
    dj["order"] = sol.found.sweep_order;
    dj["window"] = sol.found.window;
    sj["discovered_at"] = std::move(dj);
    sj["resynthesis_error"] = finite(sol.resynthesis_error, "resynthesis error");
    sols.push_back(std::move(sj));
  }
  j["solutions"] = std::move(sols);
  return j.dump(2) + "\n";
}

SolutionFile solutions_from_json(const std::string& text) {
  const OrderedJson j = parse(text);
  try {
    require_input(j.is_object(), "solution file must be a JSON object");
    require_input(j.value("kind", "") == "solutions", "not a solution file");
    require_input(j.value("schema_version", 0) == 1, "unsupported solution schema version");
    SolutionFile out;
    out.n = j.at("n").get<Index>();
    require_input(out.n >= 1, "solution n must be positive");
    out.dict = dict_from_json(j.at("dict"));
    const auto& tj = j.at("tolerances");
    out.tol.rank = tj.at("rank").get<double>();
    out.tol.root = tj.at("root").get<double>();
    out.tol.zero = tj.at("zero").get<double>();
    out.tol.weight_floor = tj.at("weight_floor").get<double>();
    out.tol.resynth = tj.at("resynth").get<double>();
    for (const auto& sj : j.at("solutions")) {
      SparseSolution sol;
      sol.left = coeffs_from_json(sj.at("fourier"), out.n);
      sol.right = coeffs_from_json(sj.at("local"), out.n);
      const auto& dj = sj.at("discovered_at");
      sol.found.pass = pass_from_string(dj.at("pass").get<std::string>());
      sol.found.sweep_order = dj.at("order").get<Index>();
      sol.found.window = dj.at("window").get<Index>();
      sol.resynthesis_error = sj.at("resynthesis_error").get<double>();
      require_input(sol.kp() == sj.at("kp").get<Index>() && sol.kq() == sj.at("kq").get<Index>(),
                    "solution sparsity fields disagree with the coefficients");
      out.solutions.push_back(std::move(sol));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad solution file: ") + e.what());
  }
}

void save_solutions(const SolutionFile& file, const std::string& path) {
  write_file(path, to_json(file));
}

SolutionFile load_solutions(const std::string& path) {
  return solutions_from_json(read_file(path));
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string bench_csv(const std::vector<BenchRow>& rows,
                      const std::vector<std::pair<std::string, std::string>>& meta) {
  std::string out;
  for (const auto& [key, value] : meta) out += "# " + key + "=" + value + "\n";
  out += "n,kp,kq,trials,exact_recovery_rate,median_ms\n";
  for (const auto& row : rows) {
    out += std::to_string(row.n) + "," + std::to_string(row.kp) + "," + std::to_string(row.kq) +
           "," + std::to_string(row.trials) + "," + format_double(row.exact_recovery_rate) +
           "," + format_double(row.median_ms) + "\n";
  }
  return out;
}

std::string bounds_grid_csv(const BoundReport& report) {
  std::string out = "# n=" + std::to_string(report.n) + "\n# mu=" + format_double(report.mu) +
                    "\n# max_total_p0=" + std::to_string(report.max_total_p0) +
                    "\n# max_total_bp_simple=" + std::to_string(report.max_total_bp_simple) +
                    "\n# max_total_overall=" + std::to_string(report.max_total_overall) + "\n";
  out +=
      "kp,kq,p0_unique,bp_tight,bp_simple,product,total,"
      "p0_boundary,bp_tight_boundary,bp_simple_boundary,product_boundary,total_boundary\n";
  for (const auto& cell : report.grid) {
    const auto& f = cell.flags;
    out += std::to_string(cell.kp) + "," + std::to_string(cell.kq);
    for (bool b : {f.p0_unique, f.bp_tight, f.bp_simple, f.product, f.total, f.p0_boundary,
                   f.bp_tight_boundary, f.bp_simple_boundary, f.product_boundary,
                   f.total_boundary}) {
      out += b ? ",1" : ",0";
    }
    out += "\n";
  }
  return out;
}

std::string bounds_curves_csv(Index n, double mu, const std::vector<BoundCurveRow>& rows) {
  std::string out = "# n=" + std::to_string(n) + "\n# mu=" + format_double(mu) + "\n";
  out += "kp,p0,bp_tight,bp_simple,product,total\n";
  for (const auto& row : rows) {
    out += std::to_string(row.kp) + "," + std::to_string(row.p0) + "," +
           std::to_string(row.bp_tight) + "," + std::to_string(row.bp_simple) + "," +
           std::to_string(row.product) + "," + std::to_string(row.total) + "\n";
  }
  return out;
}

}  // namespace prosparse
