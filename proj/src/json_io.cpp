#include "mixop/json_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mixop {
namespace {

using nlohmann::json;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw FormatError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column) +
                      ": " + e.what());
  }
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw FormatError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(path + ": missing field '" + key + "'");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw FormatError(path + ": expected a number");
  return v.get<double>();
}

std::uint64_t unsigned_integer(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) throw FormatError(path + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) throw FormatError(path + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

DiscreteMeasure measure_from(const json& j, const std::string& path) {
  const std::size_t dim = unsigned_integer(field(j, "dim", path), path + ".dim");
  const json& pts = field(j, "points", path);
  if (!pts.is_array()) throw FormatError(path + ".points: expected an array");
  std::vector<Point> points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    points.emplace_back(numbers(pts[i], path + ".points[" + std::to_string(i) + "]"));
  }
  return DiscreteMeasure(dim, std::move(points), numbers(field(j, "weights", path), path + ".weights"));
}

MetaMeasure meta_from(const json& j, const std::string& path) {
  const json& atoms_json = field(j, "atoms", path);
  if (!atoms_json.is_array()) throw FormatError(path + ".atoms: expected an array");
  std::vector<DiscreteMeasure> atoms;
  for (std::size_t i = 0; i < atoms_json.size(); ++i) {
    atoms.push_back(measure_from(atoms_json[i], path + ".atoms[" + std::to_string(i) + "]"));
  }
  std::size_t dim = 0;
  if (j.contains("dim")) {
    dim = unsigned_integer(j["dim"], path + ".dim");
  } else if (!atoms.empty()) {
    dim = atoms.front().dim();
  } else {
    throw FormatError(path + ": an empty meta-measure needs a 'dim' field");
  }
  return MetaMeasure(dim, std::move(atoms), numbers(field(j, "weights", path), path + ".weights"));
}

ThetaMeasure theta_from(const json& j, const std::string& path) {
  const json& t = field(j, "thetas", path);
  if (!t.is_array()) throw FormatError(path + ".thetas: expected an array");
  std::vector<ThetaPoint> thetas;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::string p = path + ".thetas[" + std::to_string(i) + "]";
    thetas.emplace_back(number(field(t[i], "mean", p), p + ".mean"), number(field(t[i], "sd", p), p + ".sd"));
  }
  return ThetaMeasure(std::move(thetas), numbers(field(j, "weights", path), path + ".weights"));
}

TestSet test_set_from(const json& j, const std::string& path) {
  const json& k = field(j, "kind", path);
  if (!k.is_string()) throw FormatError(path + ".kind: expected a string");
  const std::string kind = k.get<std::string>();
  if (kind == "box") {
    return TestSet::box(numbers(field(j, "lo", path), path + ".lo"), numbers(field(j, "hi", path), path + ".hi"));
  }
  if (kind == "ball") {
    return TestSet::ball(Point(numbers(field(j, "center", path), path + ".center")),
                         number(field(j, "r", path), path + ".r"));
  }
  if (kind == "halfspace") {
    return TestSet::half_space(numbers(field(j, "n", path), path + ".n"), number(field(j, "c", path), path + ".c"));
  }
  throw FormatError(path + ".kind: unknown test set kind '" + kind + "'");
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

std::string array17(std::span<const double> xs) {
  std::vector<std::string> parts;
  for (double x : xs) parts.push_back(fmt17(x));
  return "[" + join(parts) + "]";
}

GroundMetric metric_from(const std::string& name, const std::string& path) {
  if (name == "w1") return GroundMetric::W1;
  if (name == "bl") return GroundMetric::BoundedLipschitz;
  throw FormatError(path + ": metric must be 'w1' or 'bl'");
}

}  // namespace

DiscreteMeasure parse_measure(const std::string& text) { return measure_from(parse_text(text), "$"); }
MetaMeasure parse_meta_measure(const std::string& text) { return meta_from(parse_text(text), "$"); }
ThetaMeasure parse_theta_measure(const std::string& text) { return theta_from(parse_text(text), "$"); }
TestSet parse_test_set(const std::string& text) { return test_set_from(parse_text(text), "$"); }

ConvergenceConfig parse_convergence_config(const std::string& text) {
  const json j = parse_text(text);
  ConvergenceConfig cfg;
  auto& spec = cfg.spec;
  const json& kind = field(j, "kind", "$");
  if (!kind.is_string()) throw FormatError("$.kind: expected a string");
  try {
    spec.kind = parse_sequence_kind(kind.get<std::string>());
  } catch (const Error& e) {
    throw FormatError(std::string("$.kind: ") + e.what());
  }
  const json& base = field(j, "base", "$");
  if (spec.kind == SequenceKind::ThetaPath) {
    spec.base = theta_from(base, "$.base");
  } else {
    spec.base = meta_from(base, "$.base");
  }
  if (j.contains("steps")) spec.steps = unsigned_integer(j["steps"], "$.steps");
  if (j.contains("schedule")) spec.schedule = numbers(j["schedule"], "$.schedule");
  if (j.contains("seed")) spec.seed = unsigned_integer(j["seed"], "$.seed");
  if (j.contains("direction")) spec.direction = numbers(j["direction"], "$.direction");
  if (j.contains("start_weights")) spec.start_weights = numbers(j["start_weights"], "$.start_weights");
  if (j.contains("theta_step")) {
    const json& t = j["theta_step"];
    spec.theta_mean_step = number(field(t, "mean", "$.theta_step"), "$.theta_step.mean");
    spec.theta_sd_step = number(field(t, "sd", "$.theta_step"), "$.theta_step.sd");
  }
  if (j.contains("n_quantiles")) spec.n_quantiles = unsigned_integer(j["n_quantiles"], "$.n_quantiles");
  if (j.contains("samples_per_step")) spec.samples_per_step = unsigned_integer(j["samples_per_step"], "$.samples_per_step");
  if (j.contains("metric")) {
    if (!j["metric"].is_string()) throw FormatError("$.metric: expected a string");
    cfg.options.metric = metric_from(j["metric"].get<std::string>(), "$.metric");
  }
  if (j.contains("gap_tol")) cfg.options.gap_tol = number(j["gap_tol"], "$.gap_tol");
  if (j.contains("cert_tol")) cfg.options.cert_tol = number(j["cert_tol"], "$.cert_tol");
  if (j.contains("sets")) {
    const json& sets = j["sets"];
    if (!sets.is_array()) throw FormatError("$.sets: expected an array");
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const std::string p = "$.sets[" + std::to_string(i) + "]";
      std::string id = "A" + std::to_string(i);
      if (sets[i].contains("id")) {
        if (!sets[i]["id"].is_string()) throw FormatError(p + ".id: expected a string");
        id = sets[i]["id"].get<std::string>();
      }
      cfg.sets.push_back({std::move(id), test_set_from(sets[i], p)});
    }
  }
  return cfg;
}

std::string to_json(const DiscreteMeasure& mu) {
  std::vector<std::string> pts;
  for (const auto& p : mu.points()) pts.push_back(array17(p.coords()));
  return "{\"dim\":" + std::to_string(mu.dim()) + ",\"points\":[" + join(pts) + "],\"weights\":" +
         array17(mu.weights()) + "}";
}

std::string to_json(const MetaMeasure& nu) {
  std::vector<std::string> atoms;
  for (const auto& mu : nu.atoms()) atoms.push_back(to_json(mu));
  return "{\"dim\":" + std::to_string(nu.dim()) + ",\"weights\":" + array17(nu.weights()) + ",\"atoms\":[" +
         join(atoms) + "]}";
}

std::string to_json(const ThetaMeasure& lambda) {
  std::vector<std::string> thetas;
  for (const auto& t : lambda.thetas) {
    thetas.push_back("{\"mean\":" + fmt17(t.mean()) + ",\"sd\":" + fmt17(t.sd()) + "}");
  }
  return "{\"thetas\":[" + join(thetas) + "],\"weights\":" + array17(lambda.weights) + "}";
}

std::string to_json(const TestSet& a) {
  if (const auto* b = std::get_if<Box>(&a.shape())) {
    return "{\"kind\":\"box\",\"lo\":" + array17(b->lo) + ",\"hi\":" + array17(b->hi) + "}";
  }
  if (const auto* b = std::get_if<Ball>(&a.shape())) {
    return "{\"kind\":\"ball\",\"center\":" + array17(b->center.coords()) + ",\"r\":" + fmt17(b->radius) + "}";
  }
  const auto& h = std::get<HalfSpace>(a.shape());
  return "{\"kind\":\"halfspace\",\"n\":" + array17(h.normal) + ",\"c\":" + fmt17(h.offset) + "}";
}

std::string summary_json(const ConvergenceRun& run) {
  const auto& rep = run.report;
  const auto& cert = run.certificate;
  json sets = json::array();
  for (std::size_t a = 0; a < rep.set_ids.size(); ++a) {
    sets.push_back({{"id", rep.set_ids[a]},
                    {"verdict", to_string(rep.verdicts[a])},
                    {"boundary_mass", rep.boundary_masses[a]},
                    {"min_boundary_distance", rep.min_boundary_distances[a]},
                    {"final_gap", rep.steps.back().set_gaps[a]}});
  }
  json out = {
      {"kind", to_string(run.spec.kind)},
      {"steps", rep.steps.size()},
      {"seed", run.spec.seed},
      {"metric", rep.metric == GroundMetric::W1 ? "w1" : "bl"},
      {"probability_ensembles", rep.probability_ensembles},
      {"mass_bound", rep.mass_bound},
      {"rate_constant", run.rate_constant},
      {"sets", sets},
      {"certificate",
       {{"final_d_meta", cert.final_d_meta},
        {"final_d_mixed", cert.final_d_mixed},
        {"distances_vanish", cert.distances_vanish},
        {"nonexpansive_checked", cert.nonexpansive_checked},
        {"max_excess", cert.max_excess},
        {"d_meta_strictly_decreasing", cert.d_meta_strictly_decreasing},
        {"d_mixed_nonincreasing", cert.d_mixed_nonincreasing},
        {"observed_slope", cert.observed_slope}}},
  };
  return out.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mixop
