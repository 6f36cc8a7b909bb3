#include "tdosc/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tdosc {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ScenarioParseError(msg); }

void expect_keys(const json& obj, const std::set<std::string>& required,
                 const std::set<std::string>& optional, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!required.count(it.key()) && !optional.count(it.key()))
      fail("unknown key '" + it.key() + "' in " + where);
  for (const auto& key : required)
    if (!obj.contains(key)) fail("missing key '" + key + "' in " + where);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  return j.get<double>();
}

std::vector<double> number_array(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where + " must be a non-empty array");
  std::vector<double> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

ParameterProfile parse_profile(const json& j, const std::string& name) {
  const std::string where = "profiles." + name;
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    fail(where + " must be an object with a string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "constant") {
    expect_keys(j, {"kind", "value"}, {}, where);
    return ParameterProfile::constant(number(j["value"], where + ".value"));
  }
  if (kind == "polynomial") {
    expect_keys(j, {"kind", "coefficients"}, {}, where);
    return ParameterProfile::polynomial(
        number_array(j["coefficients"], where + ".coefficients"));
  }
  if (kind == "sinusoidal") {
    expect_keys(j, {"kind", "amplitude", "omega"}, {"phase", "offset"}, where);
    return ParameterProfile::sinusoidal(
        number(j["amplitude"], where + ".amplitude"),
        number(j["omega"], where + ".omega"),
        j.contains("phase") ? number(j["phase"], where + ".phase") : 0.0,
        j.contains("offset") ? number(j["offset"], where + ".offset") : 0.0);
  }
  if (kind == "exponential") {
    expect_keys(j, {"kind", "amplitude", "rate"}, {"offset"}, where);
    return ParameterProfile::exponential(
        number(j["amplitude"], where + ".amplitude"),
        number(j["rate"], where + ".rate"),
        j.contains("offset") ? number(j["offset"], where + ".offset") : 0.0);
  }
  if (kind == "tabulated") {
    expect_keys(j, {"kind", "times", "values"}, {}, where);
    auto times = number_array(j["times"], where + ".times");
    auto values = number_array(j["values"], where + ".values");
    if (times.size() != values.size() || times.size() < 2)
      fail(where + ": times and values need equal length >= 2");
    for (size_t i = 1; i < times.size(); ++i)
      if (times[i] <= times[i - 1]) fail(where + ".times must increase strictly");
    return ParameterProfile::tabulated(std::move(times), std::move(values));
  }
  fail(where + ": unknown profile kind '" + kind + "'");
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("scenario must be a JSON object");
  expect_keys(doc, {"name", "interval", "profiles"},
              {"e", "hbar", "theta_tolerance", "solver", "grid"}, "scenario");

  Scenario sc;
  if (!doc["name"].is_string() || doc["name"].get<std::string>().empty())
    fail("scenario name must be a non-empty string");
  sc.name = doc["name"].get<std::string>();

  const auto interval = number_array(doc["interval"], "interval");
  if (interval.size() != 2 || !(interval[0] < interval[1]))
    fail("interval must be [t0, t1] with t0 < t1");
  sc.params.t0 = interval[0];
  sc.params.t1 = interval[1];

  const json& profiles = doc["profiles"];
  if (!profiles.is_object()) fail("profiles must be an object");
  expect_keys(profiles, {"m1", "m2", "C1", "C2", "C3", "B"}, {}, "profiles");
  sc.params.m1 = parse_profile(profiles["m1"], "m1");
  sc.params.m2 = parse_profile(profiles["m2"], "m2");
  sc.params.C1 = parse_profile(profiles["C1"], "C1");
  sc.params.C2 = parse_profile(profiles["C2"], "C2");
  sc.params.C3 = parse_profile(profiles["C3"], "C3");
  sc.params.B = parse_profile(profiles["B"], "B");

  if (doc.contains("e")) sc.params.e = number(doc["e"], "e");
  if (doc.contains("hbar")) sc.params.hbar = number(doc["hbar"], "hbar");
  if (doc.contains("theta_tolerance")) {
    sc.theta_tolerance = number(doc["theta_tolerance"], "theta_tolerance");
    if (sc.theta_tolerance <= 0.0) fail("theta_tolerance must be positive");
  }

  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    if (!s.is_object()) fail("solver must be an object");
    expect_keys(s, {}, {"rtol", "atol", "h_fixed", "max_steps"}, "solver");
    if (s.contains("rtol")) sc.solver.rtol = number(s["rtol"], "solver.rtol");
    if (s.contains("atol")) sc.solver.atol = number(s["atol"], "solver.atol");
    if (s.contains("h_fixed")) sc.solver.h_fixed = number(s["h_fixed"], "solver.h_fixed");
    if (s.contains("max_steps")) {
      if (!s["max_steps"].is_number_integer()) fail("solver.max_steps must be integral");
      sc.solver.max_steps = s["max_steps"].get<long>();
    }
    if (sc.solver.rtol <= 0.0 || sc.solver.atol <= 0.0 || sc.solver.h_fixed <= 0.0 ||
        sc.solver.max_steps <= 0)
      fail("solver options must be positive");
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_object()) fail("grid must be an object");
    expect_keys(g, {}, {"n", "widths"}, "grid");
    if (g.contains("n")) {
      if (!g["n"].is_number_integer()) fail("grid.n must be integral");
      sc.grid.n = g["n"].get<int>();
    }
    if (g.contains("widths")) sc.grid.widths = number(g["widths"], "grid.widths");
    if (sc.grid.n < 16 || sc.grid.widths <= 0.0)
      fail("grid needs n >= 16 and positive widths");
  }

  const ValidationReport report = validate_params(sc.params);
  if (!report.valid()) {
    const ValidationIssue& issue = report.issues.front();
    fail("scenario '" + sc.name + "' fails check " + issue.check + " at t=" +
         std::to_string(issue.t) + ": " + issue.message);
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace tdosc
