#include "bakerlab/observable.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bakerlab/errors.hpp"
#include "json.hpp"

namespace bakerlab {

using nlohmann::json;

ObservableSpec ObservableSpec::constant(double value) {
  ObservableSpec s;
  if (value != 0.0) s.modes[{0, 0}] = value;
  return s;
}

ObservableSpec ObservableSpec::cos_q(double amplitude) {
  ObservableSpec s;
  s.modes[{0, 1}] = 0.5 * amplitude;
  s.modes[{0, -1}] = 0.5 * amplitude;
  return s;
}

ObservableSpec ObservableSpec::standard() {
  // cos(2 pi q) cos(2 pi p) = (1/4) sum over k1, k2 = +-1 of e_{(k1,k2)}
  ObservableSpec s;
  for (long k1 : {-1L, 1L})
    for (long k2 : {-1L, 1L}) s.modes[{k1, k2}] = 0.25;
  return s;
}

ObservableSpec ObservableSpec::mode(LatticeVector k, Complex coefficient) {
  ObservableSpec s;
  s.modes[k] = coefficient;
  return s;
}

void validate_structure(const ObservableSpec& spec) {
  for (const auto& [k, c] : spec.modes)
    require(std::isfinite(c.real()) && std::isfinite(c.imag()),
            "observable: non-finite coefficient");
  if (spec.cutoff) {
    require(spec.cutoff->delta > 0.0 && spec.cutoff->delta < 0.25,
            "observable: cutoff delta must lie in (0, 1/4)");
  }
}

void validate_observable(const ObservableSpec& spec, double tolerance) {
  validate_structure(spec);
  for (const auto& [k, c] : spec.modes) {
    auto it = spec.modes.find(-k);
    const Complex partner = it == spec.modes.end() ? Complex{} : it->second;
    if (std::abs(partner - std::conj(c)) > tolerance)
      throw ValidationError("observable is not real: coefficient at (" + std::to_string(-k.k1) +
                            "," + std::to_string(-k.k2) +
                            ") is not the conjugate of the one at (" + std::to_string(k.k1) +
                            "," + std::to_string(k.k2) + ")");
  }
}

Complex evaluate_series(const CoefficientTable& modes, PhasePoint x) {
  Complex sum{};
  for (const auto& [k, c] : modes) {
    // Reduce the phase before scaling by 2 pi to keep large k accurate.
    double phase = x.q * static_cast<double>(k.k2) - x.p * static_cast<double>(k.k1);
    phase -= std::floor(phase);
    const double angle = 2.0 * std::numbers::pi * phase;
    sum += c * Complex(std::cos(angle), std::sin(angle));
  }
  return sum;
}

double observable_eval(const ObservableSpec& spec, PhasePoint x, bool strict) {
  const PhasePoint y = baker_iterate(x, -static_cast<long>(spec.time_shift), strict);
  double value = evaluate_series(spec.modes, y).real();
  if (spec.cutoff) value *= cutoff_value(y, spec.cutoff->delta, spec.cutoff->time, spec.cutoff->bump);
  return value;
}

PhaseFunction as_function(const ObservableSpec& spec) {
  return [spec](const PhasePoint& x) { return observable_eval(spec, x); };
}

CoefficientTable multiply(const CoefficientTable& a, const CoefficientTable& b) {
  CoefficientTable out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) out[ka + kb] += ca * cb;
  return out;
}

namespace {

Bump parse_bump(const std::string& s) {
  if (s == "exp") return Bump::exp;
  if (s == "poly") return Bump::poly;
  throw ValidationError("observable: unknown bump '" + s + "' (expected exp or poly)");
}

}  // namespace

ObservableSpec observable_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("observable: malformed JSON: ") + e.what());
  }
  ObservableSpec spec;
  try {
    require(doc.is_object(), "observable: top level must be an object");
    for (const auto& m : doc.at("modes")) {
      const auto& k = m.at("k");
      require(k.is_array() && k.size() == 2, "observable: mode index must be [k1,k2]");
      const LatticeVector lv{k[0].get<long>(), k[1].get<long>()};
      const Complex c{m.value("re", 0.0), m.value("im", 0.0)};
      spec.modes[lv] += c;
    }
    if (doc.contains("cutoff") && !doc["cutoff"].is_null()) {
      const auto& c = doc["cutoff"];
      spec.cutoff = CutoffSpec{c.at("delta").get<double>(), c.value("time", 0),
                               parse_bump(c.value("bump", std::string("exp")))};
    }
    spec.time_shift = doc.value("time_shift", 0);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("observable: ") + e.what());
  }
  validate_observable(spec);
  return spec;
}

std::string observable_to_json(const ObservableSpec& spec) {
  json doc;
  doc["modes"] = json::array();
  for (const auto& [k, c] : spec.modes)
    doc["modes"].push_back({{"k", {k.k1, k.k2}}, {"re", c.real()}, {"im", c.imag()}});
  if (spec.cutoff) {
    doc["cutoff"] = {{"delta", spec.cutoff->delta},
                     {"time", spec.cutoff->time},
                     {"bump", spec.cutoff->bump == Bump::exp ? "exp" : "poly"}};
  } else {
    doc["cutoff"] = nullptr;
  }
  doc["time_shift"] = spec.time_shift;
  return doc.dump();
}

ObservableSpec load_observable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("observable: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return observable_from_json(buffer.str());
}

}  // namespace bakerlab
