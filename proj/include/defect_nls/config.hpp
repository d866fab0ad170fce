#pragma once

// Run configuration: JSON in, validated RunConfig out. Every diagnostic names
// the offending field.

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "defect_nls/defect.hpp"
#include "json.hpp"

namespace defect_nls {

enum class Mode { defect_nsoliton, destructive, whole_line };

constexpr std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::defect_nsoliton: return "defect-nsoliton";
    case Mode::destructive: return "destructive";
    case Mode::whole_line: return "whole-line";
  }
  return "unknown";
}

inline constexpr std::size_t kMaxGridNodes = 10'000'000;

struct GridSpec {
  double t_min = -5.0;
  double t_max = 5.0;
  std::size_t nt = 2;
  double x_min = -5.0;
  double x_max = 5.0;
  std::size_t nx = 2;

  double t_at(std::size_t i) const { return node(t_min, t_max, nt, i); }
  double x_at(std::size_t k) const { return node(x_min, x_max, nx, k); }

 private:
  static double node(double lo, double hi, std::size_t n, std::size_t i) {
    const double v = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return std::abs(v) <= 1e-12 * (hi - lo) ? 0.0 : v;
  }
};

/// Name and default tolerance of every check verify_all knows.
struct CheckSpec {
  std::string_view name;
  double tolerance;
  bool enabled_by_default;
};

inline constexpr std::array<CheckSpec, 14> kCheckSpecs{{
    {"projector_laws", 1e-13, true},
    {"determinant_factorization", 1e-10, true},
    {"dressing_symmetry", 1e-11, true},
    {"kernel_transport", 1e-9, true},
    {"permutability_identity", 1e-9, true},
    {"gn_determinant_invariance", 1e-10, true},
    {"defect_residual", 1e-6, true},
    {"omega_admissibility", 1e-10, true},
    {"boundary_constraint", 1e-6, true},
    {"nls_residual", 1e-6, true},
    {"oracle_equivalence", 1e-8, true},
    {"closed_form_triangle", 1e-10, true},
    {"shift_prediction", 2e-2, true},
    {"branch_consistency", 0.0, false},
}};

inline const CheckSpec* find_check(std::string_view name) {
  for (const auto& c : kCheckSpecs) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

struct VerifyConfig {
  bool enabled = true;
  std::map<std::string, bool, std::less<>> toggles;
  std::map<std::string, double, std::less<>> tolerances;
  std::uint64_t seed = 1;

  bool is_enabled(std::string_view name) const {
    if (!enabled) return false;
    if (auto it = toggles.find(name); it != toggles.end()) return it->second;
    const auto* spec = find_check(name);
    return spec != nullptr && spec->enabled_by_default;
  }

  double tolerance(std::string_view name) const {
    if (auto it = tolerances.find(name); it != tolerances.end()) return it->second;
    const auto* spec = find_check(name);
    return spec != nullptr ? spec->tolerance : 0.0;
  }
};

struct RunConfig {
  Mode mode = Mode::defect_nsoliton;
  DefectParams defect;
  std::vector<SpectralPoint> solitons;
  Vec2C psi0_init{1.0, 0.0};
  std::optional<Vec2C> center_init;
  Pairing pairing = Pairing::matched;
  GridSpec grid;
  VerifyConfig verify;
  std::string csv_name = "field.csv";
  std::string report_name = "report.json";
};

inline constexpr std::string_view kConfigSchema = R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "defect-nls run configuration",
  "type": "object",
  "additionalProperties": false,
  "required": ["mode", "defect", "grid"],
  "$defs": {
    "complex": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    "vec2": {"type": "array", "items": {"$ref": "#/$defs/complex"}, "minItems": 2, "maxItems": 2},
    "axis": {"type": "array", "prefixItems": [{"type": "number"}, {"type": "number"}, {"type": "integer", "minimum": 2}], "minItems": 3, "maxItems": 3}
  },
  "properties": {
    "mode": {"enum": ["defect-nsoliton", "destructive", "whole-line"]},
    "defect": {
      "type": "object",
      "additionalProperties": false,
      "required": ["alpha", "beta"],
      "properties": {
        "alpha": {"type": "number"},
        "beta": {"type": "number", "not": {"const": 0}},
        "branch": {"enum": ["plus", "minus"], "default": "plus"}
      }
    },
    "solitons": {
      "type": "array",
      "items": {
        "type": "object",
        "additionalProperties": false,
        "required": ["lambda", "init"],
        "properties": {"lambda": {"$ref": "#/$defs/complex"}, "init": {"$ref": "#/$defs/vec2"}}
      }
    },
    "psi0_init": {"$ref": "#/$defs/vec2", "default": [[1, 0], [0, 0]]},
    "center_init": {"$ref": "#/$defs/vec2"},
    "pairing": {"enum": ["matched", "mismatched"], "default": "matched"},
    "grid": {
      "type": "object",
      "additionalProperties": false,
      "required": ["t", "x"],
      "properties": {"t": {"$ref": "#/$defs/axis"}, "x": {"$ref": "#/$defs/axis"}}
    },
    "verify": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "enabled": {"type": "boolean", "default": true},
        "seed": {"type": "integer", "minimum": 0},
        "checks": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "tolerances": {"type": "object", "additionalProperties": {"type": "number", "exclusiveMinimum": 0}}
      }
    },
    "output": {
      "type": "object",
      "additionalProperties": false,
      "properties": {"csv": {"type": "string"}, "report": {"type": "string"}}
    },
    "seed_note": {"const": "zero"},
    "description": {"type": "string"}
  }
}
)";

namespace detail {

using Json = nlohmann::json;

[[noreturn]] inline void schema_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::SchemaViolation, field + ": " + what);
}

[[noreturn]] inline void invariant_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::InvariantViolation, field + ": " + what);
}

inline void reject_unknown_keys(const Json& obj, const std::string& field, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) schema_error(field.empty() ? key : field + "." + key, "unknown field");
  }
}

inline const Json& require_object(const Json& j, const std::string& field) {
  if (!j.is_object()) schema_error(field, "expected an object");
  return j;
}

inline double read_number(const Json& j, const std::string& field) {
  if (!j.is_number()) schema_error(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invariant_error(field, "must be finite");
  return v;
}

inline Complex read_complex(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) schema_error(field, "expected [re, im]");
  return {read_number(j[0], field + "[0]"), read_number(j[1], field + "[1]")};
}

inline Vec2C read_vec2(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) schema_error(field, "expected [[re, im], [re, im]]");
  return {read_complex(j[0], field + "[0]"), read_complex(j[1], field + "[1]")};
}

inline std::string read_string(const Json& j, const std::string& field) {
  if (!j.is_string()) schema_error(field, "expected a string");
  return j.get<std::string>();
}

inline void read_axis(const Json& j, const std::string& field, double& lo, double& hi, std::size_t& n) {
  if (!j.is_array() || j.size() != 3) schema_error(field, "expected [min, max, n]");
  lo = read_number(j[0], field + "[0]");
  hi = read_number(j[1], field + "[1]");
  if (!j[2].is_number_integer()) schema_error(field + "[2]", "expected an integer node count");
  const auto count = j[2].get<std::int64_t>();
  if (count < 2) invariant_error(field + "[2]", "node count must be at least 2");
  if (!(lo < hi)) invariant_error(field, "min must be below max");
  n = static_cast<std::size_t>(count);
}

/// 1-based line and column of a byte offset.
inline std::string line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Validates a parsed JSON document.
inline RunConfig config_from_json(const nlohmann::json& root) {
  using detail::invariant_error;
  using detail::schema_error;
  detail::require_object(root, "<root>");
  detail::reject_unknown_keys(root, "", {"mode", "defect", "solitons", "psi0_init", "center_init", "pairing", "grid",
                                         "verify", "output", "seed_note", "description"});
  RunConfig cfg;

  if (!root.contains("mode")) schema_error("mode", "missing");
  const auto mode = detail::read_string(root["mode"], "mode");
  if (mode == "defect-nsoliton") {
    cfg.mode = Mode::defect_nsoliton;
  } else if (mode == "destructive") {
    cfg.mode = Mode::destructive;
  } else if (mode == "whole-line") {
    cfg.mode = Mode::whole_line;
  } else {
    schema_error("mode", "expected defect-nsoliton, destructive or whole-line");
  }

  if (!root.contains("defect")) schema_error("defect", "missing");
  const auto& d = detail::require_object(root["defect"], "defect");
  detail::reject_unknown_keys(d, "defect", {"alpha", "beta", "branch"});
  if (!d.contains("alpha")) schema_error("defect.alpha", "missing");
  if (!d.contains("beta")) schema_error("defect.beta", "missing");
  cfg.defect.alpha = detail::read_number(d["alpha"], "defect.alpha");
  cfg.defect.beta = detail::read_number(d["beta"], "defect.beta");
  if (std::abs(cfg.defect.beta) < kMinBeta) invariant_error("defect.beta", "|beta| must be at least 1e-9");
  if (d.contains("branch")) {
    const auto b = detail::read_string(d["branch"], "defect.branch");
    if (b == "plus") {
      cfg.defect.branch = Branch::plus;
    } else if (b == "minus") {
      cfg.defect.branch = Branch::minus;
    } else {
      schema_error("defect.branch", "expected plus or minus");
    }
  }

  if (root.contains("solitons")) {
    const auto& arr = root["solitons"];
    if (!arr.is_array()) schema_error("solitons", "expected an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string field = "solitons[" + std::to_string(k) + "]";
      detail::require_object(arr[k], field);
      detail::reject_unknown_keys(arr[k], field, {"lambda", "init"});
      if (!arr[k].contains("lambda")) schema_error(field + ".lambda", "missing");
      if (!arr[k].contains("init")) schema_error(field + ".init", "missing");
      SpectralPoint sp{detail::read_complex(arr[k]["lambda"], field + ".lambda"),
                       detail::read_vec2(arr[k]["init"], field + ".init")};
      if (std::abs(sp.lambda.imag()) < kMinImag) invariant_error(field + ".lambda", "|Im lambda| must be at least 1e-6");
      if (norm_sq(sp.init) == 0.0) invariant_error(field + ".init", "must be nonzero");
      for (std::size_t m = 0; m < cfg.solitons.size(); ++m) {
        if (std::abs(cfg.solitons[m].lambda - sp.lambda) < kMinSeparation) {
          invariant_error(field + ".lambda", "coincides with solitons[" + std::to_string(m) + "].lambda");
        }
      }
      if (cfg.mode == Mode::defect_nsoliton) {
        const Complex l0 = lambda0(cfg.defect);
        if (std::abs(sp.lambda - l0) < kForbiddenRadius || std::abs(sp.lambda - std::conj(l0)) < kForbiddenRadius) {
          invariant_error(field + ".lambda", "coincides with lambda0 or its conjugate");
        }
      }
      cfg.solitons.push_back(sp);
    }
  }

  if (root.contains("psi0_init")) {
    cfg.psi0_init = detail::read_vec2(root["psi0_init"], "psi0_init");
    if (norm_sq(cfg.psi0_init) == 0.0) invariant_error("psi0_init", "must be nonzero");
  }
  if (root.contains("center_init")) {
    cfg.center_init = detail::read_vec2(root["center_init"], "center_init");
    if (norm_sq(*cfg.center_init) == 0.0) invariant_error("center_init", "must be nonzero");
  }
  if (cfg.mode == Mode::destructive && !cfg.center_init) invariant_error("center_init", "required in destructive mode");
  if (root.contains("pairing")) {
    const auto p = detail::read_string(root["pairing"], "pairing");
    if (p == "matched") {
      cfg.pairing = Pairing::matched;
    } else if (p == "mismatched") {
      cfg.pairing = Pairing::mismatched;
    } else {
      schema_error("pairing", "expected matched or mismatched");
    }
  }

  if (!root.contains("grid")) schema_error("grid", "missing");
  const auto& g = detail::require_object(root["grid"], "grid");
  detail::reject_unknown_keys(g, "grid", {"t", "x"});
  if (!g.contains("t")) schema_error("grid.t", "missing");
  if (!g.contains("x")) schema_error("grid.x", "missing");
  detail::read_axis(g["t"], "grid.t", cfg.grid.t_min, cfg.grid.t_max, cfg.grid.nt);
  detail::read_axis(g["x"], "grid.x", cfg.grid.x_min, cfg.grid.x_max, cfg.grid.nx);
  if (cfg.grid.nt > kMaxGridNodes / cfg.grid.nx) invariant_error("grid", "nt * nx must not exceed 1e7");

  if (root.contains("verify")) {
    const auto& v = detail::require_object(root["verify"], "verify");
    detail::reject_unknown_keys(v, "verify", {"enabled", "seed", "checks", "tolerances"});
    if (v.contains("enabled")) {
      if (!v["enabled"].is_boolean()) schema_error("verify.enabled", "expected a boolean");
      cfg.verify.enabled = v["enabled"].get<bool>();
    }
    if (v.contains("seed")) {
      if (!v["seed"].is_number_integer() || v["seed"].get<std::int64_t>() < 0) schema_error("verify.seed", "expected a non-negative integer");
      cfg.verify.seed = v["seed"].get<std::uint64_t>();
    }
    if (v.contains("checks")) {
      const auto& c = detail::require_object(v["checks"], "verify.checks");
      for (const auto& [name, flag] : c.items()) {
        const std::string field = "verify.checks." + name;
        if (find_check(name) == nullptr) schema_error(field, "unknown check");
        if (!flag.is_boolean()) schema_error(field, "expected a boolean");
        cfg.verify.toggles[name] = flag.get<bool>();
      }
    }
    if (v.contains("tolerances")) {
      const auto& t = detail::require_object(v["tolerances"], "verify.tolerances");
      for (const auto& [name, tol] : t.items()) {
        const std::string field = "verify.tolerances." + name;
        if (find_check(name) == nullptr) schema_error(field, "unknown check");
        const double value = detail::read_number(tol, field);
        if (!(value > 0.0)) invariant_error(field, "must be positive");
        cfg.verify.tolerances[name] = value;
      }
    }
  }

  if (root.contains("output")) {
    const auto& o = detail::require_object(root["output"], "output");
    detail::reject_unknown_keys(o, "output", {"csv", "report"});
    if (o.contains("csv")) cfg.csv_name = detail::read_string(o["csv"], "output.csv");
    if (o.contains("report")) cfg.report_name = detail::read_string(o["report"], "output.report");
  }
  if (root.contains("seed_note") && detail::read_string(root["seed_note"], "seed_note") != "zero") {
    schema_error("seed_note", "only the zero seed is supported");
  }
  if (root.contains("description")) detail::read_string(root["description"], "description");
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON");
  }
  return config_from_json(root);
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace defect_nls
