#include "ouq/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ouq/errors.hpp"

namespace ouq {

namespace {

using json = nlohmann::json;

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  raise(ErrorCode::ValidationError, field + ": " + what);
}

// Wraps one JSON object, remembers its path for messages, and rejects keys
// nobody asked about.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) invalid(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* get(std::string_view key) {
    seen_.emplace(key);
    auto it = node_.find(std::string(key));
    return it == node_.end() ? nullptr : &*it;
  }

  const json& require(std::string_view key) {
    const json* v = get(key);
    if (!v) invalid(field(key), "required key is missing");
    return *v;
  }

  double number(std::string_view key, double fallback) {
    const json* v = get(key);
    return v ? as_number(*v, field(key)) : fallback;
  }

  std::uint64_t integer(std::string_view key, std::uint64_t fallback) {
    const json* v = get(key);
    return v ? as_integer(*v, field(key)) : fallback;
  }

  std::string string(std::string_view key, std::string fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_string()) invalid(field(key), "expected a string");
    return v->get<std::string>();
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) invalid(field(it.key()), "unknown key");
    }
  }

  static double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) invalid(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) invalid(field, "must be finite");
    return x;
  }

  static std::uint64_t as_integer(const json& v, const std::string& field) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      invalid(field, "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

Strategy parse_strategy(const std::string& name, const std::string& field) {
  if (name == "best1exp") return Strategy::Best1ExpStandard;
  if (name == "best1exp-snippet") return Strategy::Best1ExpPaperSnippet;
  invalid(field, "unknown strategy '" + name + "' (best1exp, best1exp-snippet)");
}

BoundsMode parse_bounds_mode(const std::string& name, const std::string& field) {
  if (name == "clip") return BoundsMode::Clip;
  if (name == "reject") return BoundsMode::Reject;
  invalid(field, "unknown bounds mode '" + name + "' (clip, reject)");
}

DESettings parse_de(Section section, DESettings settings) {
  settings.npop = section.integer("npop", settings.npop);
  settings.cross_probability = section.number("cross_probability", settings.cross_probability);
  settings.scaling_factor = section.number("scaling_factor", settings.scaling_factor);
  if (const json* v = section.get("strategy")) {
    if (!v->is_string()) invalid(section.field("strategy"), "expected a string");
    settings.strategy = parse_strategy(v->get<std::string>(), section.field("strategy"));
  }
  settings.max_generations = section.integer("max_generations", settings.max_generations);
  if (const json* v = section.get("bounds_mode")) {
    if (!v->is_string()) invalid(section.field("bounds_mode"), "expected a string");
    settings.bounds_mode = parse_bounds_mode(v->get<std::string>(), section.field("bounds_mode"));
  }
  settings.threads = static_cast<unsigned>(section.integer("threads", settings.threads));
  section.finish();
  return settings;
}

TerminationRule parse_termination(Section section) {
  const std::string rule = section.string("rule", "");
  TerminationRule out;
  if (rule == "change_over_generation") {
    out = ChangeOverGeneration{section.number("tolerance", 1e-4), section.integer("generations", 10)};
  } else if (rule == "value_below") {
    out = ValueBelow{section.number("tolerance", 0.0)};
  } else if (rule == "max_generations") {
    out = MaxGenerations{section.integer("limit", 1000)};
  } else {
    invalid(section.field("rule"),
            "expected change_over_generation, value_below or max_generations");
  }
  section.finish();
  return out;
}

// Returns the multiplier taking values in `unit` to canonical units.
double unit_scale(const std::string& unit, const std::string& field) {
  if (unit.empty() || unit == "mm" || unit == "rad" || unit == "km/s" || unit == "none") return 1.0;
  if (unit == "mil" || unit == "mils") return sphir::kMmPerMil;
  if (unit == "deg") return std::numbers::pi / 180.0;
  invalid(field, "unknown unit '" + unit + "' (mm, mil, rad, deg, km/s, none)");
}

AxisBounds parse_axis(Section section) {
  AxisBounds axis;
  axis.unit = section.string("unit", "");
  const double scale = unit_scale(axis.unit, section.field("unit"));
  axis.lower = Section::as_number(section.require("lower"), section.field("lower")) * scale;
  axis.upper = Section::as_number(section.require("upper"), section.field("upper")) * scale;
  section.finish();
  return axis;
}

sphir::SurrogateParams parse_surrogate(Section section) {
  sphir::SurrogateParams p;
  p.H0 = section.number("H0", p.H0);
  p.s = section.number("s", p.s);
  p.n = section.number("n", p.n);
  p.K = section.number("K", p.K);
  p.p = section.number("p", p.p);
  p.u = section.number("u", p.u);
  p.m_exp = section.number("m_exp", p.m_exp);
  p.Dp = section.number("Dp", p.Dp);
  section.finish();
  return p;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

ParamLayout RunConfig::layout() const {
  ParamLayout layout;
  layout.npts_per_dim = npts_per_dim;
  for (const auto& b : bounds_per_dim) layout.bounds_per_dim.push_back({b.lower, b.upper});
  return layout;
}

void RunConfig::validate() const {
  if (response.empty()) invalid("response", "must name a registered response");
  if (npts_per_dim.empty()) invalid("npts_per_dim", "needs at least one dimension");
  for (std::size_t i = 0; i < npts_per_dim.size(); ++i) {
    if (npts_per_dim[i] < 1) {
      invalid("npts_per_dim[" + std::to_string(i) + "]", "must be at least 1");
    }
  }
  if (bounds_per_dim.size() != npts_per_dim.size()) {
    invalid("bounds_per_dim", "needs one entry per dimension of npts_per_dim");
  }
  for (std::size_t i = 0; i < bounds_per_dim.size(); ++i) {
    if (!(bounds_per_dim[i].lower < bounds_per_dim[i].upper)) {
      invalid("bounds_per_dim[" + std::to_string(i) + "]", "lower must be below upper");
    }
  }
  if (!(m1 <= m2)) invalid("mean_band", "m1 must not exceed m2");
  if (!(m1 < m2)) invalid("mean_band", "band must have positive width");
  if (!(failure_tolerance >= 0.0)) invalid("failure_tolerance", "must be nonnegative");
  if (runs < 1) invalid("runs", "must be at least 1");
  if (surrogate) {
    try {
      surrogate->validate();
    } catch (const Error&) {
      invalid("surrogate", "all parameters must be positive");
    }
  }
  auto check_de = [](const DESettings& s, const std::string& name) {
    try {
      s.validate();
    } catch (const Error& e) {
      invalid(name, e.what());
    }
  };
  check_de(outer, "outer");
  check_de(inner, "inner");
  if (const auto* cog = std::get_if<ChangeOverGeneration>(&outer_termination)) {
    if (!(cog->tolerance > 0.0) || cog->generations < 1) {
      invalid("outer_termination", "change_over_generation needs positive tolerance and generations");
    }
  }
}

RunConfig parse_config(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::ParseError, std::string(source) + ":" +
                                     std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }

  RunConfig config;
  Section root(doc, "");
  config.response = root.string("response", "");
  if (config.response.empty()) invalid("response", "required key is missing");

  if (const json* s = root.get("surrogate")) config.surrogate = parse_surrogate(Section(*s, "surrogate"));

  const json& npts = root.require("npts_per_dim");
  if (!npts.is_array()) invalid("npts_per_dim", "expected an array");
  for (std::size_t i = 0; i < npts.size(); ++i) {
    config.npts_per_dim.push_back(
        Section::as_integer(npts[i], "npts_per_dim[" + std::to_string(i) + "]"));
  }

  const json& bounds = root.require("bounds_per_dim");
  if (!bounds.is_array()) invalid("bounds_per_dim", "expected an array");
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    config.bounds_per_dim.push_back(
        parse_axis(Section(bounds[i], "bounds_per_dim[" + std::to_string(i) + "]")));
  }

  {
    Section band(root.require("mean_band"), "mean_band");
    const json* m1 = band.get("m1");
    const json* m2 = band.get("m2");
    const json* m = band.get("m");
    const json* d = band.get("d");
    if (m1 && m2 && !m && !d) {
      config.m1 = Section::as_number(*m1, "mean_band.m1");
      config.m2 = Section::as_number(*m2, "mean_band.m2");
    } else if (m && d && !m1 && !m2) {
      const double centre = Section::as_number(*m, "mean_band.m");
      const double dev = Section::as_number(*d, "mean_band.d");
      if (!(dev > 0.0)) invalid("mean_band.d", "must be positive");
      config.m1 = centre - dev;
      config.m2 = centre + dev;
    } else {
      invalid("mean_band", "give either {m1, m2} or {m, d}");
    }
    band.finish();
  }

  config.failure_tolerance = root.number("failure_tolerance", config.failure_tolerance);
  if (const json* v = root.get("outer")) config.outer = parse_de(Section(*v, "outer"), config.outer);
  if (const json* v = root.get("inner")) config.inner = parse_de(Section(*v, "inner"), config.inner);
  if (const json* v = root.get("outer_termination")) {
    config.outer_termination = parse_termination(Section(*v, "outer_termination"));
  }
  config.seed = root.integer("seed", config.seed);
  config.runs = root.integer("runs", config.runs);
  config.output_dir = root.string("output_dir", config.output_dir.string());
  root.finish();

  config.validate();
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open config '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

OUQProblem to_problem(const RunConfig& config, const ResponseRegistry& registry) {
  config.validate();
  const ResponseEntry entry = (config.surrogate && config.response == kSphirResponse)
                                  ? make_sphir_entry(*config.surrogate)
                                  : registry.find(config.response);
  if (entry.arity != config.npts_per_dim.size()) {
    raise(ErrorCode::ArityMismatch, "response '" + entry.name + "' takes " +
                                        std::to_string(entry.arity) + " inputs but the layout has " +
                                        std::to_string(config.npts_per_dim.size()) + " dimensions");
  }
  OUQProblem problem;
  problem.response = entry.fn;
  problem.layout = config.layout();
  problem.constraint = MeanConstraint::from_band(config.m1, config.m2);
  problem.failure_tolerance = config.failure_tolerance;
  problem.outer = config.outer;
  problem.outer.seed = config.seed;
  problem.inner = config.inner;
  problem.outer_termination = config.outer_termination;
  problem.inner_max_generations = config.inner.max_generations;
  return problem;
}

}  // namespace ouq
