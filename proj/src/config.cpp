#include "sgnet/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sgnet/errors.hpp"

namespace sgnet::config {

namespace {

constexpr struct {
  ExperimentKind kind;
  const char* name;
} kKindNames[] = {
    {ExperimentKind::CoverageVsGamma, "coverage_vs_gamma"},
    {ExperimentKind::RateVsBeta, "rate_vs_beta"},
    {ExperimentKind::CoveragePartialLoad, "coverage_partial_load"},
    {ExperimentKind::PeakRateVsRatio, "peak_rate_vs_ratio"},
    {ExperimentKind::ActualRateVsRatio, "actual_rate_vs_ratio"},
    {ExperimentKind::MgfProfile, "mgf_profile"},
    {ExperimentKind::Validate, "validate"},
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"experiment", {"kind", "l0"}},
      {"network", {"lambda_bs", "lambda_ue", "beta", "betas", "ratios", "kappa", "p_tx", "sigma_n2"}},
      {"grid", {"values", "start", "stop", "step", "count", "unit"}},
      {"simulation",
       {"enabled", "n_bs", "realizations", "seed", "idle_mode", "fading_on_interferers",
        "rayleigh_on_serving"}},
      {"output", {"path"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> linspace_step(double start, double stop, double step) {
  if (!(step > 0.0)) throw ConfigError("grid.step must be > 0", 0, "grid.step");
  if (stop < start) throw ConfigError("grid.stop must be >= grid.start", 0, "grid.stop");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = start + static_cast<double>(i) * step;
  return v;
}

std::vector<double> linspace_count(double start, double stop, long count) {
  if (count < 1) throw ConfigError("grid.count must be >= 1", 0, "grid.count");
  if (count == 1) return {start};
  std::vector<double> v(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    v[static_cast<std::size_t>(i)] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return v;
}

struct Entry {
  std::string value;
  int line;
};

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::string source)
      : entries_(std::move(entries)), source_(std::move(source)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  int line_of(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(line_of(key)) + ": " + key + ": " + msg,
                      line_of(key), key);
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return parse_number(key, entries_.at(key).value);
  }

  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = entries_.at(key).value;
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "expected an integer, got '" + s + "'");
    return v;
  }

  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = entries_.at(key).value;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "expected an unsigned integer, got '" + s + "'");
    return v;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = entries_.at(key).value;
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    fail(key, "expected true or false, got '" + s + "'");
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? entries_.at(key).value : fallback;
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(entries_.at(key).value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail(key, "empty list element");
      out.push_back(parse_number(key, item));
    }
    if (out.empty()) fail(key, "empty list");
    return out;
  }

 private:
  double parse_number(const std::string& key, const std::string& s) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      fail(key, "expected a finite number, got '" + s + "'");
    }
    return v;
  }

  std::map<std::string, Entry> entries_;
  std::string source_;
};

}  // namespace

std::string to_string(ExperimentKind k) {
  for (const auto& e : kKindNames) {
    if (e.kind == k) return e.name;
  }
  return "unknown";
}

std::optional<ExperimentKind> kind_from_string(const std::string& s) {
  for (const auto& e : kKindNames) {
    if (s == e.name) return e.kind;
  }
  return std::nullopt;
}

void ExperimentSpec::validate() const {
  auto wrap = [](const std::string& field, auto&& fn) {
    try {
      fn();
    } catch (const DomainError& e) {
      throw ConfigError(e.what(), 0, field);
    }
  };
  wrap("network.lambda_bs", [&] {
    NetworkParams q = params;
    q.beta = 4.0;
    q.validate();
  });
  if (betas.empty()) throw ConfigError("no path-loss exponent given", 0, "network.betas");
  for (double b : betas) wrap(betas.size() == 1 ? "network.beta" : "network.betas", [&] { check_beta(b); });
  for (double r : ratios) {
    if (!(r >= 0.0)) throw ConfigError("density ratios must be >= 0", 0, "network.ratios");
  }
  if (grid.empty()) throw ConfigError("grid is empty", 0, "grid.values");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("grid must be strictly increasing", 0, "grid.values");
  }
  if (!(l0 > 0.0)) throw ConfigError("l0 must be > 0", 0, "experiment.l0");
  if (sim) wrap("simulation.n_bs", [&] { sim->validate(); });

  switch (kind) {
    case ExperimentKind::RateVsBeta:
      for (double b : grid) wrap("grid.values", [&] { check_beta(b); });
      break;
    case ExperimentKind::PeakRateVsRatio:
    case ExperimentKind::ActualRateVsRatio:
      if (grid.front() < 0.0) throw ConfigError("density ratios must be >= 0", 0, "grid.values");
      break;
    case ExperimentKind::CoveragePartialLoad:
      if (ratios.empty()) throw ConfigError("coverage_partial_load needs network.ratios", 0, "network.ratios");
      break;
    case ExperimentKind::MgfProfile:
      if (grid_unit == GridUnit::Linear && grid.front() < 0.0) {
        throw ConfigError("mgf arguments must be >= 0", 0, "grid.values");
      }
      break;
    default:
      break;
  }
}

ExperimentSpec default_spec(ExperimentKind kind) {
  ExperimentSpec s;
  s.kind = kind;
  const std::vector<double> all_betas = {2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  switch (kind) {
    case ExperimentKind::CoverageVsGamma:
      s.betas = all_betas;
      s.grid = linspace_step(-10.0, 30.0, 1.0);
      s.grid_unit = GridUnit::Db;
      break;
    case ExperimentKind::RateVsBeta:
      s.betas = {};
      s.grid = linspace_count(2.5, 5.0, 26);
      break;
    case ExperimentKind::CoveragePartialLoad:
      s.betas = {4.0};
      s.ratios = {0.17, 4.34, 8.51, 11.11};
      s.grid = linspace_step(-10.0, 30.0, 1.0);
      s.grid_unit = GridUnit::Db;
      break;
    case ExperimentKind::PeakRateVsRatio:
    case ExperimentKind::ActualRateVsRatio:
      s.betas = {3.0, 4.0, 5.0};
      s.grid = linspace_step(0.1, 12.0, 0.1);
      break;
    case ExperimentKind::MgfProfile:
      s.betas = all_betas;
      s.grid = linspace_step(0.0, 20.0, 0.1);
      break;
    case ExperimentKind::Validate:
      s.grid = {0.0};
      break;
  }
  if (s.betas.empty()) s.betas = {s.params.beta};
  return s;
}

ExperimentSpec parse_config_text(const std::string& text, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto error = [&](const std::string& msg, const std::string& field = {}) {
    throw ConfigError(source + ":" + std::to_string(line_no) + ": " + msg, line_no, field);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') error("malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) error("unknown section [" + section + "]", section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) error("expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) error("key '" + key + "' appears before any section", key);
    const std::string field = section + "." + key;
    if (!schema().at(section).count(key)) error("unknown key '" + key + "' in [" + section + "]", field);
    if (value.empty()) error("empty value for '" + key + "'", field);
    if (entries.count(field)) {
      error("duplicate key '" + key + "' (first set on line " + std::to_string(entries[field].line) + ")", field);
    }
    entries[field] = Entry{value, line_no};
  }

  const Reader r(std::move(entries), source);

  ExperimentKind kind = ExperimentKind::CoverageVsGamma;
  if (r.has("experiment.kind")) {
    const auto k = kind_from_string(r.text("experiment.kind", ""));
    if (!k) r.fail("experiment.kind", "unknown experiment kind '" + r.text("experiment.kind", "") + "'");
    kind = *k;
  }
  ExperimentSpec spec = default_spec(kind);

  NetworkParams& p = spec.params;
  p.lambda_bs = r.number("network.lambda_bs", p.lambda_bs);
  p.lambda_ue = r.number("network.lambda_ue", p.lambda_ue);
  p.kappa = r.number("network.kappa", p.kappa);
  p.p_tx = r.number("network.p_tx", p.p_tx);
  p.sigma_n2 = r.number("network.sigma_n2", p.sigma_n2);
  if (r.has("network.beta") && r.has("network.betas")) {
    r.fail("network.betas", "give either beta or betas, not both");
  }
  if (r.has("network.beta")) {
    p.beta = r.number("network.beta", p.beta);
    spec.betas = {p.beta};
  } else if (r.has("network.betas")) {
    spec.betas = r.list("network.betas");
    p.beta = spec.betas.front();
  }
  if (r.has("network.ratios")) spec.ratios = r.list("network.ratios");
  spec.l0 = r.number("experiment.l0", spec.l0);

  if (r.has("grid.unit")) {
    const std::string u = r.text("grid.unit", "");
    if (u == "db") {
      spec.grid_unit = GridUnit::Db;
    } else if (u == "linear") {
      spec.grid_unit = GridUnit::Linear;
    } else {
      r.fail("grid.unit", "expected linear or db, got '" + u + "'");
    }
  }
  const bool ranged = r.has("grid.start") || r.has("grid.stop") || r.has("grid.step") || r.has("grid.count");
  if (r.has("grid.values") && ranged) r.fail("grid.values", "give either values or start/stop/(step|count)");
  try {
    if (r.has("grid.values")) {
      spec.grid = r.list("grid.values");
    } else if (ranged) {
      if (!r.has("grid.start") || !r.has("grid.stop")) r.fail("grid.start", "range needs both start and stop");
      if (r.has("grid.step") == r.has("grid.count")) r.fail("grid.step", "range needs exactly one of step or count");
      const double a = r.number("grid.start", 0.0);
      const double b = r.number("grid.stop", 0.0);
      spec.grid = r.has("grid.step") ? linspace_step(a, b, r.number("grid.step", 1.0))
                                     : linspace_count(a, b, r.integer("grid.count", 1));
    }
  } catch (const ConfigError& e) {
    if (e.line() != 0) throw;
    r.fail(e.field(), e.what());
  }

  const bool sim_keys = r.has("simulation.n_bs") || r.has("simulation.realizations") || r.has("simulation.seed") ||
                        r.has("simulation.idle_mode") || r.has("simulation.fading_on_interferers") ||
                        r.has("simulation.rayleigh_on_serving");
  if (r.boolean("simulation.enabled", sim_keys)) {
    sim::SimConfig c;
    c.n_bs_target = static_cast<int>(r.integer("simulation.n_bs", c.n_bs_target));
    c.n_realizations = static_cast<int>(r.integer("simulation.realizations", c.n_realizations));
    c.seed = r.u64("simulation.seed", c.seed);
    c.idle_mode = r.boolean("simulation.idle_mode", kind == ExperimentKind::CoveragePartialLoad ||
                                                        kind == ExperimentKind::PeakRateVsRatio ||
                                                        kind == ExperimentKind::ActualRateVsRatio);
    c.fading_on_interferers = r.boolean("simulation.fading_on_interferers", c.fading_on_interferers);
    c.rayleigh_on_serving = r.boolean("simulation.rayleigh_on_serving", c.rayleigh_on_serving);
    spec.sim = c;
  }
  spec.output_path = r.text("output.path", "");

  try {
    spec.validate();
  } catch (const ConfigError& e) {
    int line = r.line_of(e.field());
    if (line == 0 && e.field() == "network.beta") line = r.line_of("network.betas");
    if (line == 0 && e.field() == "grid.values") line = r.line_of("grid.start");
    throw ConfigError(source + ":" + std::to_string(line) + ": " + e.field() + ": " + e.what(), line, e.field());
  }
  return spec;
}

ExperimentSpec parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::vector<double> linear_grid(const ExperimentSpec& spec) {
  if (spec.grid_unit == GridUnit::Linear) return spec.grid;
  std::vector<double> out;
  out.reserve(spec.grid.size());
  for (double g : spec.grid) out.push_back(std::pow(10.0, g / 10.0));
  return out;
}

}  // namespace sgnet::config
