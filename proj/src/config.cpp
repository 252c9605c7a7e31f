#include "hs/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hs {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

struct Parser {
  int line = 0;
  std::string section;

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(line, section.empty() ? key : section + "." + key, msg);
  }

  double num(const std::string& key, const std::string& v) const {
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) fail(key, "trailing characters after number '" + v + "'");
      return d;
    } catch (const ConfigError&) {
      throw;
    } catch (...) {
      fail(key, "expected a number, got '" + v + "'");
    }
  }

  long long integer(const std::string& key, const std::string& v) const {
    const double d = num(key, v);
    if (d != std::floor(d)) fail(key, "expected an integer, got '" + v + "'");
    return static_cast<long long>(d);
  }

  std::vector<double> numbers(const std::string& key, const std::string& v) const {
    std::vector<double> out;
    for (const std::string& w : split_words(v)) out.push_back(num(key, w));
    if (out.empty()) fail(key, "expected at least one number");
    return out;
  }
};

}  // namespace

ConfigError::ConfigError(int line_, std::string field_, const std::string& what)
    : std::runtime_error("config error at line " + std::to_string(line_) + " (" + field_ +
                         "): " + what),
      line(line_),
      field(std::move(field_)) {}

const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::evolve: return "evolve";
    case ExperimentKind::scatter: return "scatter";
    case ExperimentKind::roundtrip: return "roundtrip";
    case ExperimentKind::morawetz: return "morawetz";
    case ExperimentKind::sweep: return "sweep";
    case ExperimentKind::check_potential: return "check-potential";
  }
  return "?";
}

std::optional<ExperimentKind> kind_from_name(const std::string& name) {
  if (name == "evolve") return ExperimentKind::evolve;
  if (name == "scatter") return ExperimentKind::scatter;
  if (name == "roundtrip") return ExperimentKind::roundtrip;
  if (name == "morawetz") return ExperimentKind::morawetz;
  if (name == "sweep") return ExperimentKind::sweep;
  if (name == "check-potential") return ExperimentKind::check_potential;
  return std::nullopt;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  Parser p;

  bool saw_version = false, saw_grid = false, saw_potential = false, saw_initial = false;
  bool saw_evolve = false, saw_experiment = false, saw_sweep = false;
  bool saw_kind = false;
  int grid_n = 0, grid_points = 0;
  double grid_L = 0.0;
  std::string pot_kind, init_kind;
  double pot_C = 1.0, pot_gamma = 0.0;
  bool pot_C_given = false;

  std::istringstream is(text);
  std::string raw;
  while (std::getline(is, raw)) {
    ++p.line;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') p.fail("section", "unterminated section header");
      p.section = trim(line.substr(1, line.size() - 2));
      if (p.section == "grid") saw_grid = true;
      else if (p.section == "potential") saw_potential = true;
      else if (p.section == "initial_data") saw_initial = true;
      else if (p.section == "evolve") saw_evolve = true;
      else if (p.section == "experiment") saw_experiment = true;
      else if (p.section == "sweep") saw_sweep = true;
      else if (p.section == "checks") {}
      else p.fail(p.section, "unknown section");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) p.fail("line", "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) p.fail("line", "missing key before '='");
    if (val.empty()) p.fail(key, "missing value");

    if (p.section.empty()) {
      if (key == "schema_version") {
        const long long v = p.integer(key, val);
        if (v != 1) p.fail(key, "unsupported schema version " + std::to_string(v));
        cfg.schema_version = static_cast<int>(v);
        saw_version = true;
      } else {
        p.fail(key, "unknown top-level key");
      }
    } else if (p.section == "grid") {
      if (key == "n") grid_n = static_cast<int>(p.integer(key, val));
      else if (key == "points") grid_points = static_cast<int>(p.integer(key, val));
      else if (key == "half_length") grid_L = p.num(key, val);
      else p.fail(key, "unknown key in [grid]");
    } else if (p.section == "potential") {
      if (key == "kind") pot_kind = val;
      else if (key == "C") { pot_C = p.num(key, val); pot_C_given = true; }
      else if (key == "gamma") pot_gamma = p.num(key, val);
      else if (key == "table_file") cfg.potential.table_file = val;
      else if (key == "truncate_inner") cfg.potential.spec.truncate_inner = p.num(key, val);
      else if (key == "truncate_outer") cfg.potential.spec.truncate_outer = p.num(key, val);
      else if (key == "p1") cfg.potential.p1 = p.num(key, val);
      else if (key == "p2") cfg.potential.p2 = p.num(key, val);
      else if (key == "alpha") cfg.potential.alpha = p.num(key, val);
      else if (key == "a") cfg.potential.a = p.num(key, val);
      else if (key == "mollify_j") cfg.potential.mollify_j = static_cast<int>(p.integer(key, val));
      else p.fail(key, "unknown key in [potential]");
    } else if (p.section == "initial_data") {
      if (key == "kind") init_kind = val;
      else if (key == "amplitude") cfg.initial.amplitude = p.num(key, val);
      else if (key == "width") cfg.initial.width = p.num(key, val);
      else if (key == "center" || key == "velocity") {
        const auto v = p.numbers(key, val);
        if (v.size() > 3) p.fail(key, "at most three components");
        for (std::size_t i = 0; i < v.size(); ++i)
          (key == "center" ? cfg.initial.center : cfg.initial.velocity)[i] = v[i];
      } else if (key == "seed") {
        cfg.initial.seed = static_cast<std::uint64_t>(p.integer(key, val));
        cfg.seed_given = true;
      } else if (key == "band") cfg.initial.band = p.num(key, val);
      else if (key == "path") cfg.initial.path = val;
      else if (key == "normalize_l2") cfg.initial.normalize_l2 = p.num(key, val);
      else p.fail(key, "unknown key in [initial_data]");
    } else if (p.section == "evolve") {
      if (key == "dt") cfg.evolve.dt = p.num(key, val);
      else if (key == "t_start") cfg.evolve.t_start = p.num(key, val);
      else if (key == "t_end") cfg.evolve.t_end = p.num(key, val);
      else if (key == "stride") cfg.evolve.sample_stride = static_cast<int>(p.integer(key, val));
      else p.fail(key, "unknown key in [evolve]");
    } else if (p.section == "experiment") {
      if (key == "kind") {
        const auto k = kind_from_name(val);
        if (!k) p.fail(key, "unknown experiment kind '" + val + "'");
        cfg.kind = *k;
        saw_kind = true;
      } else if (key == "output_dir") cfg.output_dir = val;
      else if (key == "write_fields") {
        if (val != "none" && val != "endpoints" && val != "all")
          p.fail(key, "expected none | endpoints | all");
        cfg.write_fields = val;
      } else if (key == "checkpoints") cfg.checkpoints = p.numbers(key, val);
      else if (key == "T") cfg.roundtrip_T = p.num(key, val);
      else if (key == "t1") cfg.morawetz_t1 = p.num(key, val);
      else if (key == "t2") cfg.morawetz_t2 = p.num(key, val);
      else if (key == "sigma") cfg.morawetz_sigma = p.num(key, val);
      else if (key == "window_epsilon") cfg.window_epsilon = p.num(key, val);
      else if (key == "window_length") cfg.window_length = p.num(key, val);
      else if (key == "decay_r") cfg.decay_r = p.num(key, val);
      else p.fail(key, "unknown key in [experiment]");
    } else if (p.section == "sweep") {
      if (key == "base_kind") {
        const auto k = kind_from_name(val);
        if (!k || *k == ExperimentKind::sweep) p.fail(key, "invalid sweep base kind '" + val + "'");
        cfg.sweep_base = *k;
      } else if (key == "gamma") cfg.sweep_gamma = p.numbers(key, val);
      else if (key == "C") cfg.sweep_C = p.numbers(key, val);
      else if (key == "amplitude") cfg.sweep_amplitude = p.numbers(key, val);
      else p.fail(key, "unknown key in [sweep]");
    } else if (p.section == "checks") {
      auto& c = cfg.checks;
      if (key == "mass_drift") c.mass_drift = p.num(key, val);
      else if (key == "energy_identity") c.energy_identity = p.num(key, val);
      else if (key == "boundary_mass") c.boundary_mass = p.num(key, val);
      else if (key == "mass_residual") c.mass_residual = p.num(key, val);
      else if (key == "scatter_converged") c.scatter_converged = p.num(key, val);
      else if (key == "energy_residual") c.energy_residual = p.num(key, val);
      else if (key == "roundtrip_h1") c.roundtrip_h1 = p.num(key, val);
      else if (key == "morawetz_integrand") c.morawetz_integrand = p.num(key, val);
      else if (key == "morawetz_chain") c.morawetz_chain = p.num(key, val);
      else if (key == "dilation_step") c.dilation_step = p.num(key, val);
      else p.fail(key, "unknown key in [checks]");
    }
  }

  p.line = 0;
  p.section.clear();
  if (!saw_version) p.fail("schema_version", "missing mandatory schema_version = 1");
  if (!saw_experiment || !saw_kind) p.fail("experiment.kind", "missing [experiment] kind");

  const bool needs_grid = true;
  if (needs_grid) {
    if (!saw_grid) p.fail("grid", "missing [grid] section");
    cfg.grid = make_grid(grid_n, grid_points, grid_L);
  }

  if (!saw_potential) p.fail("potential", "missing [potential] section");
  if (pot_kind == "zero" || pot_kind.empty()) {
    cfg.potential.spec.kind = PotentialKind::zero;
  } else if (pot_kind == "inverse_power") {
    if (!(pot_gamma > 0.0)) p.fail("potential.gamma", "inverse_power requires gamma > 0");
    if (!pot_C_given) pot_C = 1.0;
    const double ti = cfg.potential.spec.truncate_inner;
    const double to = cfg.potential.spec.truncate_outer;
    cfg.potential.spec = PotentialSpec::inverse_power(pot_C, pot_gamma);
    cfg.potential.spec.truncate_inner = ti;
    cfg.potential.spec.truncate_outer = to;
  } else if (pot_kind == "tabulated_radial") {
    if (cfg.potential.table_file.empty())
      p.fail("potential.table_file", "tabulated_radial requires table_file");
    std::ifstream tf(cfg.potential.table_file);
    if (!tf) p.fail("potential.table_file", "cannot open '" + cfg.potential.table_file + "'");
    std::vector<std::pair<double, double>> table;
    double r, v;
    while (tf >> r >> v) table.emplace_back(r, v);
    const double ti = cfg.potential.spec.truncate_inner;
    const double to = cfg.potential.spec.truncate_outer;
    try {
      cfg.potential.spec = PotentialSpec::tabulated(std::move(table));
    } catch (const std::exception& e) {
      p.fail("potential.table_file", e.what());
    }
    cfg.potential.spec.truncate_inner = ti;
    cfg.potential.spec.truncate_outer = to;
  } else {
    p.fail("potential.kind", "unknown potential kind '" + pot_kind + "'");
  }

  const bool needs_data = cfg.kind != ExperimentKind::check_potential;
  if (needs_data) {
    if (!saw_initial) p.fail("initial_data", "missing [initial_data] section");
    if (init_kind == "gaussian" || init_kind.empty()) {
      cfg.initial.kind = InitialDataKind::gaussian;
    } else if (init_kind == "random_band_limited") {
      cfg.initial.kind = InitialDataKind::random_band_limited;
      if (!cfg.seed_given)
        p.fail("initial_data.seed", "random data requires an explicit seed");
      if (!(cfg.initial.band > 0.0))
        p.fail("initial_data.band", "random data requires band > 0");
    } else if (init_kind == "from_file") {
      cfg.initial.kind = InitialDataKind::from_file;
      if (cfg.initial.path.empty()) p.fail("initial_data.path", "from_file requires path");
    } else {
      p.fail("initial_data.kind", "unknown initial data kind '" + init_kind + "'");
    }
  }

  const bool needs_evolve = cfg.kind != ExperimentKind::check_potential;
  if (needs_evolve) {
    if (!saw_evolve) p.fail("evolve", "missing [evolve] section");
    if (!(cfg.evolve.dt > 0.0)) p.fail("evolve.dt", "dt must be positive");
    if (cfg.evolve.sample_stride < 1) p.fail("evolve.stride", "stride must be >= 1");
  }

  if (cfg.kind == ExperimentKind::scatter && cfg.checkpoints.size() < 3)
    p.fail("experiment.checkpoints", "scatter needs at least 3 increasing checkpoints");
  if (cfg.kind == ExperimentKind::morawetz && !(cfg.morawetz_t1 < cfg.morawetz_t2))
    p.fail("experiment.t1", "morawetz needs t1 < t2");
  if (cfg.kind == ExperimentKind::sweep) {
    if (!saw_sweep) p.fail("sweep", "missing [sweep] section");
    if (cfg.sweep_gamma.empty() && cfg.sweep_C.empty() && cfg.sweep_amplitude.empty())
      p.fail("sweep", "sweep needs at least one axis (gamma, C or amplitude)");
  }

  // Split-diagnostic parameters flow into the evolution.
  cfg.evolve.diag.split_alpha = cfg.potential.alpha;
  cfg.evolve.diag.split_a = cfg.potential.a;
  cfg.evolve.diag.boundary_tol = cfg.checks.boundary_mass;
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace hs
