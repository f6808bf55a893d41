#include "ep/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "ep/errors.hpp"

namespace ep {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

struct ParsedIni {
  // key is "section.name"
  std::map<std::string, Entry> entries;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

ParsedIni parse_ini(const std::string& text) {
  ParsedIni ini;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(fmt::format("line {}: malformed section header '{}'", lineno, line));
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(fmt::format("line {}: empty section name", lineno));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(fmt::format("line {}: expected key = value, got '{}'", lineno, line));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", lineno));
    if (section.empty())
      throw ConfigError(fmt::format("line {}: key '{}' outside any section", lineno, key));
    const std::string full = section + "." + key;
    auto [it, inserted] = ini.entries.insert({full, Entry{value, lineno}});
    if (!inserted)
      throw ConfigError(fmt::format("duplicate key '{}' at lines {} and {}", full, it->second.line,
                                    lineno));
  }
  return ini;
}

class ConfigReader {
 public:
  explicit ConfigReader(ParsedIni ini) : ini_(std::move(ini)) {}

  std::optional<std::string> take(const std::string& key) {
    auto it = ini_.entries.find(key);
    if (it == ini_.entries.end()) return std::nullopt;
    std::string v = it->second.value;
    line_ = it->second.line;
    ini_.entries.erase(it);
    return v;
  }

  double take_double(const std::string& key, double def) {
    auto v = take(key);
    if (!v) return def;
    try {
      std::size_t pos = 0;
      const double x = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return x;
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("line {}: malformed number '{}' for key '{}'", line_, *v, key));
    }
  }

  long take_long(const std::string& key, long def) {
    auto v = take(key);
    if (!v) return def;
    try {
      std::size_t pos = 0;
      const long x = std::stol(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return x;
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("line {}: malformed integer '{}' for key '{}'", line_, *v, key));
    }
  }

  bool take_switch(const std::string& key, bool def) {
    auto v = take(key);
    if (!v) return def;
    if (*v == "on") return true;
    if (*v == "off") return false;
    throw ConfigError(fmt::format("line {}: key '{}' must be on|off (got '{}')", line_, key, *v));
  }

  void reject_leftovers() const {
    if (!ini_.entries.empty()) {
      const auto& [key, e] = *ini_.entries.begin();
      throw ConfigError(fmt::format("line {}: unknown key '{}'", e.line, key));
    }
  }

  int last_line() const { return line_; }

 private:
  ParsedIni ini_;
  int line_ = 0;
};

} // namespace

FullConfig parse_config(const std::string& text) {
  ConfigReader r(parse_ini(text));
  FullConfig cfg;

  cfg.solver.params.gamma = r.take_double("physics.gamma", 3.0);
  cfg.solver.params.n0 = r.take_double("physics.n0", 1.0);
  if (auto units = r.take("physics.units")) {
    if (*units != "paper" && *units != "si-like")
      throw ConfigError(fmt::format("line {}: units must be paper|si-like (got '{}')",
                                    r.last_line(), *units));
    cfg.units = *units;
  }
  // paper units: A = m_e = e = kappa = 1; si-like keeps kappa = 4 pi e.
  cfg.solver.params.entropy_const_A = 1.0;
  cfg.solver.params.mass_me = 1.0;
  cfg.solver.params.charge_e = 1.0;
  const double kappa_default =
      (cfg.units == "paper") ? 1.0 : 4.0 * std::numbers::pi * cfg.solver.params.charge_e;
  cfg.solver.params.kappa = r.take_double("physics.kappa", kappa_default);

  const long nc = r.take_long("grid.num_cells", 1024);
  if (nc < 64) throw ConfigError(fmt::format("num_cells must be >= 64 (got {})", nc));
  cfg.solver.grid.num_cells = static_cast<std::size_t>(nc);
  cfg.solver.grid.r_max = r.take_double("grid.r_max", 120.0);

  cfg.solver.t_end = r.take_double("run.t_end", 10.0);
  cfg.solver.cfl = r.take_double("run.cfl", 0.4);
  if (auto fm = r.take("run.field_mode")) {
    if (*fm == "dynamic") cfg.solver.field_mode = FieldMode::dynamic;
    else if (*fm == "gauss") cfg.solver.field_mode = FieldMode::gauss;
    else if (*fm == "off") cfg.solver.field_mode = FieldMode::off;
    else
      throw ConfigError(fmt::format("line {}: field_mode must be dynamic|gauss|off (got '{}')",
                                    r.last_line(), *fm));
  }
  cfg.solver.filter = r.take_switch("run.filter", true);
  const long stride = r.take_long("run.diagnostics_stride", 10);
  if (stride < 1) throw ConfigError(fmt::format("diagnostics_stride must be >= 1 (got {})", stride));
  cfg.solver.diagnostics_stride = static_cast<std::size_t>(stride);
  if (auto f = r.take("run.formulation")) {
    if (*f == "primal") cfg.solver.formulation = Formulation::primal;
    else if (*f == "normalized") cfg.solver.formulation = Formulation::normalized;
    else
      throw ConfigError(fmt::format("line {}: formulation must be primal|normalized (got '{}')",
                                    r.last_line(), *f));
  }

  if (auto p = r.take("initial.profile")) {
    if (*p == "gaussian") cfg.initial.profile = ProfileKind::gaussian;
    else if (*p == "bump") cfg.initial.profile = ProfileKind::bump;
    else if (*p == "file") cfg.initial.profile = ProfileKind::file;
    else
      throw ConfigError(fmt::format("line {}: profile must be gaussian|bump|file (got '{}')",
                                    r.last_line(), *p));
  }
  cfg.initial.amplitude = r.take_double("initial.amplitude", 0.01);
  cfg.initial.width = r.take_double("initial.width", 3.0);
  cfg.initial.center = r.take_double("initial.center", 5.0);
  cfg.initial.velocity_amplitude = r.take_double("initial.velocity_amplitude", 0.0);
  if (auto sp = r.take("initial.snapshot_path")) cfg.initial.snapshot_path = *sp;
  cfg.initial.neutralize = r.take_switch("initial.neutralize", true);

  r.reject_leftovers();

  cfg.solver.params.validate();
  cfg.solver.validate();
  if (cfg.initial.profile == ProfileKind::file && cfg.initial.snapshot_path.empty())
    throw ConfigError("profile = file requires snapshot_path");
  if (cfg.initial.profile != ProfileKind::file) {
    if (!(cfg.initial.width > 0.0))
      throw ConfigError(fmt::format("width must be > 0 (got {})", cfg.initial.width));
    if (cfg.initial.center < 0.0)
      throw ConfigError(fmt::format("center must be >= 0 (got {})", cfg.initial.center));
  }
  return cfg;
}

FullConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config file '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

double shape(ProfileKind kind, double s) {
  if (kind == ProfileKind::gaussian) return std::exp(-s * s);
  // compactly supported bump, normalized to 1 at s = 0
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

} // namespace

PrimalState build_initial(const FullConfig& cfg, double* annulus_ratio) {
  const RadialGrid& grid = cfg.solver.grid;
  const PhysicalParams& p = cfg.solver.params;
  if (annulus_ratio) *annulus_ratio = 0.0;
  if (cfg.initial.profile == ProfileKind::file)
    return load_snapshot_checked(cfg.initial.snapshot_path, cfg);

  const double w = cfg.initial.width;
  const double c = cfg.initial.center;
  const double eps = cfg.initial.amplitude;
  const double va = cfg.initial.velocity_amplitude;
  // Far-field requirement: perturbation support inside half the domain.
  const double support = cfg.initial.neutralize ? c + 10.0 * w : c + 6.0 * w;
  if (support > 0.5 * grid.r_max)
    throw DomainTooSmallError(fmt::format(
        "initial data support radius ~{} exceeds half the domain ({}); enlarge r_max",
        support, 0.5 * grid.r_max));

  PrimalState s;
  s.time = 0.0;
  const std::size_t N = grid.num_cells;
  s.n.resize(N);
  s.u.resize(N);
  std::vector<double> pert(N), ann(N);
  double sum_p = 0.0, sum_a = 0.0;
  const double ra = c + 4.0 * w;
  for (std::size_t j = 0; j < N; ++j) {
    const double r = grid.r(j);
    pert[j] = shape(cfg.initial.profile, (r - c) / w);
    ann[j] = shape(cfg.initial.profile, (r - ra) / w);
    sum_p += pert[j] * r;
    sum_a += ann[j] * r;
  }
  const double ratio = cfg.initial.neutralize && sum_a != 0.0 ? sum_p / sum_a : 0.0;
  if (annulus_ratio) *annulus_ratio = ratio;
  const double vel_norm = std::sqrt(2.0 * std::numbers::e);
  auto vel_shape = [&](double x) { return ((x - c) / w) * std::exp(-((x - c) / w) * ((x - c) / w)); };
  for (std::size_t j = 0; j < N; ++j) {
    const double r = grid.r(j);
    s.n[j] = p.n0 + eps * (pert[j] - ratio * ann[j]);
    // exactly odd about r = 0: antisymmetrized derivative-of-Gaussian pulse
    s.u[j] = -va * vel_norm * (vel_shape(r) - vel_shape(-r));
  }
  if (cfg.solver.field_mode != FieldMode::off) {
    s.E = gauss_field(s.n, grid, p);
  } else {
    s.E.assign(N, 0.0);
  }
  return s;
}

void write_timeseries(const std::filesystem::path& path, const std::vector<Diagnostics>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << "time,excess_mass,energy,sup_density_pert,sup_velocity,max_grad_u,max_grad_n,sup_E\n";
  for (const auto& d : rows) {
    out << fmt::format("{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n", d.time,
                       d.excess_mass, d.energy, d.sup_density_pert, d.sup_velocity, d.max_grad_u,
                       d.max_grad_n, d.sup_E);
  }
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

namespace {

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_doubles(std::ifstream& in, std::vector<double>& v, std::size_t n) {
  v.resize(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw IoError("snapshot payload truncated");
}

} // namespace

void write_snapshot(const std::filesystem::path& path, const PrimalState& s,
                    const RadialGrid& grid, const PhysicalParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << "EPSNAP 1\n";
  out << "fields n u E\n";
  out << fmt::format("time {:.17g}\n", s.time);
  out << fmt::format("grid {} {:.17g}\n", grid.num_cells, grid.r_max);
  out << fmt::format("params {:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g}\n", params.gamma,
                     params.entropy_const_A, params.charge_e, params.mass_me, params.n0,
                     params.kappa);
  out << "payload little-endian float64\n";
  write_doubles(out, s.n);
  write_doubles(out, s.u);
  write_doubles(out, s.E);
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

PrimalState load_snapshot(const std::filesystem::path& path, RadialGrid& grid_out,
                          PhysicalParams& params_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open snapshot '{}'", path.string()));
  std::string line;
  auto expect_line = [&](const char* what) {
    if (!std::getline(in, line)) throw IoError(fmt::format("snapshot '{}' missing {}", path.string(), what));
    return line;
  };
  if (expect_line("magic") != "EPSNAP 1")
    throw IoError(fmt::format("'{}' is not a version-1 snapshot (got '{}')", path.string(), line));
  if (expect_line("field list") != "fields n u E")
    throw IoError(fmt::format("unsupported snapshot field list '{}'", line));
  PrimalState s;
  {
    std::istringstream ss(expect_line("time"));
    std::string tag;
    ss >> tag >> s.time;
    if (tag != "time" || ss.fail()) throw IoError("malformed snapshot time line");
  }
  {
    std::istringstream ss(expect_line("grid"));
    std::string tag;
    ss >> tag >> grid_out.num_cells >> grid_out.r_max;
    if (tag != "grid" || ss.fail()) throw IoError("malformed snapshot grid line");
  }
  {
    std::istringstream ss(expect_line("params"));
    std::string tag;
    ss >> tag >> params_out.gamma >> params_out.entropy_const_A >> params_out.charge_e >>
        params_out.mass_me >> params_out.n0 >> params_out.kappa;
    if (tag != "params" || ss.fail()) throw IoError("malformed snapshot params line");
  }
  if (expect_line("payload tag") != "payload little-endian float64")
    throw IoError(fmt::format("unsupported snapshot payload tag '{}'", line));
  read_doubles(in, s.n, grid_out.num_cells);
  read_doubles(in, s.u, grid_out.num_cells);
  read_doubles(in, s.E, grid_out.num_cells);
  return s;
}

PrimalState load_snapshot_checked(const std::filesystem::path& path, const FullConfig& cfg) {
  RadialGrid g;
  PhysicalParams p;
  PrimalState s = load_snapshot(path, g, p);
  if (g.num_cells != cfg.solver.grid.num_cells || g.r_max != cfg.solver.grid.r_max)
    throw ConfigError(fmt::format(
        "snapshot grid ({} cells, r_max {}) does not match config grid ({} cells, r_max {})",
        g.num_cells, g.r_max, cfg.solver.grid.num_cells, cfg.solver.grid.r_max));
  if (p.gamma != cfg.solver.params.gamma || p.n0 != cfg.solver.params.n0 ||
      p.kappa != cfg.solver.params.kappa)
    throw ConfigError("snapshot physical parameters do not match config");
  return s;
}

void write_manifest(const std::filesystem::path& path, const FullConfig& cfg,
                    double annulus_ratio) {
  const DerivedConstants dc = derive_constants(cfg.solver.params);
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  const char* fm = cfg.solver.field_mode == FieldMode::dynamic  ? "dynamic"
                   : cfg.solver.field_mode == FieldMode::gauss ? "gauss"
                                                                : "off";
  const char* prof = cfg.initial.profile == ProfileKind::gaussian ? "gaussian"
                     : cfg.initial.profile == ProfileKind::bump   ? "bump"
                                                                  : "file";
  out << "epsim manifest 1\n";
  out << fmt::format("physics.gamma = {:.17g}\n", cfg.solver.params.gamma);
  out << fmt::format("physics.n0 = {:.17g}\n", cfg.solver.params.n0);
  out << fmt::format("physics.units = {}\n", cfg.units);
  out << fmt::format("physics.kappa = {:.17g}\n", cfg.solver.params.kappa);
  out << fmt::format("grid.num_cells = {}\n", cfg.solver.grid.num_cells);
  out << fmt::format("grid.r_max = {:.17g}\n", cfg.solver.grid.r_max);
  out << fmt::format("run.t_end = {:.17g}\n", cfg.solver.t_end);
  out << fmt::format("run.cfl = {:.17g}\n", cfg.solver.cfl);
  out << fmt::format("run.field_mode = {}\n", fm);
  out << fmt::format("run.filter = {}\n", cfg.solver.filter ? "on" : "off");
  out << fmt::format("run.diagnostics_stride = {}\n", cfg.solver.diagnostics_stride);
  out << fmt::format("run.formulation = {}\n",
                     cfg.solver.formulation == Formulation::primal ? "primal" : "normalized");
  out << fmt::format("initial.profile = {}\n", prof);
  out << fmt::format("initial.amplitude = {:.17g}\n", cfg.initial.amplitude);
  out << fmt::format("initial.width = {:.17g}\n", cfg.initial.width);
  out << fmt::format("initial.center = {:.17g}\n", cfg.initial.center);
  out << fmt::format("initial.velocity_amplitude = {:.17g}\n", cfg.initial.velocity_amplitude);
  out << fmt::format("initial.neutralize = {}\n", cfg.initial.neutralize ? "on" : "off");
  if (!cfg.initial.snapshot_path.empty())
    out << fmt::format("initial.snapshot_path = {}\n", cfg.initial.snapshot_path);
  out << fmt::format("derived.c0 = {:.17g}\n", dc.c0);
  out << fmt::format("derived.m0 = {:.17g}\n", dc.m0);
  out << fmt::format("derived.dr = {:.17g}\n", cfg.solver.grid.dr());
  out << fmt::format("neutralizing_annulus.center = {:.17g}\n",
                     cfg.initial.center + 4.0 * cfg.initial.width);
  out << fmt::format("neutralizing_annulus.scale = {:.17g}\n", annulus_ratio);
  out << "snapshot.format = EPSNAP 1 (text header + raw little-endian float64)\n";
  out << "diagnostics.format = csv, 17 significant digits\n";
}

void write_run_outputs(const std::filesystem::path& out_dir, const FullConfig& cfg,
                       const PrimalState& initial, const RunResult& result,
                       double annulus_ratio) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "snapshots");
  write_timeseries(out_dir / "diagnostics.csv", result.series);
  write_manifest(out_dir / "manifest", cfg, annulus_ratio);
  auto snap_name = [](double t) { return fmt::format("t_{:.6f}.snap", t); };
  write_snapshot(out_dir / "snapshots" / snap_name(initial.time), initial, cfg.solver.grid,
                 cfg.solver.params);
  write_snapshot(out_dir / "snapshots" / snap_name(result.final_primal.time), result.final_primal,
                 cfg.solver.grid, cfg.solver.params);
}

} // namespace ep
