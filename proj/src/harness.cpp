#include "umuscl/harness.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "umuscl/lsq.hpp"
#include "umuscl/reconstruction.hpp"

namespace umuscl {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Plain numbers or a ratio such as 1/3.
double to_double(std::string_view key, std::string_view v) {
  auto one = [&](std::string_view t) {
    double x = 0.0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), x);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
      throw ConfigError("bad number for '" + std::string(key) + "': '" + std::string(v) + "'");
    return x;
  };
  const auto slash = v.find('/');
  if (slash == std::string_view::npos) return one(v);
  const double den = one(v.substr(slash + 1));
  if (den == 0.0) throw ConfigError("zero denominator for '" + std::string(key) + "'");
  return one(v.substr(0, slash)) / den;
}

long long to_integer(std::string_view key, std::string_view v) {
  long long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError("bad integer for '" + std::string(key) + "': '" + std::string(v) + "'");
  return x;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for '" + std::string(key) + "': '" + std::string(v) + "'");
}

std::vector<int> to_grid_list(std::string_view key, std::string_view v) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const auto comma = v.find(',', pos);
    const auto item = trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    out.push_back(static_cast<int>(to_integer(key, item)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

const std::set<std::string, std::less<>> kKnownKeys = {
    "study", "problem", "flavor", "kappa", "theta", "kappa_s", "kappa3", "semantics", "source",
    "mass_matrix", "c1d", "a1d", "norm", "scheme", "flux", "lsq", "entropy_fix", "grid", "seed", "C",
    "law", "K", "u_inf", "v_inf", "field", "grids", "dt", "nsteps", "cfl", "t_final", "drop", "output",
    "format"};

bool is_1d_problem(std::string_view p) {
  try {
    parse_problem_1d(p);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v, const char* f = "%.4e") {
  char buf[40];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

// ---- enums ------------------------------------------------------------------

std::string_view to_string(StudyKind k) {
  switch (k) {
    case StudyKind::Solve: return "solve";
    case StudyKind::Truncation: return "truncation";
    case StudyKind::Jump: return "jump";
  }
  return "?";
}

StudyKind parse_study_kind(std::string_view s) {
  for (StudyKind k : {StudyKind::Solve, StudyKind::Truncation, StudyKind::Jump})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown study '" + std::string(s) + "'");
}

std::string_view to_string(JumpField f) { return f == JumpField::Sine ? "sine" : "quadratic"; }

JumpField parse_jump_field(std::string_view s) {
  if (s == "sine") return JumpField::Sine;
  if (s == "quadratic") return JumpField::Quadratic;
  throw ConfigError("unknown probe field '" + std::string(s) + "'");
}

double jump_field_value(JumpField f, Point p) {
  if (f == JumpField::Sine) return 1.0 + 0.2 * std::sin(2.3 * std::numbers::pi * p.x + 2.5 * std::numbers::pi * p.y);
  return 8.75 - 1.3 * p.x + 3.7 * p.y + 2.1 * p.x * p.x + 0.3 * p.x * p.y - 7.5 * p.y * p.y;
}

std::string_view to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::Csv: return "csv";
    case ReportFormat::GnuplotDat: return "gnuplot-dat";
    case ReportFormat::Markdown: return "markdown";
  }
  return "?";
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "gnuplot-dat" || s == "dat") return ReportFormat::GnuplotDat;
  if (s == "markdown" || s == "markdown-table" || s == "md") return ReportFormat::Markdown;
  throw ConfigError("unknown report format '" + std::string(s) + "'");
}

std::string_view extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::Csv: return ".csv";
    case ReportFormat::GnuplotDat: return ".dat";
    case ReportFormat::Markdown: return ".md";
  }
  return "";
}

std::string_view to_string(Norm n) {
  switch (n) {
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::Linf: return "linf";
  }
  return "?";
}

// ---- configuration ----------------------------------------------------------

ConfigMap parse_config_text(std::istream& is) {
  ConfigMap map;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value, got '" + body + "'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    map[key] = trim(std::string_view(body).substr(eq + 1));
  }
  return map;
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config_text(in);
}

void apply_override(ConfigMap& map, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override must be key=value: '" + std::string(assignment) + "'");
  const std::string key = trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError("override has an empty key");
  map[key] = trim(assignment.substr(eq + 1));
}

bool CaseConfig::is_1d() const { return study == StudyKind::Solve && is_1d_problem(problem); }

Case1D CaseConfig::case1d() const { return Case1D{parse_problem_1d(problem), C1d, a1d}; }

void CaseConfig::validate() const {
  if (grids.empty()) throw ConfigError("grid sequence is empty");
  for (std::size_t i = 0; i < grids.size(); ++i) {
    if (grids[i] < 2) throw ConfigError("grid size " + std::to_string(grids[i]) + " is too small");
    if (i > 0 && grids[i] <= grids[i - 1]) throw ConfigError("grid sequence must be strictly increasing");
  }
  if (study == StudyKind::Jump) {
    if (disc.lsq != LsqKind::Linear && disc.lsq != LsqKind::Quadratic) throw ConfigError("bad lsq kind");
    return;
  }
  if (is_1d()) {
    scheme1d.validate();
    const Case1D c = case1d();
    if (!c.steady() && dt <= 0.0 && (cfl <= 0.0 || t_final <= 0.0))
      throw ConfigError("unsteady run needs dt and nsteps, or cfl and t_final");
    if (!c.steady() && dt > 0.0 && nsteps <= 0) throw ConfigError("nsteps must be positive");
    if (c.steady() && !(drop > 0.0 && drop < 1.0)) throw ConfigError("drop must lie in (0, 1)");
    return;
  }
  const Case2DKind kind = parse_case_2d(problem);
  disc.validate();
  if (study == StudyKind::Truncation && kind == Case2DKind::Vortex)
    throw ConfigError("truncation probe needs a steady manufactured case");
  if (kind == Case2DKind::Vortex && (dt <= 0.0 || nsteps <= 0)) throw ConfigError("vortex run needs dt and nsteps");
  if (kind == Case2DKind::MmsEuler && !(C > 0.0)) throw ConfigError("MMS amplitude C must be positive");
  if (kind != Case2DKind::Vortex && !(drop > 0.0 && drop < 1.0)) throw ConfigError("drop must lie in (0, 1)");
}

CaseConfig make_config(const ConfigMap& map) {
  for (const auto& [k, v] : map)
    if (!kKnownKeys.contains(k)) throw ConfigError("unknown config key '" + k + "'");
  auto get = [&](std::string_view k) -> std::optional<std::string> {
    const auto it = map.find(k);
    if (it == map.end()) return std::nullopt;
    return it->second;
  };
  auto num = [&](std::string_view k, double& dst) {
    if (auto v = get(k)) dst = to_double(k, *v);
  };

  CaseConfig cfg;
  if (auto v = get("study")) cfg.study = parse_study_kind(*v);
  if (auto v = get("problem")) cfg.problem = *v;
  else if (cfg.study == StudyKind::Truncation) cfg.problem = "mms";
  else if (cfg.study == StudyKind::Jump) cfg.problem = "jump";
  const bool one_d = cfg.is_1d();

  if (one_d) {
    const Flavor1D flavor = parse_flavor(get("flavor").value_or("fd"));
    switch (flavor) {
      case Flavor1D::FVC: cfg.scheme1d = Scheme1D::fvc(); break;
      case Flavor1D::FVP: cfg.scheme1d = Scheme1D::fvp(); break;
      case Flavor1D::FD: cfg.scheme1d = Scheme1D::fd(1.0 / 3.0); break;
      case Flavor1D::FSR: cfg.scheme1d = Scheme1D::fsr(); break;
      case Flavor1D::SSQ: cfg.scheme1d = Scheme1D::ssq(); break;
      case Flavor1D::YH: cfg.scheme1d = Scheme1D::yh(); break;
    }
    Scheme1D& s = cfg.scheme1d;
    num("kappa", s.kappa);
    num("theta", s.theta);
    num("kappa_s", s.kappa_s);
    num("kappa3", s.kappa3);
    if (auto v = get("semantics")) s.semantics = parse_semantics(*v);
    if (auto v = get("source")) s.source = parse_source_mode(*v);
    if (auto v = get("mass_matrix")) s.mass_matrix = to_bool("mass_matrix", *v);
    num("c1d", cfg.C1d);
    num("a1d", cfg.a1d);
    cfg.norm = s.semantics;
    if (auto v = get("norm")) cfg.norm = parse_semantics(*v);

    const Problem1D p = parse_problem_1d(cfg.problem);
    switch (p) {
      case Problem1D::SteadyBurgers:
      case Problem1D::SteadyAdvection: cfg.grids = {16, 32, 64, 128}; break;
      case Problem1D::UnsteadyBurgers:
      case Problem1D::UnsteadyAdvection:
        cfg.grids = {127, 255, 511, 1023, 2047};
        cfg.dt = 1e-4;
        cfg.nsteps = 800;
        break;
      case Problem1D::GaussianPulse:
        cfg.grids = {81};
        cfg.cfl = 0.1;
        cfg.t_final = 2.0;
        break;
    }
    cfg.drop = 1e-12;
  } else {
    const bool jump = cfg.study == StudyKind::Jump;
    const Case2DKind kind = jump ? Case2DKind::MmsScalar : parse_case_2d(cfg.problem);
    if (auto v = get("scheme")) cfg.disc.scheme = parse_scheme_2d(*v);
    num("kappa", cfg.disc.recon.kappa);
    num("theta", cfg.disc.recon.theta);
    cfg.family = jump ? GridFamily::IrregularTriangle : GridFamily::RegularQuad;
    if (auto v = get("grid")) cfg.family = parse_grid_family(*v);
    cfg.disc.kappa_s = Discretization2D::default_kappa_s(cfg.family);
    num("kappa_s", cfg.disc.kappa_s);
    cfg.disc.flux = kind == Case2DKind::Vortex ? FluxKind::Roe : FluxKind::Rusanov;
    if (auto v = get("flux")) cfg.disc.flux = parse_flux_kind(*v);
    if (auto v = get("lsq")) cfg.disc.lsq = parse_lsq_kind(*v);
    if (auto v = get("entropy_fix")) cfg.disc.entropy_fix = to_bool("entropy_fix", *v);
    num("C", cfg.C);
    if (auto v = get("law")) cfg.law = parse_scalar_law(*v);
    num("K", cfg.vortex.K);
    num("u_inf", cfg.vortex.u_inf);
    num("v_inf", cfg.vortex.v_inf);
    if (auto v = get("field")) cfg.field = parse_jump_field(*v);
    if (jump) {
      cfg.grids = {48, 64, 80, 96, 112};
    } else if (kind == Case2DKind::Vortex) {
      cfg.grids = {60};
      cfg.dt = 5e-4;
      cfg.nsteps = 72000;
    } else if (cfg.study == StudyKind::Truncation) {
      cfg.grids = {16, 32, 64, 128};
    } else {
      cfg.grids = {32, 48, 64, 80, 96, 112, 128};
    }
    cfg.drop = 1e-6;
  }

  if (auto v = get("seed")) cfg.seed = static_cast<std::uint64_t>(to_integer("seed", *v));
  if (auto v = get("grids")) cfg.grids = to_grid_list("grids", *v);
  num("dt", cfg.dt);
  if (auto v = get("nsteps")) cfg.nsteps = static_cast<int>(to_integer("nsteps", *v));
  num("cfl", cfg.cfl);
  num("t_final", cfg.t_final);
  if (get("dt") && !get("nsteps") && cfg.t_final > 0.0) cfg.nsteps = static_cast<int>(std::lround(cfg.t_final / cfg.dt));
  num("drop", cfg.drop);
  if (auto v = get("output")) cfg.output = *v;
  if (auto v = get("format")) cfg.format = parse_report_format(*v);
  cfg.validate();
  return cfg;
}

// ---- reports ----------------------------------------------------------------

OrderFit fit_order(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size()) throw std::invalid_argument("fit_order: h and e differ in length");
  if (h.size() < 2) throw std::invalid_argument("fit_order: needs at least two grids");
  OrderFit fit;
  for (std::size_t i = 1; i < h.size(); ++i) {
    const bool ok = e[i - 1] > 0.0 && e[i] > 0.0 && h[i - 1] > 0.0 && h[i] > 0.0 && h[i] != h[i - 1] &&
                    std::isfinite(e[i - 1]) && std::isfinite(e[i]);
    if (ok) fit.pairs.emplace_back(std::log(e[i - 1] / e[i]) / std::log(h[i - 1] / h[i]));
    else fit.pairs.emplace_back(std::nullopt);
  }
  fit.summary = fit.pairs.back();
  return fit;
}

void ConvergenceReport::add_row(ReportRow row) {
  if (semantics && *semantics != row.semantics)
    throw ConfigError("report '" + title + "' mixes comparator semantics (" + std::string(to_string(*semantics)) +
                      " and " + std::string(to_string(row.semantics)) + ")");
  const std::size_t nv = variables.size();
  if (row.l1.size() != nv || row.l2.size() != nv || row.linf.size() != nv)
    throw std::invalid_argument("report row has the wrong number of variables");
  semantics = row.semantics;
  rows.push_back(std::move(row));
}

int ConvergenceReport::variable_index(std::string_view name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("report has no variable '" + std::string(name) + "'");
}

std::vector<double> ConvergenceReport::h() const {
  std::vector<double> out;
  for (const ReportRow& r : rows) out.push_back(r.h);
  return out;
}

std::vector<double> ConvergenceReport::errors(std::string_view var, Norm norm) const {
  const int v = variable_index(var);
  std::vector<double> out;
  for (const ReportRow& r : rows) out.push_back(norm == Norm::L1 ? r.l1[v] : norm == Norm::L2 ? r.l2[v] : r.linf[v]);
  return out;
}

OrderFit ConvergenceReport::order(std::string_view var, Norm norm) const { return fit_order(h(), errors(var, norm)); }

namespace {

void write_csv(std::ostream& os, const ConvergenceReport& r) {
  os << "# title: " << r.title << "\n";
  os << "# summary: " << r.summary_variable << " " << to_string(r.summary_norm) << "\n";
  os << "n,nodes,h,semantics";
  for (const std::string& v : r.variables) os << ",l1_" << v << ",l2_" << v << ",linf_" << v;
  os << ",alt_l1\n";
  for (const ReportRow& row : r.rows) {
    os << row.n << ',' << row.nodes << ',' << fmt(row.h) << ',' << to_string(row.semantics);
    for (std::size_t v = 0; v < r.variables.size(); ++v)
      os << ',' << fmt(row.l1[v]) << ',' << fmt(row.l2[v]) << ',' << fmt(row.linf[v]);
    os << ',' << (row.alt_l1 ? fmt(*row.alt_l1) : std::string()) << "\n";
  }
}

void write_dat(std::ostream& os, const ConvergenceReport& r) {
  os << "# " << r.title << "\n# h " << to_string(r.summary_norm) << "(" << r.summary_variable << ")\n";
  const std::vector<double> e = r.errors(r.summary_variable, r.summary_norm);
  for (std::size_t i = 0; i < r.rows.size(); ++i) os << fmt(r.rows[i].h) << ' ' << fmt(e[i]) << "\n";
}

void write_markdown(std::ostream& os, const ConvergenceReport& r) {
  const std::string col = std::string(to_string(r.summary_norm)) + "(" + r.summary_variable + ")";
  os << "**" << r.title << "** (comparator: " << (r.semantics ? to_string(*r.semantics) : "none") << ")\n\n";
  os << "| n | nodes | h | " << col << " | order |\n|---|---|---|---|---|\n";
  const std::vector<double> e = r.errors(r.summary_variable, r.summary_norm);
  const OrderFit fit = r.rows.size() >= 2 ? fit_order(r.h(), e) : OrderFit{};
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    os << "| " << r.rows[i].n << " | " << r.rows[i].nodes << " | " << fmt_short(r.rows[i].h, "%.6g") << " | "
       << fmt_short(e[i]) << " | ";
    if (i == 0) os << "-";
    else if (fit.pairs[i - 1]) os << fmt_short(*fit.pairs[i - 1], "%.3f");
    else os << "undefined";
    os << " |\n";
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_csv_double(const std::string& s) {
  if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  return to_double("csv", s);
}

}  // namespace

void write_report(std::ostream& os, const ConvergenceReport& r, ReportFormat f) {
  switch (f) {
    case ReportFormat::Csv: write_csv(os, r); break;
    case ReportFormat::GnuplotDat: write_dat(os, r); break;
    case ReportFormat::Markdown: write_markdown(os, r); break;
  }
}

void emit_report(const ConvergenceReport& r, ReportFormat f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to '" + path + "'");
  write_report(out, r, f);
  out.flush();
  if (!out) throw std::runtime_error("error while writing '" + path + "'");
}

ConvergenceReport read_report_csv(std::istream& is) {
  ConvergenceReport r;
  std::string line;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    if (line.rfind("# title: ", 0) == 0) {
      r.title = line.substr(9);
    } else if (line.rfind("# summary: ", 0) == 0) {
      std::istringstream ss(line.substr(11));
      std::string norm;
      ss >> r.summary_variable >> norm;
      r.summary_norm = norm == "l2" ? Norm::L2 : norm == "linf" ? Norm::Linf : Norm::L1;
    } else if (header.empty()) {
      header = split_csv(line);
      if (header.size() < 5 || header[0] != "n") throw std::runtime_error("report csv: bad header");
      for (std::size_t c = 4; c + 1 < header.size(); c += 3) r.variables.push_back(header[c].substr(3));
    } else if (!line.empty()) {
      const std::vector<std::string> f = split_csv(line);
      if (f.size() != header.size()) throw std::runtime_error("report csv: bad row '" + line + "'");
      ReportRow row;
      row.n = static_cast<int>(to_integer("n", f[0]));
      row.nodes = static_cast<int>(to_integer("nodes", f[1]));
      row.h = parse_csv_double(f[2]);
      row.semantics = parse_semantics(f[3]);
      for (std::size_t v = 0; v < r.variables.size(); ++v) {
        row.l1.push_back(parse_csv_double(f[4 + 3 * v]));
        row.l2.push_back(parse_csv_double(f[5 + 3 * v]));
        row.linf.push_back(parse_csv_double(f[6 + 3 * v]));
      }
      if (!f.back().empty()) row.alt_l1 = parse_csv_double(f.back());
      r.add_row(std::move(row));
    }
  }
  return r;
}

// ---- studies ----------------------------------------------------------------

std::pair<double, int> time_steps_1d(const CaseConfig& cfg, double h) {
  if (cfg.dt > 0.0) return {cfg.dt, cfg.nsteps};
  // |u| <= 1 for the sine data, a = 1 for advection
  const int n = std::max(1, static_cast<int>(std::ceil(cfg.t_final / (cfg.cfl * h) - 1e-9)));
  return {cfg.t_final / n, n};
}

Run1DResult run_1d(const CaseConfig& cfg, int n) {
  const Case1D c = cfg.case1d();
  if (c.steady()) {
    SteadyOptions opt;
    opt.drop = cfg.drop;
    return steady_driver_1d(cfg.scheme1d, c, n, opt);
  }
  const double h = Grid1D::periodic_cells(n).h;
  const auto [dt, nsteps] = time_steps_1d(cfg, h);
  return unsteady_driver_1d(cfg.scheme1d, c, n, dt, nsteps);
}

Run2DSpec make_run2d_spec(const CaseConfig& cfg, int n) {
  Run2DSpec s;
  s.kind = parse_case_2d(cfg.problem);
  s.family = cfg.family;
  s.n = n;
  s.seed = cfg.seed;
  s.disc = cfg.disc;
  s.C = cfg.C;
  s.law = cfg.law;
  s.vortex = cfg.vortex;
  s.steady.drop = cfg.drop;
  s.unsteady.dt = cfg.dt;
  s.unsteady.nsteps = cfg.nsteps;
  return s;
}

namespace {

std::string study_title(const CaseConfig& cfg) {
  std::ostringstream t;
  if (cfg.study == StudyKind::Jump) {
    t << "jump probe " << to_string(cfg.field) << " lsq=" << to_string(cfg.disc.lsq)
      << " kappa=" << fmt_short(cfg.disc.recon.kappa, "%.6g") << " grid=" << to_string(cfg.family);
  } else if (cfg.is_1d()) {
    const Scheme1D& s = cfg.scheme1d;
    t << cfg.problem << " " << to_string(s.flavor) << " kappa=" << fmt_short(s.kappa, "%.6g");
    if (s.flavor == Flavor1D::FSR) t << " theta=" << fmt_short(s.theta, "%.6g");
    if (s.flavor == Flavor1D::SSQ) t << " kappa_s=" << fmt_short(s.kappa_s, "%.6g");
    if (s.flavor == Flavor1D::YH) t << " kappa3=" << fmt_short(s.kappa3, "%.6g");
    if (s.mass_matrix) t << " mass";
  } else {
    const Discretization2D& d = cfg.disc;
    t << (cfg.study == StudyKind::Truncation ? "truncation " : "") << cfg.problem << " " << to_string(d.scheme)
      << " kappa=" << fmt_short(d.recon.kappa, "%.6g");
    if (d.scheme == Scheme2D::Cfsr3) t << " theta=" << fmt_short(d.recon.theta, "%.6g");
    if (d.scheme == Scheme2D::UMusclSsq) t << " kappa_s=" << fmt_short(d.kappa_s, "%.6g");
    t << " flux=" << to_string(d.flux) << " grid=" << to_string(cfg.family);
    if (parse_case_2d(cfg.problem) == Case2DKind::MmsEuler) t << " C=" << fmt_short(cfg.C, "%.6g");
  }
  return t.str();
}

ReportRow row_1d(const CaseConfig& cfg, int n) {
  const Case1D c = cfg.case1d();
  const Run1DResult r = run_1d(cfg, n);
  const Semantics other = cfg.norm == Semantics::PointValue ? Semantics::CellAverage : Semantics::PointValue;
  std::vector<double> ex(n), alt(n);
  for (int i = 0; i < n; ++i) {
    ex[i] = c.exact(cfg.norm, r.grid.x(i), r.grid.h, r.time);
    alt[i] = c.exact(other, r.grid.x(i), r.grid.h, r.time);
  }
  const ErrorNorms e = error_norms_1d(r.u, ex);
  ReportRow row;
  row.n = n;
  row.nodes = n;
  row.h = r.grid.h;
  row.semantics = cfg.norm;
  row.l1 = {e.l1};
  row.l2 = {e.l2};
  row.linf = {e.linf};
  row.alt_l1 = error_norms_1d(r.u, alt).l1;
  return row;
}

ReportRow row_2d(const CaseConfig& cfg, int n) {
  const Run2DResult r = run_case_2d(make_run2d_spec(cfg, n));
  ReportRow row;
  row.n = n;
  row.nodes = r.nodes;
  row.h = r.h;
  row.l1 = r.errors.l1;
  row.l2 = r.l2;
  row.linf = r.errors.linf;
  return row;
}

ReportRow row_truncation(const CaseConfig& cfg, int n) {
  const Run2DSpec spec = make_run2d_spec(cfg, n);
  const TruncationProbe te = run_truncation_probe_2d(spec);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ReportRow row;
  row.n = n;
  const Mesh mesh = make_case_mesh(spec);
  row.nodes = mesh.num_nodes();
  row.h = mesh.spacing();
  row.l1 = te.l1;
  row.l1.push_back(te.total);
  row.l2.assign(row.l1.size(), nan);
  row.linf.assign(row.l1.size(), nan);
  return row;
}

ReportRow row_jump(const CaseConfig& cfg, int n) {
  const Mesh mesh = generate_grid(cfg.family, n, n, Rectangle{}, cfg.seed);
  const GradientOperator grad(mesh, cfg.disc.lsq);
  const JumpField f = cfg.field;
  const JumpErrorResult r =
      jump_and_error_probe(mesh, grad, cfg.disc.recon.kappa, [f](Point p) { return jump_field_value(f, p); });
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ReportRow row;
  row.n = n;
  row.nodes = mesh.num_nodes();
  row.h = mesh.spacing();
  row.l1 = {nan, nan};
  row.l2 = {nan, nan};
  row.linf = {r.max_jump, r.max_error};
  return row;
}

}  // namespace

ConvergenceReport run_convergence_study(const CaseConfig& cfg) {
  cfg.validate();
  ConvergenceReport rep;
  rep.title = study_title(cfg);
  if (cfg.study == StudyKind::Jump) {
    rep.variables = {"jump", "error"};
    rep.summary_variable = "jump";
    rep.summary_norm = Norm::Linf;
  } else if (cfg.is_1d()) {
    rep.variables = {"u"};
    rep.summary_variable = "u";
  } else {
    const Case2DKind kind = parse_case_2d(cfg.problem);
    const bool euler = kind != Case2DKind::MmsScalar;
    if (cfg.study == StudyKind::Truncation) {
      rep.variables = euler ? std::vector<std::string>{"mass", "xmom", "ymom", "energy", "total"}
                            : std::vector<std::string>{"u", "total"};
      rep.summary_variable = "total";
    } else {
      rep.variables = euler ? std::vector<std::string>{"rho", "u", "v", "p"} : std::vector<std::string>{"u"};
      rep.summary_variable = kind == Case2DKind::Vortex ? "rho" : euler ? "p" : "u";
      if (kind == Case2DKind::Vortex) rep.summary_norm = Norm::L2;
    }
  }
  for (int n : cfg.grids) {
    ReportRow row;
    try {
      if (cfg.study == StudyKind::Jump) row = row_jump(cfg, n);
      else if (cfg.study == StudyKind::Truncation) row = row_truncation(cfg, n);
      else if (cfg.is_1d()) row = row_1d(cfg, n);
      else row = row_2d(cfg, n);
    } catch (const std::exception& e) {
      throw std::runtime_error("study '" + rep.title + "' failed on grid n=" + std::to_string(n) + ": " + e.what());
    }
    rep.add_row(std::move(row));
  }
  if (!cfg.output.empty()) emit_report(rep, cfg.format, cfg.output + std::string(extension(cfg.format)));
  return rep;
}

}  // namespace umuscl
