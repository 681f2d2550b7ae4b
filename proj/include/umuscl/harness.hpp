#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "umuscl/schemes1d.hpp"
#include "umuscl/solver2d.hpp"

namespace umuscl {

// ---- configuration ----------------------------------------------------------

enum class StudyKind { Solve, Truncation, Jump };
std::string_view to_string(StudyKind k);
StudyKind parse_study_kind(std::string_view s);

enum class JumpField { Sine, Quadratic };
std::string_view to_string(JumpField f);
JumpField parse_jump_field(std::string_view s);
double jump_field_value(JumpField f, Point p);

enum class ReportFormat { Csv, GnuplotDat, Markdown };
std::string_view to_string(ReportFormat f);
ReportFormat parse_report_format(std::string_view s);

// Raw key=value pairs. Kept as strings so that file entries and command-line
// overrides combine independently of their order.
using ConfigMap = std::map<std::string, std::string, std::less<>>;

// Lines of key=value; '#' starts a comment. Throws ConfigError on a malformed line.
ConfigMap parse_config_text(std::istream& is);
ConfigMap load_config_file(const std::string& path);
// "key=value"
void apply_override(ConfigMap& map, std::string_view assignment);

struct CaseConfig {
  StudyKind study = StudyKind::Solve;
  std::string problem = "steady-burgers";  // 1D problem name, or mms / mms-scalar / vortex
  // 1D
  Scheme1D scheme1d = Scheme1D::fd(1.0 / 3.0);
  double C1d = 1.57, a1d = 1.23;
  Semantics norm = Semantics::PointValue;  // comparator for 1D norms
  // 2D
  Discretization2D disc;
  GridFamily family = GridFamily::RegularQuad;
  std::uint64_t seed = 1;
  double C = 0.3;
  ScalarLaw law = ScalarLaw::Advection;
  Vortex vortex;
  JumpField field = JumpField::Sine;
  // 1D node/cell counts or 2D nodes per direction, strictly increasing
  std::vector<int> grids;
  // dt <= 0: dt = cfl h / speed and nsteps = t_final / dt
  double dt = 0.0;
  int nsteps = 0;
  double cfl = 0.1;
  double t_final = 0.0;
  double drop = 1e-12;
  std::string output;  // file prefix; empty writes nothing
  ReportFormat format = ReportFormat::Csv;

  bool is_1d() const;
  Case1D case1d() const;
  void validate() const;
};

// Builds a validated configuration. Problem-dependent defaults (grids, time
// steps, flux) are filled in for keys that are absent. Unknown keys and bad
// values throw ConfigError.
CaseConfig make_config(const ConfigMap& map);

// ---- reports ----------------------------------------------------------------

enum class Norm { L1, L2, Linf };
std::string_view to_string(Norm n);

struct ReportRow {
  int n = 0;
  int nodes = 0;
  double h = 0.0;
  Semantics semantics = Semantics::PointValue;
  std::vector<double> l1, l2, linf;  // per variable
  std::optional<double> alt_l1;      // 1D: L1 of the first variable against the other comparator
};

struct OrderFit {
  std::vector<std::optional<double>> pairs;  // empty where an error is not positive
  std::optional<double> summary;             // finest pair
};

// Throws std::invalid_argument if fewer than two grids or mismatched lengths.
OrderFit fit_order(const std::vector<double>& h, const std::vector<double>& e);

struct ConvergenceReport {
  std::string title;
  std::vector<std::string> variables;
  std::string summary_variable;
  Norm summary_norm = Norm::L1;
  std::optional<Semantics> semantics;  // fixed by the first row
  std::vector<ReportRow> rows;

  // Throws ConfigError if the row's comparator semantics differs from earlier rows.
  void add_row(ReportRow row);
  int variable_index(std::string_view name) const;
  std::vector<double> h() const;
  std::vector<double> errors(std::string_view var, Norm norm) const;
  OrderFit order(std::string_view var, Norm norm) const;
  std::optional<double> summary_order() const { return order(summary_variable, summary_norm).summary; }
};

std::string_view extension(ReportFormat f);
void write_report(std::ostream& os, const ConvergenceReport& r, ReportFormat f);
// Throws std::runtime_error if `path` cannot be written.
void emit_report(const ConvergenceReport& r, ReportFormat f, const std::string& path);
ConvergenceReport read_report_csv(std::istream& is);

// ---- studies ----------------------------------------------------------------

// Runs every grid of the configuration in increasing order. Driver failures are
// rethrown as std::runtime_error naming the failing grid.
ConvergenceReport run_convergence_study(const CaseConfig& cfg);

std::pair<double, int> time_steps_1d(const CaseConfig& cfg, double h);
Run1DResult run_1d(const CaseConfig& cfg, int n);
Run2DSpec make_run2d_spec(const CaseConfig& cfg, int n);

}  // namespace umuscl
