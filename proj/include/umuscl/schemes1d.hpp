#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "umuscl/flux.hpp"

namespace umuscl {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Flavor1D { FVC, FVP, FD, FSR, SSQ, YH };
enum class Semantics { CellAverage, PointValue };
enum class SourceMode { None, Point, CellAverage, Quadrature };

std::string_view to_string(Flavor1D f);
std::string_view to_string(Semantics s);
std::string_view to_string(SourceMode s);
Flavor1D parse_flavor(std::string_view s);
Semantics parse_semantics(std::string_view s);
SourceMode parse_source_mode(std::string_view s);

struct Scheme1D {
  Flavor1D flavor = Flavor1D::FD;
  double kappa = 1.0 / 3.0;
  double theta = 1.0 / 3.0;    // FSR flux blend
  double kappa_s = 1.0 / 6.0;  // SSQ source/mass quadrature
  double kappa3 = 0.0;         // YH curvature blend
  Semantics semantics = Semantics::PointValue;
  SourceMode source = SourceMode::Point;
  bool mass_matrix = false;    // FVP only: couple the time derivative

  // Throws ConfigError for pairings that do not belong to the flavor.
  void validate() const;
  // Stencil reach on each side of a face.
  int reach() const { return flavor == Flavor1D::YH ? 2 : 1; }
  // Dirichlet layers per side in steady runs.
  int dirichlet_layers() const { return flavor == Flavor1D::YH ? 4 : 2; }
  // Coefficient c of the time-derivative coupling r_i + c (r_{i+1} - 2 r_i + r_{i-1}), 0 if none.
  double mass_coefficient() const;

  // Presets: the flavor with its native semantics and source treatment.
  static Scheme1D fvc(double kappa = 1.0 / 3.0);
  static Scheme1D fvp(double kappa = 0.5, bool mass_matrix = false);
  static Scheme1D fd(double kappa);
  static Scheme1D fsr(double theta = 1.0 / 3.0, double kappa = 0.5);
  static Scheme1D ssq(double kappa_s = 1.0 / 6.0);
  static Scheme1D yh(double kappa = -1.0 / 6.0, double kappa3 = 0.0);
};

struct Grid1D {
  int n = 0;
  double h = 0.0;
  double x0 = 0.0;
  bool periodic = false;
  double x(int i) const { return x0 + i * h; }

  // n points x_i = i h on [0,1], h = 1/(n-1)
  static Grid1D steady(int n);
  // n periodic cells on [0,1), x_i = (i + 1/2) h
  static Grid1D periodic_cells(int n);
};

struct Law1D {
  ScalarLaw kind = ScalarLaw::Burgers;
  double a = 1.0;
  double f(double u) const { return scalar_flux(u, kind, a); }
  double speed(double u) const { return scalar_wave_speed(u, kind, a); }
};

// Residual with du/dt = -Res: Res_i = (phi_{i+1/2} - phi_{i-1/2}) / h - s_i.
// `source` holds the already discretized source (may be empty). On a
// non-periodic grid the first and last dirichlet_layers() entries are zero.
std::vector<double> residual_1d(const Scheme1D& scheme, const Law1D& law, const Grid1D& grid,
                                std::span<const double> u, std::span<const double> source = {});

// s_i + (kappa_s/4)(s_{i+1} - 2 s_i + s_{i-1}); end values are copied on a non-periodic grid.
std::vector<double> ssq_source_1d(std::span<const double> s, double kappa_s, bool periodic);

// r_i + c (r_{i+1} - 2 r_i + r_{i-1}) and its inverse. Non-periodic closure keeps
// the end rows as identity.
std::vector<double> mass_apply(std::span<const double> r, double c, bool periodic);
std::vector<double> mass_solve(std::span<const double> r, double c, bool periodic);
inline std::vector<double> fvp_mass_apply(std::span<const double> r, bool periodic) {
  return mass_apply(r, 1.0 / 24.0, periodic);
}
inline std::vector<double> fvp_mass_solve(std::span<const double> r, bool periodic) {
  return mass_solve(r, 1.0 / 24.0, periodic);
}

// Cell averages over [x - h/2, x + h/2].
double cell_average_exp(double C, double a, double x, double h);  // of C exp(a x)
double cell_average_sin(double x, double h);                      // of sin(2 pi x)
double cell_average_gauss3(const std::function<double(double)>& f, double x, double h);

enum class Problem1D { SteadyBurgers, SteadyAdvection, UnsteadyBurgers, UnsteadyAdvection, GaussianPulse };
std::string_view to_string(Problem1D p);
Problem1D parse_problem_1d(std::string_view s);

struct Case1D {
  Problem1D problem = Problem1D::SteadyBurgers;
  double C = 1.57;
  double a = 1.23;

  bool steady() const { return problem == Problem1D::SteadyBurgers || problem == Problem1D::SteadyAdvection; }
  Law1D law() const;
  double exact_point(double x, double t = 0.0) const;
  // exact value under the requested semantics at grid point x
  double exact(Semantics s, double x, double h, double t = 0.0) const;
  double source_point(double x) const;
  double source_cell_average(double x, double h) const;
};

// Burgers solution from sin(2 pi x) data before breaking: solves u = sin(2 pi (x - u t)).
double burgers_sine_exact(double x, double t);

std::vector<double> discrete_source(const Scheme1D& scheme, const Case1D& c, const Grid1D& grid);

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};
ErrorNorms error_norms_1d(std::span<const double> u, std::span<const double> exact);

struct SteadyOptions {
  double cfl = 0.8;
  double drop = 1e-7;      // required reduction of the L1 residual
  double floor = 1e-14;    // absolute L1 level accepted as converged
  int max_iterations = 2000000;
  bool start_from_exact = false;
};

struct Run1DResult {
  Grid1D grid;
  std::vector<double> u;
  std::vector<double> exact;  // comparator under the scheme's semantics
  int iterations = 0;
  double residual0 = 0.0;
  double residual = 0.0;
  double time = 0.0;
};

Run1DResult steady_driver_1d(const Scheme1D& scheme, const Case1D& c, int n, const SteadyOptions& opt = {});

// Periodic integration with SSP RK3. The initial data use the scheme's semantics.
Run1DResult unsteady_driver_1d(const Scheme1D& scheme, const Case1D& c, int n, double dt, int nsteps);

}  // namespace umuscl
