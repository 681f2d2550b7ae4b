#include "umuscl/schemes1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "umuscl/reconstruction.hpp"
#include "umuscl/time_integration.hpp"

namespace umuscl {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string_view to_string(Flavor1D f) {
  switch (f) {
    case Flavor1D::FVC: return "fvc";
    case Flavor1D::FVP: return "fvp";
    case Flavor1D::FD: return "fd";
    case Flavor1D::FSR: return "fsr";
    case Flavor1D::SSQ: return "ssq";
    case Flavor1D::YH: return "yh";
  }
  return "?";
}

std::string_view to_string(Semantics s) { return s == Semantics::CellAverage ? "cell-average" : "point-value"; }

std::string_view to_string(SourceMode s) {
  switch (s) {
    case SourceMode::None: return "none";
    case SourceMode::Point: return "point";
    case SourceMode::CellAverage: return "cell-average";
    case SourceMode::Quadrature: return "ssq-quadrature";
  }
  return "?";
}

Flavor1D parse_flavor(std::string_view s) {
  for (Flavor1D f : {Flavor1D::FVC, Flavor1D::FVP, Flavor1D::FD, Flavor1D::FSR, Flavor1D::SSQ, Flavor1D::YH})
    if (s == to_string(f)) return f;
  throw ConfigError("unknown 1D flavor '" + std::string(s) + "'");
}

Semantics parse_semantics(std::string_view s) {
  if (s == "cell-average" || s == "cell") return Semantics::CellAverage;
  if (s == "point-value" || s == "point") return Semantics::PointValue;
  throw ConfigError("unknown semantics '" + std::string(s) + "'");
}

SourceMode parse_source_mode(std::string_view s) {
  if (s == "none") return SourceMode::None;
  if (s == "point") return SourceMode::Point;
  if (s == "cell-average" || s == "cell") return SourceMode::CellAverage;
  if (s == "ssq-quadrature" || s == "quadrature" || s == "ssq") return SourceMode::Quadrature;
  throw ConfigError("unknown source mode '" + std::string(s) + "'");
}

void Scheme1D::validate() const {
  if (!std::isfinite(kappa) || !std::isfinite(theta) || !std::isfinite(kappa_s) || !std::isfinite(kappa3))
    throw ConfigError("scheme parameters must be finite");
  auto fail = [this](const std::string& why) {
    throw ConfigError(std::string(to_string(flavor)) + ": " + why + " (semantics " +
                      std::string(to_string(semantics)) + ", source " + std::string(to_string(source)) + ")");
  };
  const bool none = source == SourceMode::None;
  switch (flavor) {
    case Flavor1D::FVC:
      if (semantics != Semantics::CellAverage) fail("unknowns must be cell averages");
      if (!none && source != SourceMode::CellAverage) fail("source must be cell-averaged");
      break;
    case Flavor1D::FVP:
      if (semantics != Semantics::PointValue) fail("unknowns must be point values");
      if (!none && source != SourceMode::CellAverage) fail("source must be cell-averaged");
      break;
    case Flavor1D::FD:
    case Flavor1D::FSR:
    case Flavor1D::YH:
      if (semantics != Semantics::PointValue) fail("unknowns must be point values");
      if (!none && source != SourceMode::Point) fail("source must be point-valued");
      break;
    case Flavor1D::SSQ:
      if (semantics != Semantics::PointValue) fail("unknowns must be point values");
      if (!none && source != SourceMode::Quadrature) fail("source must use the ssq quadrature");
      if (std::abs(kappa - 0.5) > 1e-14) fail("requires kappa = 1/2");
      break;
  }
  if (mass_matrix && flavor != Flavor1D::FVP) fail("mass_matrix applies to fvp only");
}

double Scheme1D::mass_coefficient() const {
  if (flavor == Flavor1D::SSQ) return 0.25 * kappa_s;
  if (flavor == Flavor1D::FVP && mass_matrix) return 1.0 / 24.0;
  return 0.0;
}

Scheme1D Scheme1D::fvc(double kappa) {
  Scheme1D s;
  s.flavor = Flavor1D::FVC;
  s.kappa = kappa;
  s.semantics = Semantics::CellAverage;
  s.source = SourceMode::CellAverage;
  return s;
}
Scheme1D Scheme1D::fvp(double kappa, bool mass_matrix) {
  Scheme1D s;
  s.flavor = Flavor1D::FVP;
  s.kappa = kappa;
  s.source = SourceMode::CellAverage;
  s.mass_matrix = mass_matrix;
  return s;
}
Scheme1D Scheme1D::fd(double kappa) {
  Scheme1D s;
  s.kappa = kappa;
  return s;
}
Scheme1D Scheme1D::fsr(double theta, double kappa) {
  Scheme1D s;
  s.flavor = Flavor1D::FSR;
  s.kappa = kappa;
  s.theta = theta;
  return s;
}
Scheme1D Scheme1D::ssq(double kappa_s) {
  Scheme1D s;
  s.flavor = Flavor1D::SSQ;
  s.kappa = 0.5;
  s.kappa_s = kappa_s;
  s.source = SourceMode::Quadrature;
  return s;
}
Scheme1D Scheme1D::yh(double kappa, double kappa3) {
  Scheme1D s;
  s.flavor = Flavor1D::YH;
  s.kappa = kappa;
  s.kappa3 = kappa3;
  return s;
}

Grid1D Grid1D::steady(int n) {
  if (n < 8) throw ConfigError("steady 1D grid needs at least 8 points");
  return {n, 1.0 / (n - 1), 0.0, false};
}

Grid1D Grid1D::periodic_cells(int n) {
  if (n < 6) throw ConfigError("periodic 1D grid needs at least 6 cells");
  const double h = 1.0 / n;
  return {n, h, 0.5 * h, true};
}

std::vector<double> residual_1d(const Scheme1D& scheme, const Law1D& law, const Grid1D& grid,
                                std::span<const double> u, std::span<const double> source) {
  scheme.validate();
  const int n = grid.n;
  if (static_cast<int>(u.size()) != n) throw std::invalid_argument("residual_1d: field size mismatch");
  if (!source.empty() && static_cast<int>(source.size()) != n)
    throw std::invalid_argument("residual_1d: source size mismatch");

  auto at = [&](int i) {
    if (grid.periodic) i = ((i % n) + n) % n;
    return u[i];
  };
  const double kappa = scheme.kappa;
  auto face_flux = [&](int i) {
    double uL, uR;
    if (scheme.flavor == Flavor1D::YH) {
      uL = yang_harris_1d(at(i - 2), at(i - 1), at(i), at(i + 1), at(i + 2), kappa, scheme.kappa3);
      uR = yang_harris_1d(at(i + 3), at(i + 2), at(i + 1), at(i), at(i - 1), kappa, scheme.kappa3);
    } else {
      const auto p = umuscl_pair_delta_form(at(i - 1), at(i), at(i + 1), at(i + 2), kappa);
      uL = p.left;
      uR = p.right;
    }
    double central;
    if (scheme.flavor == Flavor1D::FSR) {
      const double th = scheme.theta;
      const double fL = delta_form_left(law.f(at(i - 1)), law.f(at(i)), law.f(at(i + 1)), th);
      const double fR = delta_form_left(law.f(at(i + 2)), law.f(at(i + 1)), law.f(at(i)), th);
      central = 0.5 * (fL + fR);
    } else {
      central = 0.5 * (law.f(uL) + law.f(uR));
    }
    return central - 0.5 * std::abs(law.speed(0.5 * (uL + uR))) * (uR - uL);
  };

  std::vector<double> res(n, 0.0);
  if (grid.periodic) {
    std::vector<double> phi(n);
    for (int i = 0; i < n; ++i) phi[i] = face_flux(i);
    for (int i = 0; i < n; ++i) res[i] = (phi[i] - phi[(i + n - 1) % n]) / grid.h;
  } else {
    const int L = scheme.dirichlet_layers();
    if (n < 2 * L + 1) throw std::invalid_argument("residual_1d: grid too small for the stencil");
    double left = face_flux(L - 1);
    for (int i = L; i < n - L; ++i) {
      const double right = face_flux(i);
      res[i] = (right - left) / grid.h;
      left = right;
    }
  }
  if (!source.empty()) {
    const int L = grid.periodic ? 0 : scheme.dirichlet_layers();
    for (int i = L; i < n - L; ++i) res[i] -= source[i];
  }
  return res;
}

std::vector<double> ssq_source_1d(std::span<const double> s, double kappa_s, bool periodic) {
  const int n = static_cast<int>(s.size());
  std::vector<double> out(s.begin(), s.end());
  for (int i = 0; i < n; ++i) {
    if (!periodic && (i == 0 || i == n - 1)) continue;
    const double sm = s[(i + n - 1) % n], sp = s[(i + 1) % n];
    out[i] = s[i] + 0.25 * kappa_s * (sp - 2.0 * s[i] + sm);
  }
  return out;
}

std::vector<double> mass_apply(std::span<const double> r, double c, bool periodic) {
  return ssq_source_1d(r, 4.0 * c, periodic);
}

namespace {

// Thomas algorithm; a = sub, b = diag, c = super diagonals.
std::vector<double> tridiagonal(const std::vector<double>& a, const std::vector<double>& b,
                                const std::vector<double>& c, const std::vector<double>& r) {
  const int n = static_cast<int>(b.size());
  std::vector<double> x(n), g(n);
  double bet = b[0];
  if (bet == 0.0) throw std::runtime_error("tridiagonal solve: singular matrix");
  x[0] = r[0] / bet;
  for (int j = 1; j < n; ++j) {
    g[j] = c[j - 1] / bet;
    bet = b[j] - a[j] * g[j];
    if (bet == 0.0) throw std::runtime_error("tridiagonal solve: singular matrix");
    x[j] = (r[j] - a[j] * x[j - 1]) / bet;
  }
  for (int j = n - 2; j >= 0; --j) x[j] -= g[j + 1] * x[j + 1];
  return x;
}

}  // namespace

std::vector<double> mass_solve(std::span<const double> r, double c, bool periodic) {
  const int n = static_cast<int>(r.size());
  std::vector<double> a(n, c), b(n, 1.0 - 2.0 * c), sup(n, c), rhs(r.begin(), r.end());
  if (!periodic) {
    b[0] = b[n - 1] = 1.0;
    sup[0] = 0.0;
    a[n - 1] = 0.0;
    return tridiagonal(a, b, sup, rhs);
  }
  // cyclic system by Sherman-Morrison; both corner entries equal c
  const double gamma = -b[0];
  std::vector<double> bb = b;
  bb[0] = b[0] - gamma;
  bb[n - 1] = b[n - 1] - c * c / gamma;
  std::vector<double> x = tridiagonal(a, bb, sup, rhs);
  std::vector<double> w(n, 0.0);
  w[0] = gamma;
  w[n - 1] = c;
  const std::vector<double> z = tridiagonal(a, bb, sup, w);
  const double fact = (x[0] + c * x[n - 1] / gamma) / (1.0 + z[0] + c * z[n - 1] / gamma);
  for (int i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

double cell_average_exp(double C, double a, double x, double h) {
  if (a == 0.0) return C;
  return C / (a * h) * (std::exp(a * (x + 0.5 * h)) - std::exp(a * (x - 0.5 * h)));
}

double cell_average_sin(double x, double h) {
  return (std::cos(2.0 * kPi * (x - 0.5 * h)) - std::cos(2.0 * kPi * (x + 0.5 * h))) / (2.0 * kPi * h);
}

double cell_average_gauss3(const std::function<double(double)>& f, double x, double h) {
  const double g = 0.5 * h * std::sqrt(3.0 / 5.0);
  return (5.0 * f(x - g) + 8.0 * f(x) + 5.0 * f(x + g)) / 18.0;
}

std::string_view to_string(Problem1D p) {
  switch (p) {
    case Problem1D::SteadyBurgers: return "steady-burgers";
    case Problem1D::SteadyAdvection: return "steady-advection";
    case Problem1D::UnsteadyBurgers: return "unsteady-burgers";
    case Problem1D::UnsteadyAdvection: return "unsteady-advection";
    case Problem1D::GaussianPulse: return "gaussian-pulse";
  }
  return "?";
}

Problem1D parse_problem_1d(std::string_view s) {
  for (Problem1D p : {Problem1D::SteadyBurgers, Problem1D::SteadyAdvection, Problem1D::UnsteadyBurgers,
                      Problem1D::UnsteadyAdvection, Problem1D::GaussianPulse})
    if (s == to_string(p)) return p;
  throw ConfigError("unknown 1D problem '" + std::string(s) + "'");
}

double burgers_sine_exact(double x, double t) {
  double u = std::sin(2.0 * kPi * x);
  for (int it = 0; it < 100; ++it) {
    const double arg = 2.0 * kPi * (x - u * t);
    const double g = u - std::sin(arg);
    const double dg = 1.0 + 2.0 * kPi * t * std::cos(arg);
    const double du = g / dg;
    u -= du;
    if (std::abs(du) <= 1e-14 * (1.0 + std::abs(u))) return u;
  }
  // roundoff can stall the step test; accept a root to 1e-14
  if (std::abs(u - std::sin(2.0 * kPi * (x - u * t))) <= 1e-14) return u;
  throw std::runtime_error("burgers_sine_exact: Newton iteration did not converge at x=" + std::to_string(x));
}

Law1D Case1D::law() const {
  const bool burgers = problem == Problem1D::SteadyBurgers || problem == Problem1D::UnsteadyBurgers;
  return {burgers ? ScalarLaw::Burgers : ScalarLaw::Advection, 1.0};
}

double Case1D::exact_point(double x, double t) const {
  switch (problem) {
    case Problem1D::SteadyBurgers:
    case Problem1D::SteadyAdvection: return C * std::exp(a * x);
    case Problem1D::UnsteadyBurgers: return burgers_sine_exact(x, t);
    case Problem1D::UnsteadyAdvection: return std::sin(2.0 * kPi * (x - t));
    case Problem1D::GaussianPulse: {
      double xi = x - t;
      xi -= std::floor(xi);
      return std::exp(-80.0 * (xi - 0.5) * (xi - 0.5));
    }
  }
  return 0.0;
}

double Case1D::exact(Semantics s, double x, double h, double t) const {
  if (s == Semantics::PointValue) return exact_point(x, t);
  switch (problem) {
    case Problem1D::SteadyBurgers:
    case Problem1D::SteadyAdvection: return cell_average_exp(C, a, x, h);
    case Problem1D::UnsteadyAdvection: return cell_average_sin(x - t, h);
    default: return cell_average_gauss3([&](double y) { return exact_point(y, t); }, x, h);
  }
}

double Case1D::source_point(double x) const {
  switch (problem) {
    case Problem1D::SteadyBurgers: return a * C * C * std::exp(2.0 * a * x);
    case Problem1D::SteadyAdvection: return a * C * std::exp(a * x);
    default: return 0.0;
  }
}

double Case1D::source_cell_average(double x, double h) const {
  switch (problem) {
    case Problem1D::SteadyBurgers: return cell_average_exp(a * C * C, 2.0 * a, x, h);
    case Problem1D::SteadyAdvection: return cell_average_exp(a * C, a, x, h);
    default: return 0.0;
  }
}

std::vector<double> discrete_source(const Scheme1D& scheme, const Case1D& c, const Grid1D& grid) {
  if (!c.steady() || scheme.source == SourceMode::None) return {};
  std::vector<double> s(grid.n);
  for (int i = 0; i < grid.n; ++i)
    s[i] = scheme.source == SourceMode::CellAverage ? c.source_cell_average(grid.x(i), grid.h)
                                                    : c.source_point(grid.x(i));
  if (scheme.source == SourceMode::Quadrature) return ssq_source_1d(s, scheme.kappa_s, grid.periodic);
  return s;
}

ErrorNorms error_norms_1d(std::span<const double> u, std::span<const double> exact) {
  ErrorNorms e;
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(u[i] - exact[i]);
    e.l1 += d;
    e.l2 += d * d;
    e.linf = std::max(e.linf, d);
  }
  e.l1 /= static_cast<double>(n);
  e.l2 = std::sqrt(e.l2 / static_cast<double>(n));
  return e;
}

namespace {

double free_l1(std::span<const double> r, int L) {
  const int n = static_cast<int>(r.size());
  double s = 0.0;
  for (int i = L; i < n - L; ++i) s += std::abs(r[i]);
  return s / (n - 2 * L);
}

}  // namespace

Run1DResult steady_driver_1d(const Scheme1D& scheme, const Case1D& c, int n, const SteadyOptions& opt) {
  scheme.validate();
  if (!c.steady()) throw ConfigError("steady_driver_1d needs a steady problem");
  Run1DResult out;
  out.grid = Grid1D::steady(n);
  const Grid1D& g = out.grid;
  const Law1D law = c.law();
  const int L = scheme.dirichlet_layers();

  out.exact.resize(n);
  for (int i = 0; i < n; ++i) out.exact[i] = c.exact(scheme.semantics, g.x(i), g.h);
  std::vector<double>& u = out.u;
  u.resize(n);
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    u[i] = opt.start_from_exact ? out.exact[i] : (1.0 - s) * out.exact[0] + s * out.exact[n - 1];
  }
  for (int i = 0; i < L; ++i) {
    u[i] = out.exact[i];
    u[n - 1 - i] = out.exact[n - 1 - i];
  }
  const std::vector<double> src = discrete_source(scheme, c, g);

  auto rate = [&](const std::vector<double>& v, double, std::vector<double>& r) {
    r = residual_1d(scheme, law, g, v, src);
    for (double& x : r) x = -x;
  };
  for (int it = 0;; ++it) {
    const double R = free_l1(residual_1d(scheme, law, g, u, src), L);
    if (it == 0) out.residual0 = R;
    out.residual = R;
    out.iterations = it;
    if (!std::isfinite(R) || R > 1e3 * out.residual0)
      throw std::runtime_error("steady_driver_1d: diverged at iteration " + std::to_string(it) + " (n=" +
                               std::to_string(n) + ")");
    if (R <= opt.drop * out.residual0 || R <= opt.floor) break;
    if (it >= opt.max_iterations)
      throw std::runtime_error("steady_driver_1d: no convergence after " + std::to_string(it) + " iterations");
    double smax = 1e-12;
    for (double v : u) smax = std::max(smax, std::abs(law.speed(v)));
    ssp_rk3_step(u, 0.0, opt.cfl * g.h / smax, rate);
  }
  return out;
}

Run1DResult unsteady_driver_1d(const Scheme1D& scheme, const Case1D& c, int n, double dt, int nsteps) {
  scheme.validate();
  if (c.steady()) throw ConfigError("unsteady_driver_1d needs an unsteady problem");
  Run1DResult out;
  out.grid = Grid1D::periodic_cells(n);
  const Grid1D& g = out.grid;
  const Law1D law = c.law();
  out.u.resize(n);
  for (int i = 0; i < n; ++i) out.u[i] = c.exact(scheme.semantics, g.x(i), g.h, 0.0);

  const double cm = scheme.mass_coefficient();
  auto rate = [&](const std::vector<double>& v, double, std::vector<double>& r) {
    r = residual_1d(scheme, law, g, v);
    for (double& x : r) x = -x;
    if (cm != 0.0) r = mass_solve(r, cm, true);
  };
  double t = 0.0;
  for (int s = 0; s < nsteps; ++s) {
    ssp_rk3_step(out.u, t, dt, rate);
    t = (s + 1) * dt;
    for (double v : out.u)
      if (!std::isfinite(v)) throw std::runtime_error("unsteady_driver_1d: non-finite value at step " + std::to_string(s));
  }
  out.time = t;
  out.iterations = nsteps;
  out.exact.resize(n);
  for (int i = 0; i < n; ++i) out.exact[i] = c.exact(scheme.semantics, g.x(i), g.h, t);
  return out;
}

}  // namespace umuscl
