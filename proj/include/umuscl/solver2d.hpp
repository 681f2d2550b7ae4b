#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "umuscl/flux.hpp"
#include "umuscl/lsq.hpp"
#include "umuscl/mesh.hpp"
#include "umuscl/reconstruction.hpp"

namespace umuscl {

enum class Scheme2D { UMuscl, Cfsr3, UMusclSsq };
std::string_view to_string(Scheme2D s);
Scheme2D parse_scheme_2d(std::string_view s);

struct Discretization2D {
  Scheme2D scheme = Scheme2D::UMuscl;
  ReconConfig recon;
  FluxKind flux = FluxKind::Rusanov;
  double kappa_s = 0.25;
  LsqKind lsq = LsqKind::Linear;
  bool entropy_fix = false;

  // 1/4 on triangles, 1/6 on quadrilaterals
  static double default_kappa_s(GridFamily f);
  void validate() const;
};

// ---- equation systems -------------------------------------------------------

// Euler equations; states handed to flux routines are primitive.
struct EulerSystem {
  static constexpr int kVars = 4;
  using State = Vec4;
  using Block = Mat4;

  GasModel gas;
  FluxKind flux = FluxKind::Rusanov;
  bool entropy_fix = false;

  State to_primitive(const State& q) const { return umuscl::to_primitive(q, gas); }
  State to_conservative(const State& w) const { return umuscl::to_conservative(w, gas); }
  State physical_flux(const State& w, Vec2 n) const { return euler_flux(w, n, gas); }
  State jacobian_apply(const State& w, Vec2 n, const State& dw) const { return flux_jacobian_apply(w, n, dw, gas); }
  State dissipation(const State& wL, const State& wR, Vec2 n) const;
  double wave_speed(const State& w, Vec2 n) const;
  void check(const State& w) const { require_physical(w, "euler state"); }
};

// Scalar law u_t + f_x + g_y = s with either f = a_x u, g = a_y u or f = g = u^2/2.
struct ScalarSystem {
  static constexpr int kVars = 1;
  using State = Eigen::Matrix<double, 1, 1>;
  using Block = Eigen::Matrix<double, 1, 1>;

  ScalarLaw law = ScalarLaw::Advection;
  double ax = 1.0, ay = 0.5;

  double speed(double u, Vec2 n) const { return law == ScalarLaw::Advection ? ax * n.x + ay * n.y : u * (n.x + n.y); }
  State to_primitive(const State& q) const { return q; }
  State to_conservative(const State& w) const { return w; }
  State physical_flux(const State& w, Vec2 n) const {
    return State(law == ScalarLaw::Advection ? (ax * n.x + ay * n.y) * w[0] : 0.5 * w[0] * w[0] * (n.x + n.y));
  }
  State jacobian_apply(const State& w, Vec2 n, const State& dw) const { return State(speed(w[0], n) * dw[0]); }
  State dissipation(const State& wL, const State& wR, Vec2 n) const {
    return State(std::abs(speed(0.5 * (wL[0] + wR[0]), n)) * (wR[0] - wL[0]));
  }
  double wave_speed(const State& w, Vec2 n) const { return std::abs(speed(w[0], n)); }
  void check(const State& w) const;
};

// ---- cases ------------------------------------------------------------------

enum class Case2DKind { MmsEuler, MmsScalar, Vortex };
std::string_view to_string(Case2DKind k);
Case2DKind parse_case_2d(std::string_view s);

// rho, u, v, p = (1, 0.15, 0.02, 1) + C exp(pi (0.3 x + 0.3 y)); source = div F(exact)
struct MmsEuler {
  double C = 0.3;
  GasModel gas;
  Vec4 exact(Point p) const;
  Vec4 source(Point p) const;
};

// u = 1.5 + 0.5 sin(2.1 x + 1.3 y) for the scalar system
struct MmsScalar {
  ScalarSystem sys;
  double exact(Point p) const;
  double source(Point p) const;
};

struct Vortex {
  double K = 6.0;
  double u_inf = 0.5, v_inf = 0.0;
  GasModel gas;
  Vec4 exact(Point p, double t) const;
  static Rectangle domain() { return {-6.0, -5.0, 24.0, 5.0}; }
};

// ---- residual assembly ------------------------------------------------------

template <class Sys>
class EdgeSolver {
 public:
  using State = typename Sys::State;
  using Block = typename Sys::Block;
  static constexpr int N = Sys::kVars;

  EdgeSolver(const Mesh& mesh, const DualMetrics& metrics, Sys sys, Discretization2D disc);

  const Mesh& mesh() const { return mesh_; }
  const DualMetrics& metrics() const { return metrics_; }
  const Sys& system() const { return sys_; }
  const Discretization2D& discretization() const { return disc_; }
  const GradientOperator& gradient_operator() const { return grad_; }

  // out_j = (sum_k Phi_jk A_jk) / V_j from conservative nodal values.
  void flux_balance(std::span<const State> q, std::span<State> out);
  // Same, with the domain boundary closed by the physical flux through the
  // boundary dual faces (used for conservation checks).
  void flux_balance_closed(std::span<const State> q, std::span<State> out);
  // Nodal source values turned into the scheme's discrete source (point value,
  // or the ssq quadrature for UMusclSsq).
  std::vector<State> discrete_source(std::span<const State> s) const;
  // (1/V_j) sum_k psi_jk V_jk with parameter kappa_s
  std::vector<State> source_quadrature(std::span<const State> s) const;

  // First-order (no gradients) Rusanov/Roe/upwind flux blocks d Phi/d q_j and d Phi/d q_k per edge,
  // already multiplied by A_jk.
  void first_order_jacobian(std::span<const State> q, std::vector<Block>& dj, std::vector<Block>& dk) const;
  // sum_k spectral radius * A_jk per node
  std::vector<double> spectral_sum(std::span<const State> q) const;

  // Primitive states and their gradients from the last flux_balance call.
  const std::vector<State>& primitives() const { return w_; }

 private:
  void assemble(std::span<const State> q, std::span<State> out, bool closed);

  const Mesh& mesh_;
  const DualMetrics& metrics_;
  Sys sys_;
  Discretization2D disc_;
  GradientOperator grad_;
  struct EdgeGeom {
    int j, k;
    Vec2 n;     // unit normal
    double A;
    Vec2 d;     // x_k - x_j
  };
  std::vector<EdgeGeom> geom_;
  std::vector<State> w_, gx_, gy_;
};

extern template class EdgeSolver<EulerSystem>;
extern template class EdgeSolver<ScalarSystem>;

// ---- drivers ----------------------------------------------------------------

struct SteadyOptions2D {
  double drop = 1e-6;           // relative reduction of the L1 residual
  double floor = 1e-13;         // absolute L1 level accepted as converged
  int max_outer = 500;
  double cfl_start = 1e3;       // pseudo-time CFL, doubled every outer iteration
  double cfl_max = 1e12;
  double linear_drop = 1e-1;
  int max_sweeps = 30;
  bool start_from_exact = true; // otherwise a uniform state taken at the domain centre
};

struct SteadyResult2D {
  int outer_iterations = 0;
  int total_sweeps = 0;
  double residual0 = 0.0;
  double residual = 0.0;
};

// Defect correction: first-order Jacobian, block Gauss-Seidel inner solves,
// rings 0..2 held at `fixed` values. `q` holds the initial guess and the result.
template <class Sys>
SteadyResult2D steady_implicit_driver(EdgeSolver<Sys>& solver, std::vector<typename Sys::State>& q,
                                      std::span<const typename Sys::State> nodal_source,
                                      const SteadyOptions2D& opt = {});

struct UnsteadyOptions2D {
  double dt = 5e-4;
  int nsteps = 72000;
  double mass_drop = 1e-6;  // ssq mass-system relaxation
  int mass_max_sweeps = 50;
};

// SSP RK3; rings 0..2 follow boundary(x, t). Throws on non-finite values.
template <class Sys>
void unsteady_rk3_driver(EdgeSolver<Sys>& solver, std::vector<typename Sys::State>& q,
                         const std::function<typename Sys::State(Point, double)>& boundary_conservative,
                         const UnsteadyOptions2D& opt, double t0 = 0.0);

// ---- error measures ---------------------------------------------------------

struct FieldErrors {
  std::vector<double> l1;    // per variable, volume weighted
  std::vector<double> linf;
};

// Errors of primitive variables (Euler) or u (scalar) against nodal exact values.
FieldErrors field_errors(const Mesh& mesh, const DualMetrics& metrics, std::span<const Vec4> w,
                         std::span<const Vec4> exact);
FieldErrors field_errors(const Mesh& mesh, const DualMetrics& metrics, std::span<const double> u,
                         std::span<const double> exact);

struct TruncationProbe {
  std::vector<double> l1;  // per variable over ring >= 3 nodes
  double total = 0.0;      // sum over variables
};

// Residual with the exact solution injected, R_j = flux balance - discrete source.
template <class Sys>
TruncationProbe truncation_error_probe(EdgeSolver<Sys>& solver, std::span<const typename Sys::State> exact_q,
                                       std::span<const typename Sys::State> nodal_source);

// ---- case runners (used by the harness and the CLI) -------------------------

struct Run2DSpec {
  Case2DKind kind = Case2DKind::MmsEuler;
  GridFamily family = GridFamily::RegularQuad;
  int n = 32;                 // nodes per direction (vortex: nx, with ny = n / 3)
  std::uint64_t seed = 1;
  Discretization2D disc;
  double C = 0.3;             // MMS amplitude
  ScalarLaw law = ScalarLaw::Advection;
  Vortex vortex;
  SteadyOptions2D steady;
  UnsteadyOptions2D unsteady;
};

struct Run2DResult {
  int nodes = 0;
  double h = 0.0;
  FieldErrors errors;           // rho,u,v,p (Euler) or u (scalar)
  std::vector<double> l2;       // per variable, volume weighted
  SteadyResult2D steady;
  Mesh mesh;
  std::vector<Vec4> w;          // final primitive field (Euler) / u in w[.][0] (scalar)
};

Run2DResult run_case_2d(const Run2DSpec& spec);
TruncationProbe run_truncation_probe_2d(const Run2DSpec& spec);

Mesh make_case_mesh(const Run2DSpec& spec);

}  // namespace umuscl
