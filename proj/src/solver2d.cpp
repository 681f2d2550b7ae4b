#include "umuscl/solver2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "umuscl/schemes1d.hpp"
#include "umuscl/time_integration.hpp"

namespace umuscl {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string_view to_string(Scheme2D s) {
  switch (s) {
    case Scheme2D::UMuscl: return "umuscl";
    case Scheme2D::Cfsr3: return "cfsr3";
    case Scheme2D::UMusclSsq: return "umuscl-ssq";
  }
  return "?";
}

Scheme2D parse_scheme_2d(std::string_view s) {
  if (s == "umuscl") return Scheme2D::UMuscl;
  if (s == "cfsr3") return Scheme2D::Cfsr3;
  if (s == "umuscl-ssq" || s == "ssq") return Scheme2D::UMusclSsq;
  throw ConfigError("unknown 2D scheme '" + std::string(s) + "'");
}

double Discretization2D::default_kappa_s(GridFamily f) { return is_simplex(f) ? 0.25 : 1.0 / 6.0; }

void Discretization2D::validate() const {
  if (!std::isfinite(recon.kappa) || !std::isfinite(recon.theta) || !std::isfinite(kappa_s))
    throw ConfigError("2D discretization parameters must be finite");
  if (scheme == Scheme2D::UMusclSsq && std::abs(recon.kappa - 0.5) > 1e-14)
    throw ConfigError("umuscl-ssq requires kappa = 1/2");
}

EulerSystem::State EulerSystem::dissipation(const State& wL, const State& wR, Vec2 n) const {
  switch (flux) {
    case FluxKind::Roe: return roe_dissipation(wL, wR, n, gas, entropy_fix);
    case FluxKind::Rusanov: return rusanov_dissipation(wL, wR, n, gas);
    case FluxKind::ScalarUpwind: break;
  }
  throw ConfigError("scalar-upwind flux is not defined for the Euler equations");
}

double EulerSystem::wave_speed(const State& w, Vec2 n) const {
  return std::abs(w[1] * n.x + w[2] * n.y) + sound_speed(w, gas);
}

void ScalarSystem::check(const State& w) const {
  if (!std::isfinite(w[0])) throw NonPhysicalState("scalar state is not finite");
}

std::string_view to_string(Case2DKind k) {
  switch (k) {
    case Case2DKind::MmsEuler: return "mms";
    case Case2DKind::MmsScalar: return "mms-scalar";
    case Case2DKind::Vortex: return "vortex";
  }
  return "?";
}

Case2DKind parse_case_2d(std::string_view s) {
  if (s == "mms" || s == "mms-euler") return Case2DKind::MmsEuler;
  if (s == "mms-scalar") return Case2DKind::MmsScalar;
  if (s == "vortex") return Case2DKind::Vortex;
  throw ConfigError("unknown 2D case '" + std::string(s) + "'");
}

Vec4 MmsEuler::exact(Point p) const {
  const double e = C * std::exp(kPi * (0.3 * p.x + 0.3 * p.y));
  return {1.0 + e, 0.15 + e, 0.02 + e, 1.0 + e};
}

Vec4 MmsEuler::source(Point p) const {
  const Vec4 w = exact(p);
  const double g = 0.3 * kPi * C * std::exp(kPi * (0.3 * p.x + 0.3 * p.y));
  const Vec4 dw = Vec4::Constant(g);
  return flux_jacobian_apply(w, {1.0, 0.0}, dw, gas) + flux_jacobian_apply(w, {0.0, 1.0}, dw, gas);
}

double MmsScalar::exact(Point p) const { return 1.5 + 0.5 * std::sin(2.1 * p.x + 1.3 * p.y); }

double MmsScalar::source(Point p) const {
  const double c = 0.5 * std::cos(2.1 * p.x + 1.3 * p.y);
  const double ux = 2.1 * c, uy = 1.3 * c;
  if (sys.law == ScalarLaw::Advection) return sys.ax * ux + sys.ay * uy;
  return exact(p) * (ux + uy);
}

Vec4 Vortex::exact(Point p, double t) const {
  const double xb = p.x - u_inf * t, yb = p.y - v_inf * t;
  const double r2 = xb * xb + yb * yb;
  const double g = gas.gamma;
  const double e = std::exp(0.5 * (1.0 - r2));
  const double T = 1.0 - K * K * (g - 1.0) / (8.0 * kPi * kPi) * e * e;
  if (!(T > 0.0)) throw NonPhysicalState("vortex: non-positive temperature");
  const double rho = std::pow(T, 1.0 / (g - 1.0));
  return {rho, u_inf - K * yb / (2.0 * kPi) * e, v_inf + K * xb / (2.0 * kPi) * e, std::pow(rho, g) / g};
}

// ---- EdgeSolver -------------------------------------------------------------

template <class Sys>
EdgeSolver<Sys>::EdgeSolver(const Mesh& mesh, const DualMetrics& metrics, Sys sys, Discretization2D disc)
    : mesh_(mesh), metrics_(metrics), sys_(sys), disc_(disc), grad_(mesh, disc.lsq) {
  disc_.validate();
  if constexpr (std::is_same_v<Sys, EulerSystem>) sys_.flux = disc_.flux, sys_.entropy_fix = disc_.entropy_fix;
  geom_.reserve(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edge(e);
    const double A = metrics.area[e];
    geom_.push_back({ed.j, ed.k, (1.0 / A) * metrics.normal[e], A, mesh.node(ed.k) - mesh.node(ed.j)});
  }
  w_.resize(mesh.num_nodes());
  gx_.resize(mesh.num_nodes());
  gy_.resize(mesh.num_nodes());
}

template <class Sys>
void EdgeSolver<Sys>::flux_balance(std::span<const State> q, std::span<State> out) {
  assemble(q, out, false);
}

template <class Sys>
void EdgeSolver<Sys>::flux_balance_closed(std::span<const State> q, std::span<State> out) {
  assemble(q, out, true);
}

template <class Sys>
void EdgeSolver<Sys>::assemble(std::span<const State> q, std::span<State> out, bool closed) {
  const int nn = mesh_.num_nodes();
  for (int i = 0; i < nn; ++i) w_[i] = sys_.to_primitive(q[i]);
  grad_.gradients<State>(w_, gx_, gy_);
  for (int i = 0; i < nn; ++i) out[i].setZero();

  const double kappa = disc_.recon.kappa;
  const double theta = disc_.recon.theta;
  const bool cfsr = disc_.scheme == Scheme2D::Cfsr3;
  std::size_t e = 0;
  try {
    for (; e < geom_.size(); ++e) {
      const EdgeGeom& g = geom_[e];
      const State& wj = w_[g.j];
      const State& wk = w_[g.k];
      const State dj = gx_[g.j] * g.d.x + gy_[g.j] * g.d.y;
      const State dk = gx_[g.k] * g.d.x + gy_[g.k] * g.d.y;
      const State wL = wj + 0.5 * kappa * (wk - wj) + 0.5 * (1.0 - kappa) * dj;
      const State wR = wk - 0.5 * kappa * (wk - wj) - 0.5 * (1.0 - kappa) * dk;
      State central;
      if (cfsr) {
        const State fj = sys_.physical_flux(wj, g.n);
        const State fk = sys_.physical_flux(wk, g.n);
        const State dfj = sys_.jacobian_apply(wj, g.n, dj);
        const State dfk = sys_.jacobian_apply(wk, g.n, dk);
        // average of the theta-blended left and right fluxes
        central = 0.5 * (fj + fk) + 0.25 * (1.0 - theta) * (dfj - dfk);
        sys_.check(wL);
        sys_.check(wR);
      } else {
        central = 0.5 * (sys_.physical_flux(wL, g.n) + sys_.physical_flux(wR, g.n));
      }
      const State phi = g.A * (central - 0.5 * sys_.dissipation(wL, wR, g.n));
      out[g.j] += phi;
      out[g.k] -= phi;
    }
  } catch (const NonPhysicalState& ex) {
    std::ostringstream os;
    os << ex.what() << " at edge " << e << " (" << geom_[e].j << "," << geom_[e].k << ")";
    throw NonPhysicalState(os.str());
  }
  if (closed) {
    for (int i = 0; i < nn; ++i) {
      const Vec2 nb = metrics_.boundary_normal[i];
      const double a = nb.norm();
      if (a > 0.0) out[i] += a * sys_.physical_flux(w_[i], (1.0 / a) * nb);
    }
  }
  for (int i = 0; i < nn; ++i) out[i] /= metrics_.volume[i];
}

template <class Sys>
std::vector<typename Sys::State> EdgeSolver<Sys>::source_quadrature(std::span<const State> s) const {
  const int nn = mesh_.num_nodes();
  std::vector<State> gx(nn), gy(nn), acc(nn, State::Zero());
  grad_.gradients<State>(s, gx, gy);
  const double ks = disc_.kappa_s;
  for (std::size_t e = 0; e < geom_.size(); ++e) {
    const EdgeGeom& g = geom_[e];
    const double vjk = metrics_.partial_volume[e];
    const State avg = 0.5 * (s[g.j] + s[g.k]);
    const State dj = gx[g.j] * g.d.x + gy[g.j] * g.d.y;
    const State dk = gx[g.k] * g.d.x + gy[g.k] * g.d.y;
    acc[g.j] += vjk * (ks * avg + (1.0 - ks) * (s[g.j] + 0.5 * dj));
    acc[g.k] += vjk * (ks * avg + (1.0 - ks) * (s[g.k] - 0.5 * dk));
  }
  for (int i = 0; i < nn; ++i) acc[i] = mesh_.ring(i) == 0 ? s[i] : State(acc[i] / metrics_.volume[i]);
  return acc;
}

template <class Sys>
std::vector<typename Sys::State> EdgeSolver<Sys>::discrete_source(std::span<const State> s) const {
  if (disc_.scheme == Scheme2D::UMusclSsq) return source_quadrature(s);
  return {s.begin(), s.end()};
}

template <class Sys>
void EdgeSolver<Sys>::first_order_jacobian(std::span<const State> q, std::vector<Block>& bj,
                                           std::vector<Block>& bk) const {
  bj.resize(geom_.size());
  bk.resize(geom_.size());
  auto phi = [this](const State& qj, const State& qk, Vec2 n) {
    const State wj = sys_.to_primitive(qj), wk = sys_.to_primitive(qk);
    return State(0.5 * (sys_.physical_flux(wj, n) + sys_.physical_flux(wk, n)) - 0.5 * sys_.dissipation(wj, wk, n));
  };
  for (std::size_t e = 0; e < geom_.size(); ++e) {
    const EdgeGeom& g = geom_[e];
    const State f0 = phi(q[g.j], q[g.k], g.n);
    for (int c = 0; c < N; ++c) {
      State qj = q[g.j], qk = q[g.k];
      const double ej = 1e-7 * std::max(1.0, std::abs(qj[c]));
      const double ek = 1e-7 * std::max(1.0, std::abs(qk[c]));
      qj[c] += ej;
      qk[c] += ek;
      bj[e].col(c) = g.A * (phi(qj, q[g.k], g.n) - f0) / ej;
      bk[e].col(c) = g.A * (phi(q[g.j], qk, g.n) - f0) / ek;
    }
  }
}

template <class Sys>
std::vector<double> EdgeSolver<Sys>::spectral_sum(std::span<const State> q) const {
  std::vector<double> s(mesh_.num_nodes(), 0.0);
  for (const EdgeGeom& g : geom_) {
    const double l = g.A * std::max(sys_.wave_speed(sys_.to_primitive(q[g.j]), g.n),
                                    sys_.wave_speed(sys_.to_primitive(q[g.k]), g.n));
    s[g.j] += l;
    s[g.k] += l;
  }
  return s;
}

template class EdgeSolver<EulerSystem>;
template class EdgeSolver<ScalarSystem>;

// ---- drivers ----------------------------------------------------------------

namespace {

template <class State>
double l1_free(const Mesh& mesh, const DualMetrics& m, std::span<const State> r) {
  double s = 0.0, v = 0.0;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (mesh.ring(i) < 3) continue;
    s += r[i].cwiseAbs().sum() * m.volume[i];
    v += m.volume[i];
  }
  return v > 0.0 ? s / v : 0.0;
}

template <class Sys>
bool physical(const Sys& sys, const typename Sys::State& q) {
  if constexpr (std::is_same_v<Sys, EulerSystem>) {
    const Vec4 w = sys.to_primitive(q);
    return w[0] > 0.0 && w[3] > 0.0 && w.allFinite();
  } else {
    return q.allFinite();
  }
}

}  // namespace

template <class Sys>
SteadyResult2D steady_implicit_driver(EdgeSolver<Sys>& solver, std::vector<typename Sys::State>& q,
                                      std::span<const typename Sys::State> nodal_source,
                                      const SteadyOptions2D& opt) {
  using State = typename Sys::State;
  using Block = typename Sys::Block;
  const Mesh& mesh = solver.mesh();
  const DualMetrics& m = solver.metrics();
  const int nn = mesh.num_nodes();
  const std::vector<State> src = solver.discrete_source(nodal_source);

  std::vector<State> R(nn), dq(nn);
  std::vector<Block> bj, bk, dinv(nn);
  SteadyResult2D res;
  int tiny_steps = 0;  // consecutive updates at roundoff level
  for (int outer = 0;; ++outer) {
    solver.flux_balance(q, R);
    for (int i = 0; i < nn; ++i) R[i] -= src[i];
    const double r = l1_free<State>(mesh, m, R);
    if (outer == 0) res.residual0 = r;
    res.residual = r;
    res.outer_iterations = outer;
    if (!std::isfinite(r)) throw std::runtime_error("steady_implicit_driver: residual is not finite");
    if (r <= opt.drop * res.residual0 || r <= opt.floor) break;
    // the residual can sit at roundoff above the drop target when started near the solution
    if (tiny_steps >= 3) break;
    if (outer >= opt.max_outer)
      throw std::runtime_error("steady_implicit_driver: stalled, residual " + std::to_string(r) + " after " +
                               std::to_string(outer) + " outer iterations (initial " +
                               std::to_string(res.residual0) + ")");

    const double cfl = std::min(opt.cfl_start * std::pow(2.0, outer), opt.cfl_max);
    solver.first_order_jacobian(q, bj, bk);
    const std::vector<double> spec = solver.spectral_sum(q);
    for (int i = 0; i < nn; ++i) {
      Block D = Block::Identity() * (spec[i] / cfl);
      auto nb = mesh.incident_edges(i);
      for (int e : nb) D += (mesh.edge(e).j == i) ? bj[e] : Block(-bk[e]);
      dinv[i] = D.inverse();
    }

    // block Gauss-Seidel on  J dq = -R V over ring >= 3 nodes
    for (int i = 0; i < nn; ++i) dq[i].setZero();
    double lin0 = -1.0;
    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
      double lin = 0.0;
      for (int i = 0; i < nn; ++i) {
        if (mesh.ring(i) < 3) continue;
        State rhs = -m.volume[i] * R[i];
        auto nbrs = mesh.neighbors(i);
        auto inc = mesh.incident_edges(i);
        for (std::size_t p = 0; p < nbrs.size(); ++p) {
          const int k = nbrs[p];
          if (mesh.ring(k) < 3) continue;
          const int e = inc[p];
          rhs -= (mesh.edge(e).j == i) ? State(bk[e] * dq[k]) : State(-bj[e] * dq[k]);
        }
        const State upd = dinv[i] * rhs;
        lin += (upd - dq[i]).cwiseAbs().sum();
        dq[i] = upd;
      }
      ++res.total_sweeps;
      if (lin0 < 0.0) lin0 = lin;
      if (lin <= opt.linear_drop * lin0) break;
    }

    double alpha = 1.0;
    for (int tries = 0;; ++tries) {
      bool ok = true;
      for (int i = 0; i < nn && ok; ++i)
        if (mesh.ring(i) >= 3) ok = physical(solver.system(), State(q[i] + alpha * dq[i]));
      if (ok) break;
      if (tries == 20) throw NonPhysicalState("steady_implicit_driver: update produces non-physical states");
      alpha *= 0.5;
    }
    double step = 0.0, scale = 0.0;
    for (int i = 0; i < nn; ++i) {
      if (mesh.ring(i) < 3) continue;
      q[i] += alpha * dq[i];
      step = std::max(step, alpha * dq[i].cwiseAbs().maxCoeff());
      scale = std::max(scale, q[i].cwiseAbs().maxCoeff());
    }
    tiny_steps = (step <= 1e-13 * scale) ? tiny_steps + 1 : 0;
  }
  return res;
}

template <class Sys>
void unsteady_rk3_driver(EdgeSolver<Sys>& solver, std::vector<typename Sys::State>& q,
                         const std::function<typename Sys::State(Point, double)>& bc,
                         const UnsteadyOptions2D& opt, double t0) {
  using State = typename Sys::State;
  const Mesh& mesh = solver.mesh();
  const int nn = mesh.num_nodes();
  const bool ssq = solver.discretization().scheme == Scheme2D::UMusclSsq;
  std::vector<int> fixed;
  for (int i = 0; i < nn; ++i)
    if (mesh.ring(i) < 3) fixed.push_back(i);

  std::vector<State> fb(nn), mx(nn);
  auto fix = [&](std::vector<State>& v, double t) {
    for (int i : fixed) v[i] = bc(mesh.node(i), t);
  };
  auto rate = [&](const std::vector<State>& v, double t, std::vector<State>& r) {
    solver.flux_balance(v, fb);
    for (int i = 0; i < nn; ++i) r[i] = -fb[i];
    if (!ssq) {
      for (int i : fixed) r[i].setZero();
      return;
    }
    // boundary rates from the prescribed data, then relax M r = b on the free nodes
    const double eps = 1e-5;
    for (int i : fixed) r[i] = (bc(mesh.node(i), t + eps) - bc(mesh.node(i), t - eps)) / (2.0 * eps);
    const std::vector<State> b = r;
    double b_norm = 0.0;
    for (int i = 0; i < nn; ++i)
      if (mesh.ring(i) >= 3) b_norm += b[i].cwiseAbs().sum();
    for (int sweep = 0; sweep < opt.mass_max_sweeps; ++sweep) {
      const std::vector<State> Mr = solver.source_quadrature(r);
      double res = 0.0;
      for (int i = 0; i < nn; ++i) {
        if (mesh.ring(i) < 3) continue;
        const State d = b[i] - Mr[i];
        res += d.cwiseAbs().sum();
        r[i] += d;
      }
      if (res <= opt.mass_drop * b_norm) break;
    }
  };

  double t = t0;
  fix(q, t);
  for (int s = 0; s < opt.nsteps; ++s) {
    ssp_rk3_step(q, t, opt.dt, rate, fix);
    t = t0 + (s + 1) * opt.dt;
    if (s % 100 == 99 || s + 1 == opt.nsteps) {
      for (const State& v : q)
        if (!v.allFinite()) throw std::runtime_error("unsteady_rk3_driver: non-finite state at step " + std::to_string(s));
    }
  }
}

template SteadyResult2D steady_implicit_driver<EulerSystem>(EdgeSolver<EulerSystem>&, std::vector<Vec4>&,
                                                            std::span<const Vec4>, const SteadyOptions2D&);
template SteadyResult2D steady_implicit_driver<ScalarSystem>(EdgeSolver<ScalarSystem>&,
                                                             std::vector<ScalarSystem::State>&,
                                                             std::span<const ScalarSystem::State>,
                                                             const SteadyOptions2D&);
template void unsteady_rk3_driver<EulerSystem>(EdgeSolver<EulerSystem>&, std::vector<Vec4>&,
                                               const std::function<Vec4(Point, double)>&,
                                               const UnsteadyOptions2D&, double);
template void unsteady_rk3_driver<ScalarSystem>(EdgeSolver<ScalarSystem>&, std::vector<ScalarSystem::State>&,
                                                const std::function<ScalarSystem::State(Point, double)>&,
                                                const UnsteadyOptions2D&, double);

// ---- errors and probes ------------------------------------------------------

namespace {

template <class Get>
FieldErrors errors_impl(const Mesh& mesh, const DualMetrics& m, int nvar, Get&& diff) {
  FieldErrors fe;
  fe.l1.assign(nvar, 0.0);
  fe.linf.assign(nvar, 0.0);
  double vol = 0.0;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    vol += m.volume[i];
    for (int c = 0; c < nvar; ++c) {
      const double d = std::abs(diff(i, c));
      fe.l1[c] += d * m.volume[i];
      fe.linf[c] = std::max(fe.linf[c], d);
    }
  }
  for (double& v : fe.l1) v /= vol;
  return fe;
}

}  // namespace

FieldErrors field_errors(const Mesh& mesh, const DualMetrics& m, std::span<const Vec4> w,
                         std::span<const Vec4> exact) {
  return errors_impl(mesh, m, 4, [&](int i, int c) { return w[i][c] - exact[i][c]; });
}

FieldErrors field_errors(const Mesh& mesh, const DualMetrics& m, std::span<const double> u,
                         std::span<const double> exact) {
  return errors_impl(mesh, m, 1, [&](int i, int) { return u[i] - exact[i]; });
}

template <class Sys>
TruncationProbe truncation_error_probe(EdgeSolver<Sys>& solver, std::span<const typename Sys::State> exact_q,
                                       std::span<const typename Sys::State> nodal_source) {
  using State = typename Sys::State;
  const Mesh& mesh = solver.mesh();
  const DualMetrics& m = solver.metrics();
  const int nn = mesh.num_nodes();
  std::vector<State> R(nn);
  solver.flux_balance(exact_q, R);
  const std::vector<State> src = solver.discrete_source(nodal_source);
  TruncationProbe p;
  p.l1.assign(Sys::kVars, 0.0);
  double vol = 0.0;
  for (int i = 0; i < nn; ++i) {
    if (mesh.ring(i) < 3) continue;
    vol += m.volume[i];
    for (int c = 0; c < Sys::kVars; ++c) p.l1[c] += std::abs(R[i][c] - src[i][c]) * m.volume[i];
  }
  for (double& v : p.l1) {
    v /= vol;
    p.total += v;
  }
  return p;
}

template TruncationProbe truncation_error_probe<EulerSystem>(EdgeSolver<EulerSystem>&, std::span<const Vec4>,
                                                             std::span<const Vec4>);
template TruncationProbe truncation_error_probe<ScalarSystem>(EdgeSolver<ScalarSystem>&,
                                                              std::span<const ScalarSystem::State>,
                                                              std::span<const ScalarSystem::State>);

// ---- case runners -----------------------------------------------------------

Mesh make_case_mesh(const Run2DSpec& spec) {
  if (spec.kind == Case2DKind::Vortex) return generate_grid(spec.family, spec.n, spec.n / 3, Vortex::domain(), spec.seed);
  return generate_grid(spec.family, spec.n, spec.n, Rectangle{}, spec.seed);
}

namespace {

ScalarSystem scalar_system(const Run2DSpec& spec) {
  ScalarSystem s;
  s.law = spec.law;
  return s;
}

double l2_of(const Mesh& mesh, const DualMetrics& m, const std::function<double(int)>& d) {
  double s = 0.0, v = 0.0;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    s += d(i) * d(i) * m.volume[i];
    v += m.volume[i];
  }
  return std::sqrt(s / v);
}

}  // namespace

Run2DResult run_case_2d(const Run2DSpec& spec) {
  spec.disc.validate();
  Run2DResult out;
  out.mesh = make_case_mesh(spec);
  const Mesh& mesh = out.mesh;
  const DualMetrics metrics = compute_dual_metrics(mesh);
  const int nn = mesh.num_nodes();
  out.nodes = nn;
  out.h = mesh.spacing();

  if (spec.kind == Case2DKind::MmsScalar) {
    using S = ScalarSystem::State;
    const MmsScalar mms{scalar_system(spec)};
    EdgeSolver<ScalarSystem> solver(mesh, metrics, mms.sys, spec.disc);
    std::vector<S> q(nn), s(nn);
    std::vector<double> ex(nn), u(nn);
    Point centre{0.5, 0.5};
    for (int i = 0; i < nn; ++i) {
      ex[i] = mms.exact(mesh.node(i));
      s[i] = S(mms.source(mesh.node(i)));
      q[i] = S((spec.steady.start_from_exact || mesh.ring(i) < 3) ? ex[i] : mms.exact(centre));
    }
    out.steady = steady_implicit_driver(solver, q, std::span<const S>(s), spec.steady);
    out.w.resize(nn, Vec4::Zero());
    for (int i = 0; i < nn; ++i) u[i] = out.w[i][0] = q[i][0];
    out.errors = field_errors(mesh, metrics, u, ex);
    out.l2 = {l2_of(mesh, metrics, [&](int i) { return u[i] - ex[i]; })};
    return out;
  }

  EulerSystem sys;
  sys.flux = spec.disc.flux;
  sys.entropy_fix = spec.disc.entropy_fix;
  EdgeSolver<EulerSystem> solver(mesh, metrics, sys, spec.disc);
  std::vector<Vec4> q(nn), ex(nn);
  if (spec.kind == Case2DKind::MmsEuler) {
    const MmsEuler mms{spec.C, sys.gas};
    std::vector<Vec4> s(nn);
    const Vec4 q_centre = to_conservative(mms.exact({0.5, 0.5}), sys.gas);
    for (int i = 0; i < nn; ++i) {
      ex[i] = mms.exact(mesh.node(i));
      s[i] = mms.source(mesh.node(i));
      q[i] = (spec.steady.start_from_exact || mesh.ring(i) < 3) ? to_conservative(ex[i], sys.gas) : q_centre;
    }
    out.steady = steady_implicit_driver(solver, q, std::span<const Vec4>(s), spec.steady);
  } else {
    Vortex vx = spec.vortex;
    vx.gas = sys.gas;
    for (int i = 0; i < nn; ++i) q[i] = to_conservative(vx.exact(mesh.node(i), 0.0), sys.gas);
    auto bc = [&vx](Point p, double t) { return to_conservative(vx.exact(p, t), vx.gas); };
    unsteady_rk3_driver<EulerSystem>(solver, q, bc, spec.unsteady);
    const double tf = spec.unsteady.nsteps * spec.unsteady.dt;
    for (int i = 0; i < nn; ++i) ex[i] = vx.exact(mesh.node(i), tf);
  }
  out.w.resize(nn);
  for (int i = 0; i < nn; ++i) out.w[i] = to_primitive(q[i], sys.gas);
  out.errors = field_errors(mesh, metrics, out.w, ex);
  for (int c = 0; c < 4; ++c) out.l2.push_back(l2_of(mesh, metrics, [&](int i) { return out.w[i][c] - ex[i][c]; }));
  return out;
}

TruncationProbe run_truncation_probe_2d(const Run2DSpec& spec) {
  spec.disc.validate();
  const Mesh mesh = make_case_mesh(spec);
  const DualMetrics metrics = compute_dual_metrics(mesh);
  const int nn = mesh.num_nodes();
  if (spec.kind == Case2DKind::MmsScalar) {
    using S = ScalarSystem::State;
    const MmsScalar mms{scalar_system(spec)};
    EdgeSolver<ScalarSystem> solver(mesh, metrics, mms.sys, spec.disc);
    std::vector<S> q(nn), s(nn);
    for (int i = 0; i < nn; ++i) {
      q[i] = S(mms.exact(mesh.node(i)));
      s[i] = S(mms.source(mesh.node(i)));
    }
    return truncation_error_probe(solver, std::span<const S>(q), std::span<const S>(s));
  }
  if (spec.kind != Case2DKind::MmsEuler) throw ConfigError("truncation probe needs a steady manufactured case");
  EulerSystem sys;
  sys.flux = spec.disc.flux;
  sys.entropy_fix = spec.disc.entropy_fix;
  EdgeSolver<EulerSystem> solver(mesh, metrics, sys, spec.disc);
  const MmsEuler mms{spec.C, sys.gas};
  std::vector<Vec4> q(nn), s(nn);
  for (int i = 0; i < nn; ++i) {
    q[i] = to_conservative(mms.exact(mesh.node(i)), sys.gas);
    s[i] = mms.source(mesh.node(i));
  }
  return truncation_error_probe(solver, std::span<const Vec4>(q), std::span<const Vec4>(s));
}

}  // namespace umuscl
