#include "umuscl/flux.hpp"

#include <cmath>
#include <sstream>

namespace umuscl {

void require_physical(const Vec4& w, const char* where) {
  if (!(w[0] > 0.0) || !(w[3] > 0.0) || !std::isfinite(w[1]) || !std::isfinite(w[2])) {
    std::ostringstream os;
    os << where << ": non-physical state (rho=" << w[0] << ", p=" << w[3] << ")";
    throw NonPhysicalState(os.str());
  }
}

Vec4 to_conservative(const Vec4& w, const GasModel& gas) {
  const double rho = w[0], u = w[1], v = w[2], p = w[3];
  return {rho, rho * u, rho * v, p / (gas.gamma - 1.0) + 0.5 * rho * (u * u + v * v)};
}

Vec4 to_primitive(const Vec4& q, const GasModel& gas) {
  const double rho = q[0];
  const double u = q[1] / rho, v = q[2] / rho;
  return {rho, u, v, (gas.gamma - 1.0) * (q[3] - 0.5 * rho * (u * u + v * v))};
}

double total_enthalpy(const Vec4& w, const GasModel& gas) {
  return gas.gamma * w[3] / ((gas.gamma - 1.0) * w[0]) + 0.5 * (w[1] * w[1] + w[2] * w[2]);
}

double sound_speed(const Vec4& w, const GasModel& gas) { return std::sqrt(gas.gamma * w[3] / w[0]); }

Vec4 euler_flux(const Vec4& w, Vec2 n, const GasModel& gas) {
  require_physical(w, "euler_flux");
  const double rho = w[0], u = w[1], v = w[2], p = w[3];
  const double un = u * n.x + v * n.y;
  const double H = total_enthalpy(w, gas);
  return {rho * un, rho * u * un + p * n.x, rho * v * un + p * n.y, rho * un * H};
}

Mat4 flux_jacobian_primitive(const Vec4& w, Vec2 n, const GasModel& gas) {
  require_physical(w, "flux_jacobian_primitive");
  const double rho = w[0], u = w[1], v = w[2];
  const double un = u * n.x + v * n.y;
  const double H = total_enthalpy(w, gas);
  const double g = gas.gamma / (gas.gamma - 1.0);
  Mat4 J;
  J << un, rho * n.x, rho * n.y, 0.0,
      un * u, rho * (un + u * n.x), rho * u * n.y, n.x,
      un * v, rho * v * n.x, rho * (un + v * n.y), n.y,
      0.5 * un * (u * u + v * v), rho * (H * n.x + un * u), rho * (H * n.y + un * v), g * un;
  return J;
}

Vec4 flux_jacobian_apply(const Vec4& w, Vec2 n, const Vec4& dw, const GasModel& gas) {
  const double rho = w[0], u = w[1], v = w[2];
  const double un = u * n.x + v * n.y;
  const double dun = dw[1] * n.x + dw[2] * n.y;
  const double H = total_enthalpy(w, gas);
  return {un * dw[0] + rho * dun,
          un * u * dw[0] + rho * (un * dw[1] + u * dun) + n.x * dw[3],
          un * v * dw[0] + rho * (un * dw[2] + v * dun) + n.y * dw[3],
          0.5 * un * (u * u + v * v) * dw[0] + rho * (H * dun + un * (u * dw[1] + v * dw[2])) +
              gas.gamma / (gas.gamma - 1.0) * un * dw[3]};
}

RoeAverage roe_average(const Vec4& wL, const Vec4& wR, Vec2 n, const GasModel& gas) {
  require_physical(wL, "roe_average (left)");
  require_physical(wR, "roe_average (right)");
  const double sL = std::sqrt(wL[0]), sR = std::sqrt(wR[0]);
  const double inv = 1.0 / (sL + sR);
  RoeAverage r;
  r.rho = sL * sR;
  r.u = (sL * wL[1] + sR * wR[1]) * inv;
  r.v = (sL * wL[2] + sR * wR[2]) * inv;
  r.H = (sL * total_enthalpy(wL, gas) + sR * total_enthalpy(wR, gas)) * inv;
  const double c2 = (gas.gamma - 1.0) * (r.H - 0.5 * (r.u * r.u + r.v * r.v));
  if (!(c2 > 0.0)) throw NonPhysicalState("roe_average: vacuum (non-positive averaged sound speed)");
  r.c = std::sqrt(c2);
  r.un = r.u * n.x + r.v * n.y;
  return r;
}

Vec4 roe_dissipation(const Vec4& wL, const Vec4& wR, Vec2 n, const GasModel& gas, bool entropy_fix,
                     bool signed_waves) {
  const RoeAverage a = roe_average(wL, wR, n, gas);
  double l1 = a.un - a.c, l2 = a.un, l4 = a.un + a.c;
  auto mag = [&](double l) {
    if (signed_waves) return l;
    double m = std::abs(l);
    if (entropy_fix) {
      const double delta = 0.2 * a.c;
      if (m < delta) m = 0.5 * (m * m / delta + delta);
    }
    return m;
  };
  l1 = mag(l1);
  l2 = mag(l2);
  l4 = mag(l4);

  const double drho = wR[0] - wL[0], du = wR[1] - wL[1], dv = wR[2] - wL[2], dp = wR[3] - wL[3];
  const double dun = du * n.x + dv * n.y;
  const double c2 = a.c * a.c;
  const double s1 = (dp - a.rho * a.c * dun) / (2.0 * c2);
  const double s2 = drho - dp / c2;
  const double s4 = (dp + a.rho * a.c * dun) / (2.0 * c2);
  const double q2 = a.u * a.u + a.v * a.v;

  const Vec4 r1{1.0, a.u - a.c * n.x, a.v - a.c * n.y, a.H - a.un * a.c};
  const Vec4 r2{1.0, a.u, a.v, 0.5 * q2};
  const Vec4 r3{0.0, du - dun * n.x, dv - dun * n.y, a.u * du + a.v * dv - a.un * dun};
  const Vec4 r4{1.0, a.u + a.c * n.x, a.v + a.c * n.y, a.H + a.un * a.c};
  return l1 * s1 * r1 + l2 * s2 * r2 + l2 * a.rho * r3 + l4 * s4 * r4;
}

double rusanov_wave_speed(const Vec4& wL, const Vec4& wR, Vec2 n, const GasModel& gas) {
  const RoeAverage a = roe_average(wL, wR, n, gas);
  return std::abs(a.un) + a.c;
}

Vec4 rusanov_dissipation(const Vec4& wL, const Vec4& wR, Vec2 n, const GasModel& gas) {
  return rusanov_wave_speed(wL, wR, n, gas) * (to_conservative(wR, gas) - to_conservative(wL, gas));
}

Vec4 roe_flux(const Vec4& wL, const Vec4& wR, Vec2 n, const GasModel& gas, bool entropy_fix) {
  return 0.5 * (euler_flux(wL, n, gas) + euler_flux(wR, n, gas)) -
         0.5 * roe_dissipation(wL, wR, n, gas, entropy_fix);
}

Vec4 rusanov_flux(const Vec4& wL, const Vec4& wR, Vec2 n, const GasModel& gas) {
  return 0.5 * (euler_flux(wL, n, gas) + euler_flux(wR, n, gas)) - 0.5 * rusanov_dissipation(wL, wR, n, gas);
}

std::string_view to_string(FluxKind k) {
  switch (k) {
    case FluxKind::Roe: return "roe";
    case FluxKind::Rusanov: return "rusanov";
    case FluxKind::ScalarUpwind: return "scalar-upwind";
  }
  return "?";
}

FluxKind parse_flux_kind(std::string_view s) {
  if (s == "roe") return FluxKind::Roe;
  if (s == "rusanov") return FluxKind::Rusanov;
  if (s == "scalar-upwind" || s == "upwind") return FluxKind::ScalarUpwind;
  throw std::invalid_argument("unknown flux '" + std::string(s) + "'");
}

std::string_view to_string(ScalarLaw k) { return k == ScalarLaw::Advection ? "advection" : "burgers"; }

ScalarLaw parse_scalar_law(std::string_view s) {
  if (s == "advection" || s == "linear") return ScalarLaw::Advection;
  if (s == "burgers") return ScalarLaw::Burgers;
  throw std::invalid_argument("unknown scalar law '" + std::string(s) + "'");
}

}  // namespace umuscl
