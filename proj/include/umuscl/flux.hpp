#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <string_view>

#include "umuscl/mesh.hpp"

namespace umuscl {

// Primitive states are (rho, u, v, p); conservative states are (rho, rho u, rho v, rho E).
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;

struct GasModel {
  double gamma = 1.4;
};

class NonPhysicalState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_physical(const Vec4& w, const char* where);

Vec4 to_conservative(const Vec4& w, const GasModel& gas = {});
Vec4 to_primitive(const Vec4& u, const GasModel& gas = {});
double total_enthalpy(const Vec4& w, const GasModel& gas = {});
double sound_speed(const Vec4& w, const GasModel& gas = {});

Vec4 euler_flux(const Vec4& w, Vec2 nhat, const GasModel& gas = {});

// d f(w, n)/dw, and its product with a primitive increment dw
Mat4 flux_jacobian_primitive(const Vec4& w, Vec2 nhat, const GasModel& gas = {});
Vec4 flux_jacobian_apply(const Vec4& w, Vec2 nhat, const Vec4& dw, const GasModel& gas = {});

struct RoeAverage {
  double rho, u, v, H, c, un;
};
RoeAverage roe_average(const Vec4& wL, const Vec4& wR, Vec2 nhat, const GasModel& gas = {});

// |A_roe| (u_R - u_L). With `signed_waves` the eigenvalues keep their sign,
// giving A_roe (u_R - u_L), which must equal f_R - f_L.
Vec4 roe_dissipation(const Vec4& wL, const Vec4& wR, Vec2 nhat, const GasModel& gas = {},
                     bool entropy_fix = false, bool signed_waves = false);
double rusanov_wave_speed(const Vec4& wL, const Vec4& wR, Vec2 nhat, const GasModel& gas = {});
Vec4 rusanov_dissipation(const Vec4& wL, const Vec4& wR, Vec2 nhat, const GasModel& gas = {});

Vec4 roe_flux(const Vec4& wL, const Vec4& wR, Vec2 nhat, const GasModel& gas = {}, bool entropy_fix = false);
Vec4 rusanov_flux(const Vec4& wL, const Vec4& wR, Vec2 nhat, const GasModel& gas = {});

enum class FluxKind { Roe, Rusanov, ScalarUpwind };
std::string_view to_string(FluxKind k);
FluxKind parse_flux_kind(std::string_view s);

enum class ScalarLaw { Advection, Burgers };
std::string_view to_string(ScalarLaw k);
ScalarLaw parse_scalar_law(std::string_view s);

inline double scalar_flux(double u, ScalarLaw law, double a = 1.0) {
  return law == ScalarLaw::Advection ? a * u : 0.5 * u * u;
}
inline double scalar_wave_speed(double u, ScalarLaw law, double a = 1.0) {
  return law == ScalarLaw::Advection ? a : u;
}

// Upwind flux with |f'| at the arithmetic mean state.
inline double scalar_upwind_flux(double uL, double uR, ScalarLaw law, double a = 1.0) {
  const double s = scalar_wave_speed(0.5 * (uL + uR), law, a);
  return 0.5 * (scalar_flux(uL, law, a) + scalar_flux(uR, law, a)) - 0.5 * std::abs(s) * (uR - uL);
}

}  // namespace umuscl
