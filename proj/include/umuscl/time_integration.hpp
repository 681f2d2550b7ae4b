#pragma once

#include <cstddef>
#include <vector>

namespace umuscl {

// One three-stage strong-stability-preserving Runge-Kutta step.
// rate(u, t, r) fills r = du/dt; fix(u, t) re-imposes boundary values after each stage.
template <class T, class Rate, class Fix>
void ssp_rk3_step(std::vector<T>& u, double t, double dt, Rate&& rate, Fix&& fix) {
  const std::size_t n = u.size();
  std::vector<T> u0 = u, r(n);
  rate(u, t, r);
  for (std::size_t i = 0; i < n; ++i) u[i] = u0[i] + dt * r[i];
  fix(u, t + dt);
  rate(u, t + dt, r);
  for (std::size_t i = 0; i < n; ++i) u[i] = 0.75 * u0[i] + 0.25 * (u[i] + dt * r[i]);
  fix(u, t + 0.5 * dt);
  rate(u, t + 0.5 * dt, r);
  for (std::size_t i = 0; i < n; ++i) u[i] = (1.0 / 3.0) * u0[i] + (2.0 / 3.0) * (u[i] + dt * r[i]);
  fix(u, t + dt);
}

template <class T, class Rate>
void ssp_rk3_step(std::vector<T>& u, double t, double dt, Rate&& rate) {
  ssp_rk3_step(u, t, dt, rate, [](std::vector<T>&, double) {});
}

}  // namespace umuscl
