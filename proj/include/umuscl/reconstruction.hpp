#pragma once

#include <functional>

#include "umuscl/lsq.hpp"
#include "umuscl/mesh.hpp"

namespace umuscl {

struct ReconConfig {
  double kappa = 0.5;
  double theta = 1.0 / 3.0;
  double yh_kappa3 = 0.0;  // 1D Yang-Harris only
};

template <class T>
struct FacePair {
  T left;
  T right;
};

// dj = grad_j . (x_k - x_j), dk = grad_k . (x_k - x_j). Works for scalars and Eigen vectors.
template <class T>
FacePair<T> umuscl_pair(const T& uj, const T& uk, const T& dj, const T& dk, double kappa) {
  const T jump = uk - uj;
  return {T(uj + 0.5 * kappa * jump + 0.5 * (1.0 - kappa) * dj),
          T(uk - 0.5 * kappa * jump - 0.5 * (1.0 - kappa) * dk)};
}

inline FacePair<double> umuscl_pair(double uj, double uk, Vec2 grad_j, Vec2 grad_k, Point xj, Point xk,
                                    double kappa) {
  const Vec2 dx = xk - xj;
  return umuscl_pair(uj, uk, dot(grad_j, dx), dot(grad_k, dx), kappa);
}

// Gradient-based Delta form: D+ = u_k - u_j, D- = 2 dj - D+ (mirrored for the right state).
template <class T>
FacePair<T> umuscl_pair_gradient_delta_form(const T& uj, const T& uk, const T& dj, const T& dk, double kappa) {
  const T dp = uk - uj;
  const T dm_j = 2.0 * dj - dp;
  const T dm_k = 2.0 * dk - dp;
  return {T(uj + 0.25 * ((1.0 - kappa) * dm_j + (1.0 + kappa) * dp)),
          T(uk - 0.25 * ((1.0 - kappa) * dm_k + (1.0 + kappa) * dp))};
}

// 1D three-point form: value at i+1/2 extrapolated from node i.
template <class T>
T delta_form_left(const T& u_im1, const T& u_i, const T& u_ip1, double kappa) {
  return u_i + 0.25 * ((1.0 - kappa) * (u_i - u_im1) + (1.0 + kappa) * (u_ip1 - u_i));
}

// Both states at i+1/2 on a uniform 1D grid.
template <class T>
FacePair<T> umuscl_pair_delta_form(const T& u_im1, const T& u_i, const T& u_ip1, const T& u_ip2, double kappa) {
  return {delta_form_left(u_im1, u_i, u_ip1, kappa), delta_form_left(u_ip2, u_ip1, u_i, kappa)};
}

template <class T>
T weighted_average_form(const T& uj, const T& uk, const T& dj, double kappa) {
  return kappa * 0.5 * (uj + uk) + (1.0 - kappa) * (uj + 0.5 * dj);
}

inline double weighted_average_form(double uj, double uk, Vec2 grad_j, Point xj, Point xk, double kappa) {
  return weighted_average_form(uj, uk, dot(grad_j, xk - xj), kappa);
}

// Same blend applied to nodal fluxes and their projected gradients with parameter theta.
template <class T>
FacePair<T> flux_pair_fsr(const T& fj, const T& fk, const T& dfj, const T& dfk, double theta) {
  return umuscl_pair(fj, fk, dfj, dfk, theta);
}

// Yang-Harris left value at i+1/2 from the five-point stencil centred on i.
// The curvature correction uses central gradients and their central difference
// for the second derivative; kappa3 = 0 gives the 1/32 curvature term.
template <class T>
T yang_harris_1d(const T& u_im2, const T& u_im1, const T& u_i, const T& u_ip1, const T& u_ip2, double kappa,
                 double kappa3 = 0.0) {
  const T grad_dx_i = 0.5 * (u_ip1 - u_im1);
  const T grad_dx_ip1 = 0.5 * (u_ip2 - u_i);
  const T hess_dx2 = 0.25 * (u_ip2 - 2.0 * u_i + u_im2);
  return delta_form_left(u_im1, u_i, u_ip1, kappa) + (kappa3 / 8.0) * (grad_dx_ip1 - grad_dx_i) +
         ((1.0 - kappa3) / 8.0) * hess_dx2;
}

template <class T>
T midpoint_average(const FacePair<T>& p) {
  return 0.5 * (p.left + p.right);
}

// closed form of the kappa = 1/2 average
template <class T>
T midpoint_average_formula(const T& uj, const T& uk, const T& dj, const T& dk) {
  return 0.5 * (uj + uk) - 0.125 * (dk - dj);
}

// Left value at an arbitrary face point: u_k is first shifted to the mirror
// image of x_j about x_face.
inline double cell_centered_correction(double uj, double uk, Vec2 grad_j, Vec2 grad_k, Point xj, Point xk,
                                       Point x_face, double kappa) {
  const double up = uk + dot(grad_k, 2.0 * x_face - xj - xk);
  return kappa * 0.5 * (uj + up) + (1.0 - kappa) * (uj + dot(grad_j, x_face - xj));
}

inline double cell_centered_uncorrected(double uj, double uk, Vec2 grad_j, Point xj, Point x_face,
                                        double kappa) {
  return kappa * 0.5 * (uj + uk) + (1.0 - kappa) * (uj + dot(grad_j, x_face - xj));
}

struct JumpErrorResult {
  double max_jump = 0.0;
  double max_error = 0.0;
};

// Max over all edges of |u_R - u_L| and |u_L - u_m| + |u_R - u_m| with u_m the
// exact midpoint value. Gradients from the requested LSQ fit of nodal values.
JumpErrorResult jump_and_error_probe(const Mesh& mesh, const GradientOperator& grad, double kappa,
                                     const std::function<double(Point)>& field);

}  // namespace umuscl
