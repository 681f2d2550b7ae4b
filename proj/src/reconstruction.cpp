#include "umuscl/reconstruction.hpp"

#include <algorithm>
#include <cmath>

namespace umuscl {

JumpErrorResult jump_and_error_probe(const Mesh& mesh, const GradientOperator& grad, double kappa,
                                     const std::function<double(Point)>& field) {
  const int n = mesh.num_nodes();
  std::vector<double> u(n), gx(n), gy(n);
  for (int j = 0; j < n; ++j) u[j] = field(mesh.node(j));
  grad.gradients<double>(u, gx, gy);

  JumpErrorResult r;
  for (const Edge& e : mesh.edges()) {
    const Point& xj = mesh.node(e.j);
    const Point& xk = mesh.node(e.k);
    const auto p = umuscl_pair(u[e.j], u[e.k], Vec2{gx[e.j], gy[e.j]}, Vec2{gx[e.k], gy[e.k]}, xj, xk, kappa);
    const double um = field(0.5 * (xj + xk));
    r.max_jump = std::max(r.max_jump, std::abs(p.right - p.left));
    r.max_error = std::max(r.max_error, std::abs(p.left - um) + std::abs(p.right - um));
  }
  return r;
}

}  // namespace umuscl
