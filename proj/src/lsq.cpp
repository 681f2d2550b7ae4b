#include "umuscl/lsq.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <string>

namespace umuscl {

std::string_view to_string(LsqKind k) { return k == LsqKind::Linear ? "linear" : "quadratic"; }

LsqKind parse_lsq_kind(std::string_view s) {
  if (s == "linear") return LsqKind::Linear;
  if (s == "quadratic") return LsqKind::Quadratic;
  throw std::invalid_argument("unknown lsq kind '" + std::string(s) + "'");
}

Stencil make_stencil(const Mesh& mesh, int node, LsqKind kind) {
  Stencil s;
  s.center = node;
  auto ring1 = mesh.neighbors(node);
  s.neighbors.assign(ring1.begin(), ring1.end());
  if (kind == LsqKind::Quadratic) {
    for (int k : ring1)
      for (int m : mesh.neighbors(k))
        if (m != node) s.neighbors.push_back(m);
    std::sort(s.neighbors.begin(), s.neighbors.end());
    s.neighbors.erase(std::unique(s.neighbors.begin(), s.neighbors.end()), s.neighbors.end());
  }
  return s;
}

namespace {

NodeFit fit(const Mesh& mesh, int node, LsqKind kind) {
  const Stencil st = make_stencil(mesh, node, kind);
  const int p = kind == LsqKind::Linear ? 2 : 5;
  const int m = static_cast<int>(st.neighbors.size());
  if (m < p)
    throw std::runtime_error("lsq: node " + std::to_string(node) + " has too few neighbours for a " +
                             std::string(to_string(kind)) + " fit");
  const Point& xj = mesh.node(node);
  double L = 0.0;
  for (int k : st.neighbors) L = std::max(L, (mesh.node(k) - xj).norm());

  // columns scaled by L so the factorization sees O(1) entries
  Eigen::MatrixXd A(m, p);
  for (int r = 0; r < m; ++r) {
    const Vec2 d = (1.0 / L) * (mesh.node(st.neighbors[r]) - xj);
    A(r, 0) = d.x;
    A(r, 1) = d.y;
    if (p == 5) {
      A(r, 2) = 0.5 * d.x * d.x;
      A(r, 3) = d.x * d.y;
      A(r, 4) = 0.5 * d.y * d.y;
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < p)
    throw std::runtime_error("lsq: rank-deficient " + std::string(to_string(kind)) + " fit at node " +
                             std::to_string(node));
  const Eigen::MatrixXd pinv = qr.solve(Eigen::MatrixXd::Identity(m, m));  // p x m

  NodeFit f;
  f.center = node;
  f.neighbors = st.neighbors;
  f.terms = p;
  f.coeff.assign(m, {0, 0, 0, 0, 0});
  const double scale[5] = {1.0 / L, 1.0 / L, 1.0 / (L * L), 1.0 / (L * L), 1.0 / (L * L)};
  for (int r = 0; r < m; ++r)
    for (int t = 0; t < p; ++t) f.coeff[r][t] = pinv(t, r) * scale[t];
  return f;
}

}  // namespace

NodeFit build_linear(const Mesh& mesh, int node) { return fit(mesh, node, LsqKind::Linear); }
NodeFit build_quadratic(const Mesh& mesh, int node) { return fit(mesh, node, LsqKind::Quadratic); }

GradientOperator::GradientOperator(const Mesh& mesh, LsqKind kind)
    : kind_(kind), stride_(kind == LsqKind::Linear ? 2 : 5) {
  offsets_.assign(1, 0);
  for (int j = 0; j < mesh.num_nodes(); ++j) {
    const NodeFit f = fit(mesh, j, kind);
    for (std::size_t r = 0; r < f.neighbors.size(); ++r) {
      nbr_.push_back(f.neighbors[r]);
      for (int t = 0; t < stride_; ++t) coef_.push_back(f.coeff[r][t]);
    }
    offsets_.push_back(static_cast<int>(nbr_.size()));
  }
}

}  // namespace umuscl
