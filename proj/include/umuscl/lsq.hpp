#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "umuscl/mesh.hpp"

namespace umuscl {

enum class LsqKind { Linear, Quadratic };

std::string_view to_string(LsqKind k);
LsqKind parse_lsq_kind(std::string_view s);

struct Stencil {
  int center = -1;
  std::vector<int> neighbors;
};

// linear: edge neighbours; quadratic: neighbours and their neighbours
Stencil make_stencil(const Mesh& mesh, int node, LsqKind kind);

// Coefficients of one node's fit. Term order: g_x, g_y, then for the
// quadratic fit u_xx, u_xy, u_yy. Each derivative is sum_k c[k] (u_k - u_j).
struct NodeFit {
  int center = -1;
  std::vector<int> neighbors;
  std::vector<std::array<double, 5>> coeff;
  int terms = 2;
};

NodeFit build_linear(const Mesh& mesh, int node);
NodeFit build_quadratic(const Mesh& mesh, int node);

// Mesh-wide operator in compressed-row form.
class GradientOperator {
 public:
  GradientOperator() = default;
  GradientOperator(const Mesh& mesh, LsqKind kind);

  LsqKind kind() const { return kind_; }
  int num_nodes() const { return static_cast<int>(offsets_.size()) - 1; }
  int terms() const { return kind_ == LsqKind::Linear ? 2 : 5; }

  std::span<const int> neighbors(int j) const {
    return {nbr_.data() + offsets_[j], static_cast<std::size_t>(offsets_[j + 1] - offsets_[j])};
  }
  // coefficient of term t for the i-th neighbour of node j
  double coeff(int j, int i, int t) const { return coef_[(offsets_[j] + i) * stride_ + t]; }

  // T needs T+T, double*T and T-T (double, Eigen vectors).
  template <class T>
  void derivatives(int j, std::span<const T> u, T* out) const {
    const int nt = terms();
    for (int t = 0; t < nt; ++t) out[t] = u[j] * 0.0;
    const double* c = coef_.data() + static_cast<std::size_t>(offsets_[j]) * stride_;
    for (int p = offsets_[j]; p < offsets_[j + 1]; ++p, c += stride_) {
      const T d = u[nbr_[p]] - u[j];
      for (int t = 0; t < nt; ++t) out[t] += c[t] * d;
    }
  }

  // Gradient only (first two terms) for every node.
  template <class T>
  void gradients(std::span<const T> u, std::span<T> gx, std::span<T> gy) const {
    const int n = num_nodes();
    for (int j = 0; j < n; ++j) {
      T gxj = u[j] * 0.0, gyj = u[j] * 0.0;
      const double* c = coef_.data() + static_cast<std::size_t>(offsets_[j]) * stride_;
      for (int p = offsets_[j]; p < offsets_[j + 1]; ++p, c += stride_) {
        const T d = u[nbr_[p]] - u[j];
        gxj += c[0] * d;
        gyj += c[1] * d;
      }
      gx[j] = gxj;
      gy[j] = gyj;
    }
  }

 private:
  LsqKind kind_ = LsqKind::Linear;
  int stride_ = 2;
  std::vector<int> offsets_{0};
  std::vector<int> nbr_;
  std::vector<double> coef_;
};

}  // namespace umuscl
