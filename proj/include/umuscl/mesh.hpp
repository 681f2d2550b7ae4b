#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace umuscl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

using Point = Vec2;

enum class GridFamily { RegularQuad, RightTriangle, EquilateralTriangle, IrregularTriangle };

std::string_view to_string(GridFamily f);
// Accepts the CLI short names (quad, tri-right, tri-equi, tri-irregular) and
// the long names (regular-quad, right-triangle, equilateral-tri, irregular-tri).
GridFamily parse_grid_family(std::string_view name);
bool is_simplex(GridFamily f);

struct Rectangle {
  double x_min = 0.0, y_min = 0.0, x_max = 1.0, y_max = 1.0;
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

struct Edge {
  int j;
  int k;
};

struct Element {
  std::array<int, 4> node{-1, -1, -1, -1};
  int size = 0;  // 3 or 4, counter-clockwise
  std::span<const int> nodes() const { return {node.data(), static_cast<std::size_t>(size)}; }
};

class Mesh {
 public:
  Mesh() = default;
  // Derives edges, adjacency and boundary rings from the element list.
  Mesh(GridFamily family, std::vector<Point> nodes, std::vector<Element> elements);

  GridFamily family() const { return family_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Element>& elements() const { return elements_; }
  const Point& node(int i) const { return nodes_[i]; }
  const Edge& edge(int e) const { return edges_[e]; }

  // Graph distance to the nearest boundary node, capped at 3.
  int ring(int i) const { return rings_[i]; }
  const std::vector<int>& rings() const { return rings_; }
  bool is_boundary_edge(int e) const { return edge_elements_[e] == 1; }

  std::span<const int> neighbors(int i) const {
    return {adj_nodes_.data() + adj_offsets_[i], static_cast<std::size_t>(adj_offsets_[i + 1] - adj_offsets_[i])};
  }
  std::span<const int> incident_edges(int i) const {
    return {adj_edges_.data() + adj_offsets_[i], static_cast<std::size_t>(adj_offsets_[i + 1] - adj_offsets_[i])};
  }
  int find_edge(int a, int b) const;

  // sqrt(domain area / node count)
  double spacing() const;

 private:
  GridFamily family_ = GridFamily::RegularQuad;
  std::vector<Point> nodes_;
  std::vector<Edge> edges_;
  std::vector<Element> elements_;
  std::vector<int> edge_elements_;
  std::vector<int> rings_;
  std::vector<int> adj_offsets_, adj_nodes_, adj_edges_;
};

Mesh generate_grid(GridFamily family, int nx, int ny, const Rectangle& domain = {},
                   std::optional<std::uint64_t> perturb_seed = std::nullopt);

struct DualMetrics {
  std::vector<Vec2> normal;            // n_jk per edge, oriented j -> k
  std::vector<double> area;            // |n_jk|
  std::vector<double> partial_volume;  // V_jk = (1/4) (x_k - x_j) . n_jk, shared by both ends
  std::vector<double> volume;          // V_j
  std::vector<Vec2> boundary_normal;   // outward dual-face normal on the domain boundary (zero inside)
};

DualMetrics compute_dual_metrics(const Mesh& mesh);

// Residuals of the discrete metric identities at nodes with ring >= 1.
// Sums are made dimensionless with the local mean edge length l:
// |sum n| / l, first moments as-is, quadratic moments / l^3, partial volumes / V.
struct MetricIdentityReport {
  double sum_normals = 0.0;
  double first_moment_x = 0.0;
  double first_moment_y = 0.0;
  std::optional<double> moment_xx, moment_yy, moment_xy;  // simplex families only
  double partial_volume_sum = 0.0;
  int nodes_checked = 0;
};

MetricIdentityReport metric_identity_report(const Mesh& mesh, const DualMetrics& metrics);

void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);

}  // namespace umuscl
