#include "umuscl/mesh.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace umuscl {

std::string_view to_string(GridFamily f) {
  switch (f) {
    case GridFamily::RegularQuad: return "quad";
    case GridFamily::RightTriangle: return "tri-right";
    case GridFamily::EquilateralTriangle: return "tri-equi";
    case GridFamily::IrregularTriangle: return "tri-irregular";
  }
  return "?";
}

GridFamily parse_grid_family(std::string_view s) {
  if (s == "quad" || s == "regular-quad") return GridFamily::RegularQuad;
  if (s == "tri-right" || s == "right-triangle") return GridFamily::RightTriangle;
  if (s == "tri-equi" || s == "equilateral-tri" || s == "equilateral") return GridFamily::EquilateralTriangle;
  if (s == "tri-irregular" || s == "irregular-tri" || s == "irregular") return GridFamily::IrregularTriangle;
  throw std::invalid_argument("unknown grid family '" + std::string(s) + "'");
}

bool is_simplex(GridFamily f) { return f != GridFamily::RegularQuad; }

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double shoelace(std::span<const Point> p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point& q = p[i];
    const Point& r = p[(i + 1) % p.size()];
    a += q.x * r.y - r.x * q.y;
  }
  return 0.5 * a;
}

Point centroid(const Mesh& m, const Element& el) {
  Point c;
  for (int v : el.nodes()) c += m.node(v);
  return (1.0 / el.size) * c;
}

}  // namespace

Mesh::Mesh(GridFamily family, std::vector<Point> nodes, std::vector<Element> elements)
    : family_(family), nodes_(std::move(nodes)), elements_(std::move(elements)) {
  const int nn = num_nodes();
  std::vector<std::uint64_t> keys;
  keys.reserve(elements_.size() * 4);
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const Element& el = elements_[e];
    if (el.size != 3 && el.size != 4) throw std::invalid_argument("element " + std::to_string(e) + " has bad size");
    for (int s = 0; s < el.size; ++s) {
      int a = el.node[s], b = el.node[(s + 1) % el.size];
      if (a < 0 || a >= nn || b < 0 || b >= nn || a == b)
        throw std::invalid_argument("element " + std::to_string(e) + " references invalid nodes");
      keys.push_back(edge_key(a, b));
    }
  }
  std::sort(keys.begin(), keys.end());
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t r = i;
    while (r < keys.size() && keys[r] == keys[i]) ++r;
    edges_.push_back({static_cast<int>(keys[i] >> 32), static_cast<int>(keys[i] & 0xffffffffu)});
    edge_elements_.push_back(static_cast<int>(r - i));
    i = r;
  }

  std::vector<int> degree(nn, 0);
  for (const Edge& e : edges_) { ++degree[e.j]; ++degree[e.k]; }
  adj_offsets_.assign(nn + 1, 0);
  for (int i = 0; i < nn; ++i) adj_offsets_[i + 1] = adj_offsets_[i] + degree[i];
  adj_nodes_.resize(adj_offsets_[nn]);
  adj_edges_.resize(adj_offsets_[nn]);
  std::vector<int> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges_[e];
    adj_nodes_[fill[ed.j]] = ed.k; adj_edges_[fill[ed.j]++] = e;
    adj_nodes_[fill[ed.k]] = ed.j; adj_edges_[fill[ed.k]++] = e;
  }

  rings_.assign(nn, -1);
  std::deque<int> queue;
  for (int e = 0; e < num_edges(); ++e) {
    if (edge_elements_[e] != 1) continue;
    for (int v : {edges_[e].j, edges_[e].k}) {
      if (rings_[v] != 0) { rings_[v] = 0; queue.push_back(v); }
    }
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (rings_[v] >= 3) continue;
    for (int w : neighbors(v)) {
      if (rings_[w] < 0) { rings_[w] = rings_[v] + 1; queue.push_back(w); }
    }
  }
  for (int& r : rings_) if (r < 0 || r > 3) r = 3;
}

int Mesh::find_edge(int a, int b) const {
  auto nb = neighbors(a);
  for (std::size_t i = 0; i < nb.size(); ++i)
    if (nb[i] == b) return incident_edges(a)[i];
  return -1;
}

double Mesh::spacing() const {
  double area = 0.0;
  std::vector<Point> p;
  for (const Element& el : elements_) {
    p.clear();
    for (int v : el.nodes()) p.push_back(nodes_[v]);
    area += std::abs(shoelace(p));
  }
  return std::sqrt(area / num_nodes());
}

Mesh generate_grid(GridFamily family, int nx, int ny, const Rectangle& domain,
                   std::optional<std::uint64_t> perturb_seed) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs at least 2 nodes per direction");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) throw std::invalid_argument("domain has zero area");
  if (static_cast<long long>(nx) * ny > INT_MAX / 4) throw std::overflow_error("node count overflows index type");

  auto id = [nx](int i, int j) { return j * nx + i; };
  std::vector<Point> nodes(static_cast<std::size_t>(nx) * ny);
  std::vector<Element> elements;
  const bool equi = family == GridFamily::EquilateralTriangle;
  const double hx = equi ? domain.width() / (nx - 0.5) : domain.width() / (nx - 1);
  // equilateral rows are spaced h*sqrt(3)/2 from y_min, so y_max is not honoured
  const double hy = equi ? hx * std::sqrt(3.0) / 2.0 : domain.height() / (ny - 1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double shift = (equi && (j % 2 == 1)) ? 0.5 : 0.0;
      nodes[id(i, j)] = {domain.x_min + (i + shift) * hx, domain.y_min + j * hy};
    }
  if (!equi) {
    // keep the far boundary exactly on the domain edge
    for (int j = 0; j < ny; ++j) nodes[id(nx - 1, j)].x = domain.x_max;
    for (int i = 0; i < nx; ++i) nodes[id(i, ny - 1)].y = domain.y_max;
  }

  auto tri = [](int a, int b, int c) { Element e; e.node = {a, b, c, -1}; e.size = 3; return e; };
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      switch (family) {
        case GridFamily::RegularQuad: {
          Element e;
          e.node = {id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)};
          e.size = 4;
          elements.push_back(e);
          break;
        }
        case GridFamily::RightTriangle:
        case GridFamily::IrregularTriangle:
          elements.push_back(tri(id(i, j), id(i + 1, j), id(i, j + 1)));
          elements.push_back(tri(id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)));
          break;
        case GridFamily::EquilateralTriangle:
          if (j % 2 == 0) {
            elements.push_back(tri(id(i, j), id(i + 1, j), id(i, j + 1)));
            elements.push_back(tri(id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)));
          } else {
            elements.push_back(tri(id(i, j), id(i + 1, j + 1), id(i, j + 1)));
            elements.push_back(tri(id(i, j), id(i + 1, j), id(i + 1, j + 1)));
          }
          break;
      }
    }

  if (family == GridFamily::IrregularTriangle) {
    std::mt19937_64 rng(perturb_seed.value_or(1));
    // explicit mapping to [0,1): std::uniform_real_distribution is not portable bit-for-bit
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int j = 1; j + 1 < ny; ++j)
      for (int i = 1; i + 1 < nx; ++i) {
        double dx = (2.0 * uniform() - 1.0) * 0.25 * hx;
        double dy = (2.0 * uniform() - 1.0) * 0.25 * hy;
        nodes[id(i, j)] += Vec2{dx, dy};
      }
  }
  return Mesh(family, std::move(nodes), std::move(elements));
}

DualMetrics compute_dual_metrics(const Mesh& mesh) {
  DualMetrics m;
  m.normal.assign(mesh.num_edges(), Vec2{});
  m.volume.assign(mesh.num_nodes(), 0.0);
  m.boundary_normal.assign(mesh.num_nodes(), Vec2{});

  std::vector<Point> poly(4);
  const double tiny = 1e-14 * std::pow(mesh.spacing(), 2);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements()[e];
    std::vector<Point> corners;
    for (int v : el.nodes()) corners.push_back(mesh.node(v));
    if (std::abs(shoelace(corners)) <= tiny)
      throw std::runtime_error("degenerate element " + std::to_string(e));
    const Point c = centroid(mesh, el);
    const int n = el.size;
    for (int s = 0; s < n; ++s) {
      const int a = el.node[s], b = el.node[(s + 1) % n];
      const Point& xa = mesh.node(a);
      const Point& xb = mesh.node(b);
      const Point mid = 0.5 * (xa + xb);
      const Vec2 d = c - mid;
      Vec2 nrm{d.y, -d.x};
      if (dot(nrm, xb - xa) < 0.0) nrm = -nrm;
      const int ed = mesh.find_edge(a, b);
      m.normal[ed] += (mesh.edge(ed).j == a) ? nrm : -nrm;
      if (mesh.is_boundary_edge(ed)) {
        Vec2 out{(xb - xa).y, -(xb - xa).x};
        if (dot(out, mid - c) < 0.0) out = -out;
        m.boundary_normal[a] += 0.5 * out;
        m.boundary_normal[b] += 0.5 * out;
      }
    }
    for (int s = 0; s < n; ++s) {
      const int v = el.node[s];
      const Point& xv = mesh.node(v);
      poly[0] = xv;
      poly[1] = 0.5 * (xv + mesh.node(el.node[(s + 1) % n]));
      poly[2] = c;
      poly[3] = 0.5 * (xv + mesh.node(el.node[(s + n - 1) % n]));
      m.volume[v] += std::abs(shoelace(poly));
    }
  }
  m.area.resize(mesh.num_edges());
  m.partial_volume.resize(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edge(e);
    m.area[e] = m.normal[e].norm();
    m.partial_volume[e] = 0.25 * dot(mesh.node(ed.k) - mesh.node(ed.j), m.normal[e]);
  }
  return m;
}

MetricIdentityReport metric_identity_report(const Mesh& mesh, const DualMetrics& metrics) {
  MetricIdentityReport r;
  const bool simplex = is_simplex(mesh.family());
  if (simplex) r.moment_xx = r.moment_yy = r.moment_xy = 0.0;
  for (int j = 0; j < mesh.num_nodes(); ++j) {
    if (mesh.ring(j) == 0) continue;
    ++r.nodes_checked;
    Vec2 sn, mx, my, qxx, qyy, qxy;
    double vsum = 0.0, len = 0.0;
    auto nb = mesh.neighbors(j);
    auto ie = mesh.incident_edges(j);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const int e = ie[i];
      const Vec2 n = (mesh.edge(e).j == j) ? metrics.normal[e] : -metrics.normal[e];
      const Vec2 d = mesh.node(nb[i]) - mesh.node(j);
      sn += n;
      mx += 0.5 * d.x * n;
      my += 0.5 * d.y * n;
      qxx += 0.5 * d.x * d.x * n;
      qyy += 0.5 * d.y * d.y * n;
      qxy += 0.5 * d.x * d.y * n;
      vsum += metrics.partial_volume[e];
      len += d.norm();
    }
    len /= static_cast<double>(nb.size());
    const double V = metrics.volume[j];
    r.sum_normals = std::max(r.sum_normals, sn.norm() / len);
    r.first_moment_x = std::max(r.first_moment_x, ((1.0 / V) * mx - Vec2{1.0, 0.0}).norm());
    r.first_moment_y = std::max(r.first_moment_y, ((1.0 / V) * my - Vec2{0.0, 1.0}).norm());
    r.partial_volume_sum = std::max(r.partial_volume_sum, std::abs(vsum - V) / V);
    if (simplex) {
      const double l3 = len * len * len;
      r.moment_xx = std::max(*r.moment_xx, qxx.norm() / l3);
      r.moment_yy = std::max(*r.moment_yy, qyy.norm() / l3);
      r.moment_xy = std::max(*r.moment_xy, qxy.norm() / l3);
    }
  }
  return r;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << mesh.num_nodes() << ' ' << mesh.num_edges() << ' ' << mesh.num_elements() << ' '
     << to_string(mesh.family()) << '\n';
  for (int i = 0; i < mesh.num_nodes(); ++i)
    os << mesh.node(i).x << ' ' << mesh.node(i).y << ' ' << mesh.ring(i) << '\n';
  for (const Edge& e : mesh.edges()) os << e.j << ' ' << e.k << '\n';
  for (const Element& el : mesh.elements()) {
    os << el.size;
    for (int v : el.nodes()) os << ' ' << v;
    os << '\n';
  }
  os.precision(old);
}

Mesh read_mesh(std::istream& is) {
  int nn = 0, ne = 0, nel = 0;
  std::string fam;
  if (!(is >> nn >> ne >> nel >> fam)) throw std::runtime_error("mesh file: bad header");
  std::vector<Point> nodes(nn);
  for (auto& p : nodes) {
    int ring;
    if (!(is >> p.x >> p.y >> ring)) throw std::runtime_error("mesh file: bad node line");
  }
  for (int e = 0; e < ne; ++e) {
    int a, b;
    if (!(is >> a >> b)) throw std::runtime_error("mesh file: bad edge line");
  }
  std::vector<Element> elements(nel);
  for (auto& el : elements) {
    if (!(is >> el.size) || el.size < 3 || el.size > 4) throw std::runtime_error("mesh file: bad element line");
    for (int s = 0; s < el.size; ++s) is >> el.node[s];
  }
  if (!is) throw std::runtime_error("mesh file: truncated");
  Mesh m(parse_grid_family(fam), std::move(nodes), std::move(elements));
  if (m.num_edges() != ne) throw std::runtime_error("mesh file: edge list inconsistent with elements");
  return m;
}

}  // namespace umuscl
