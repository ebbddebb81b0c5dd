#include "schlafli/polyhedra.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <set>

namespace schlafli {

namespace {

constexpr double kCoplanarTol = 1e-10;

std::vector<int> normalize_cycle(std::vector<int> cycle) {
  const auto it = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), it, cycle.end());
  return cycle;
}

// Counter-clockwise hull (seen from +normal) of points lying in a plane,
// dropping points that are not strict corners.
std::vector<int> planar_hull(const std::vector<Vec3>& pts, const std::vector<int>& ids, const Vec3& normal) {
  Vec3 e1 = normal.unitOrthogonal();
  Vec3 e2 = normal.cross(e1);
  struct P2 {
    double x, y;
    int id;
  };
  std::vector<P2> p;
  for (int id : ids) p.push_back({pts[id].dot(e1), pts[id].dot(e2), id});
  std::sort(p.begin(), p.end(), [](const P2& a, const P2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  auto cross = [](const P2& o, const P2& a, const P2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<P2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 1e-14) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 1e-14) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  std::vector<int> out;
  for (const auto& q : h) out.push_back(q.id);
  return out;
}

Vec4 unit_tangent_towards(const MPoint& from, const MPoint& to) {
  Vec4 w = to.coords() + minkowski_dot(to.coords(), from.coords()) * from.coords();
  return w / std::sqrt(minkowski_dot(w, w));
}

}  // namespace

ConvexPolyhedron ConvexPolyhedron::hull(std::span<const MPoint> points) {
  const int n = static_cast<int>(points.size());
  if (n < 4) throw GeometryError("hull needs at least 4 points");
  std::vector<Vec3> y(n);
  for (int i = 0; i < n; ++i) y[i] = points[i].klein();

  {
    Vec3 mean = Vec3::Zero();
    for (const auto& p : y) mean += p;
    mean /= n;
    Eigen::MatrixXd centered(3, n);
    for (int i = 0; i < n; ++i) centered.col(i) = y[i] - mean;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    if (svd.singularValues()[2] <= kCoplanarTol * std::max(1.0, svd.singularValues()[0])) {
      throw GeometryError("hull input is coplanar in the Klein model");
    }
  }

  // Every supporting plane through three input points; faces are keyed by
  // the set of points lying on them, which merges coplanar candidates.
  std::map<std::vector<int>, std::pair<Vec3, double>> found;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Vec3 a = (y[j] - y[i]).cross(y[k] - y[i]);
        const double an = a.norm();
        if (an < 1e-14) continue;
        a /= an;
        const double b = a.dot(y[i]);
        bool below = true, above = true;
        std::vector<int> on;
        for (int m = 0; m < n; ++m) {
          const double s = a.dot(y[m]) - b;
          if (s > kCoplanarTol) below = false;
          if (s < -kCoplanarTol) above = false;
          if (std::abs(s) <= kCoplanarTol) on.push_back(m);
          if (!below && !above) break;
        }
        if (below == above) continue;
        if (above) {
          a = -a;
        }
        found.try_emplace(on, a, a.dot(y[i]));
      }

  ConvexPolyhedron poly;
  std::vector<std::vector<int>> cycles;
  std::vector<std::pair<Vec3, double>> planes;
  std::set<int> used;
  for (const auto& [on, plane] : found) {
    auto cycle = planar_hull(y, on, plane.first);
    if (cycle.size() < 3) continue;
    for (int id : cycle) used.insert(id);
    cycles.push_back(std::move(cycle));
    planes.push_back(plane);
  }

  std::map<int, int> index_of;
  for (int id : used) {
    index_of[id] = static_cast<int>(poly.vertices_.size());
    poly.vertices_.push_back(points[id]);
    poly.source_.push_back(id);
  }
  for (std::size_t f = 0; f < cycles.size(); ++f) {
    Face face{HPlane::from_klein(planes[f].first, planes[f].second), {}};
    for (int id : cycles[f]) face.cycle.push_back(index_of.at(id));
    poly.faces_.push_back(std::move(face));
  }

  // Directed boundary edges; each undirected edge must appear once per direction.
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t f = 0; f < poly.faces_.size(); ++f) {
    const auto& c = poly.faces_[f].cycle;
    for (std::size_t k = 0; k < c.size(); ++k) {
      directed[{c[k], c[(k + 1) % c.size()]}] = static_cast<int>(f);
    }
  }
  for (const auto& [key, f0] : directed) {
    const auto [a, b] = key;
    if (a > b) continue;
    const auto it = directed.find({b, a});
    if (it == directed.end()) throw GeometryError("degenerate hull: unmatched edge");
    Edge e;
    e.v0 = a;
    e.v1 = b;
    e.f0 = f0;
    e.f1 = it->second;
    e.length = dist(poly.vertices_[a], poly.vertices_[b]);
    const double c = minkowski_dot(poly.faces_[e.f0].plane.normal(), poly.faces_[e.f1].plane.normal());
    e.exterior_angle = std::acos(std::clamp(c, -1.0, 1.0));
    poly.edges_.push_back(e);
  }
  if (directed.size() != 2 * poly.edges_.size() || poly.euler_characteristic() != 2) {
    throw GeometryError("degenerate hull: Euler characteristic is not 2");
  }
  return poly;
}

Combinatorics ConvexPolyhedron::combinatorics() const {
  Combinatorics c;
  for (const auto& f : faces_) {
    std::vector<int> cyc;
    for (int v : f.cycle) cyc.push_back(source_[v]);
    c.faces.push_back(normalize_cycle(std::move(cyc)));
  }
  std::sort(c.faces.begin(), c.faces.end());
  return c;
}

int ConvexPolyhedron::euler_characteristic() const {
  return static_cast<int>(vertices_.size()) - static_cast<int>(edges_.size()) + static_cast<int>(faces_.size());
}

bool ConvexPolyhedron::contains(const MPoint& p, double tol) const {
  return std::all_of(faces_.begin(), faces_.end(),
                     [&](const Face& f) { return minkowski_dot(p.coords(), f.plane.normal()) <= tol; });
}

ConvexPolyhedron ConvexPolyhedron::transformed(const Isometry& g) const {
  ConvexPolyhedron out = *this;
  for (auto& v : out.vertices_) v = g.apply(v);
  for (auto& f : out.faces_) f.plane = g.apply(f.plane);
  for (auto& e : out.edges_) {
    e.length = dist(out.vertices_[e.v0], out.vertices_[e.v1]);
    const double c = minkowski_dot(out.faces_[e.f0].plane.normal(), out.faces_[e.f1].plane.normal());
    e.exterior_angle = std::acos(std::clamp(c, -1.0, 1.0));
  }
  return out;
}

double ConvexPolyhedron::bending_length() const {
  double s = 0.0;
  for (const auto& e : edges_) s += e.length * e.exterior_angle;
  return s;
}

double ConvexPolyhedron::corner_angle(int face, int k) const {
  const auto& c = faces_[face].cycle;
  const int m = static_cast<int>(c.size());
  const MPoint& v = vertices_[c[k]];
  const Vec4 a = unit_tangent_towards(v, vertices_[c[(k + m - 1) % m]]);
  const Vec4 b = unit_tangent_towards(v, vertices_[c[(k + 1) % m]]);
  const double cosv = minkowski_dot(a, b);
  const Vec4 perp = b - cosv * a;
  return std::atan2(std::sqrt(std::max(0.0, minkowski_dot(perp, perp))), cosv);
}

std::vector<double> ConvexPolyhedron::face_areas() const {
  std::vector<double> areas;
  for (int f = 0; f < static_cast<int>(faces_.size()); ++f) {
    const int m = static_cast<int>(faces_[f].cycle.size());
    double sum = 0.0;
    for (int k = 0; k < m; ++k) sum += corner_angle(f, k);
    areas.push_back((m - 2) * kPi - sum);
  }
  return areas;
}

std::vector<double> ConvexPolyhedron::normal_cone_solid_angles() const {
  std::vector<double> omega(vertices_.size(), 2.0 * kPi);
  for (int f = 0; f < static_cast<int>(faces_.size()); ++f) {
    const auto& c = faces_[f].cycle;
    for (int k = 0; k < static_cast<int>(c.size()); ++k) omega[c[k]] -= corner_angle(f, k);
  }
  return omega;
}

std::vector<Tetrahedron> ConvexPolyhedron::klein_tetrahedra() const {
  Vec3 center = Vec3::Zero();
  for (const auto& v : vertices_) center += v.klein();
  center /= static_cast<double>(vertices_.size());
  std::vector<Tetrahedron> tets;
  for (const auto& f : faces_) {
    const Vec3 a = vertices_[f.cycle[0]].klein();
    for (std::size_t k = 1; k + 1 < f.cycle.size(); ++k) {
      tets.push_back({center, a, vertices_[f.cycle[k]].klein(), vertices_[f.cycle[k + 1]].klein()});
    }
  }
  return tets;
}

// ---------------------------------------------------------------- volumes

QuadratureResult volume_with_error(const ConvexPolyhedron& p, double tol) {
  if (!(tol >= 1e-12)) throw GeometryError("volume tolerance must be >= 1e-12");
  auto density = [](const Vec3& y) {
    const double s = 1.0 - y.squaredNorm();
    return 1.0 / (s * s);
  };
  return integrate_tetrahedra(density, p.klein_tetrahedra(), tol);
}

double volume(const ConvexPolyhedron& p, double tol) { return volume_with_error(p, tol).value; }

double dual_volume(const ConvexPolyhedron& p, double tol) { return volume(p, tol) - 0.5 * p.bending_length(); }

double w_volume(const ConvexPolyhedron& p, double tol) {
  const double v = volume(p, tol);
  return 0.5 * (v + (v - 0.5 * p.bending_length()));
}

// ---------------------------------------------------------------- families

PolyhedronFamily::PolyhedronFamily(std::string name, VertexPath path, double t_min, double t_max,
                                   int validation_samples)
    : name_(std::move(name)), path_(std::move(path)), t_min_(t_min), t_max_(t_max) {
  if (!(t_min < t_max)) throw GeometryError("family domain must be a non-empty interval");
  const double mid = 0.5 * (t_min + t_max);
  const auto pts = path_(mid);
  const auto ref = ConvexPolyhedron::hull(pts);
  if (ref.vertices().size() != pts.size()) {
    throw GeometryError(fmt::format("family '{}': some points are not hull vertices", name_));
  }
  combinatorics_ = ref.combinatorics();
  for (int k = 0; k < validation_samples; ++k) {
    const double t = t_min + (t_max - t_min) * k / std::max(1, validation_samples - 1);
    at(t);
  }
}

std::vector<MPoint> PolyhedronFamily::vertices(double t) const {
  const double slack = 1e-12 * std::max(1.0, t_max_ - t_min_);
  if (t < t_min_ - slack || t > t_max_ + slack) {
    throw GeometryError(fmt::format("family '{}': t = {} outside [{}, {}]", name_, t, t_min_, t_max_));
  }
  return path_(t);
}

ConvexPolyhedron PolyhedronFamily::at(double t) const {
  const auto pts = vertices(t);
  ConvexPolyhedron p = ConvexPolyhedron::hull(pts);
  if (p.vertices().size() != pts.size() || p.combinatorics() != combinatorics_) {
    throw CombinatorialChangeError(fmt::format("family '{}': face lattice changes at t = {}", name_, t));
  }
  return p;
}

PolyhedronFamily PolyhedronFamily::from_samples(std::vector<double> times,
                                                std::vector<std::vector<MPoint>> vertices) {
  if (times.size() < 2 || times.size() != vertices.size()) {
    throw GeometryError("sampled family needs at least two samples with matching vertex lists");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw GeometryError("sample times must be strictly increasing");
    if (vertices[i].size() != vertices[0].size()) throw GeometryError("samples have different vertex counts");
  }
  std::vector<std::vector<Vec3>> klein(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (const auto& v : vertices[i]) klein[i].push_back(v.klein());

  const double t0 = times.front(), t1 = times.back();
  auto path = [times = std::move(times), klein = std::move(klein)](double t) {
    const std::size_t n = times.size();
    const std::size_t width = std::min<std::size_t>(5, n);
    // Window of `width` samples nearest to t.
    std::size_t hi = static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin());
    std::size_t lo = hi >= width / 2 ? hi - width / 2 : 0;
    lo = std::min(lo, n - width);
    std::vector<MPoint> out;
    for (std::size_t v = 0; v < klein[0].size(); ++v) {
      Vec3 y = Vec3::Zero();
      for (std::size_t i = lo; i < lo + width; ++i) {
        double w = 1.0;
        for (std::size_t j = lo; j < lo + width; ++j)
          if (j != i) w *= (t - times[j]) / (times[i] - times[j]);
        y += w * klein[i][v];
      }
      out.push_back(MPoint::from_klein(y));
    }
    return out;
  };
  return PolyhedronFamily("samples", path, t0, t1);
}

double central_difference(const std::function<double(double)>& f, double t, double h, int order) {
  if (order == 2) return (f(t + h) - f(t - h)) / (2.0 * h);
  if (order == 4) return (-f(t + 2 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2 * h)) / (12.0 * h);
  throw GeometryError("finite-difference order must be 2 or 4");
}

std::vector<EdgeVariation> edge_data_derivative(const PolyhedronFamily& family, double t, double h, int order) {
  if (!(h > 0.0)) throw GeometryError("finite-difference step must be positive");
  const int reach = order == 4 ? 2 : 1;
  std::map<int, ConvexPolyhedron> stencil;
  for (int k = -reach; k <= reach; ++k) {
    try {
      stencil.emplace(k, family.at(t + k * h));
    } catch (const CombinatorialChangeError& e) {
      throw CombinatorialChangeError(
          fmt::format("non-differentiable family point t = {} (h = {}): {}", t, h, e.what()));
    }
  }
  // Edges keyed by family vertex indices; the lattice is fixed so every
  // stencil member has the same keys.
  auto edge_map = [](const ConvexPolyhedron& p) {
    std::map<std::pair<int, int>, const Edge*> m;
    for (const auto& e : p.edges()) {
      int a = p.source_indices()[e.v0], b = p.source_indices()[e.v1];
      if (a > b) std::swap(a, b);
      m[{a, b}] = &e;
    }
    return m;
  };
  std::map<int, std::map<std::pair<int, int>, const Edge*>> maps;
  for (const auto& [k, p] : stencil) maps[k] = edge_map(p);

  std::vector<EdgeVariation> out;
  for (const auto& [key, e] : maps[0]) {
    EdgeVariation ev;
    ev.v0 = key.first;
    ev.v1 = key.second;
    ev.length = e->length;
    ev.exterior_angle = e->exterior_angle;
    auto len = [&](int k) { return maps[k].at(key)->length; };
    auto ang = [&](int k) { return maps[k].at(key)->exterior_angle; };
    if (order == 2) {
      ev.d_length = (len(1) - len(-1)) / (2.0 * h);
      ev.d_angle = (ang(1) - ang(-1)) / (2.0 * h);
    } else {
      ev.d_length = (-len(2) + 8.0 * len(1) - 8.0 * len(-1) + len(-2)) / (12.0 * h);
      ev.d_angle = (-ang(2) + 8.0 * ang(1) - 8.0 * ang(-1) + ang(-2)) / (12.0 * h);
    }
    out.push_back(ev);
  }
  return out;
}

}  // namespace schlafli
