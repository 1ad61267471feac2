#include "glv/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "glv/topology.hpp"

namespace glv {

GeodesicSolver::GeodesicSolver(const SurfaceMesh& mesh, int steiner)
    : mesh_(&mesh), steiner_(std::max(0, steiner)), per_face_(3 + 3 * steiner_) {
  num_nodes_ = mesh.num_vertices() + steiner_ * mesh.num_edges();
  face_nodes_.resize(static_cast<std::size_t>(mesh.num_faces()) * per_face_);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    auto p = mesh.layout(f);
    FaceNode* out = face_nodes_.data() + static_cast<std::size_t>(f) * per_face_;
    int k = 0;
    for (int i = 0; i < 3; ++i) {
      int h = 3 * f + i;
      out[k++] = {mesh.tail(h), p[i]};
      const Eigen::Vector2d& a = p[i];
      const Eigen::Vector2d& b = p[(i + 1) % 3];
      int e = mesh.edge_of(h);
      bool forward = mesh.edge_sign(h) > 0;
      for (int s = 1; s <= steiner_; ++s) {
        // Steiner node s sits at fraction s / (steiner + 1) from the edge's first vertex.
        double t = static_cast<double>(s) / (steiner_ + 1);
        double along = forward ? t : 1.0 - t;
        out[k++] = {mesh.num_vertices() + e * steiner_ + (s - 1), (1.0 - along) * a + along * b};
      }
    }
  }
}

std::vector<int> GeodesicSolver::node_faces(int node) const {
  const auto& m = *mesh_;
  std::vector<int> faces;
  if (node < m.num_vertices()) {
    for (int h : m.outgoing(node)) faces.push_back(SurfaceMesh::face_of(h));
  } else {
    int e = (node - m.num_vertices()) / steiner_;
    int h = m.edge_halfedge(e);
    faces.push_back(SurfaceMesh::face_of(h));
    faces.push_back(SurfaceMesh::face_of(m.twin(h)));
  }
  return faces;
}

std::vector<double> GeodesicSolver::run(const SurfacePoint& source, double cutoff, const SurfacePoint* target,
                                        double* target_dist) const {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(num_nodes_, inf);
  std::vector<char> done(num_nodes_, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

  const Eigen::Vector2d src = mesh_->layout_point(source);
  for (const auto& fn : face_nodes(source.face)) {
    double d = (fn.pos - src).norm();
    if (d < dist[fn.node] && d <= cutoff) {
      dist[fn.node] = d;
      heap.emplace(d, fn.node);
    }
  }

  double best = inf;
  Eigen::Vector2d tgt;
  if (target) {
    tgt = mesh_->layout_point(*target);
    if (target->face == source.face) best = (tgt - src).norm();
  }

  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    if (target && d >= best) break;
    done[u] = 1;
    for (int f : node_faces(u)) {
      auto nodes = face_nodes(f);
      Eigen::Vector2d pu;
      for (const auto& fn : nodes)
        if (fn.node == u) {
          pu = fn.pos;
          break;
        }
      if (target && f == target->face) best = std::min(best, d + (pu - tgt).norm());
      for (const auto& fn : nodes) {
        if (done[fn.node]) continue;
        double nd = d + (fn.pos - pu).norm();
        if (nd < dist[fn.node] && nd <= cutoff) {
          dist[fn.node] = nd;
          heap.emplace(nd, fn.node);
        }
      }
    }
  }
  if (target_dist) *target_dist = best;
  return dist;
}

double GeodesicSolver::distance(const SurfacePoint& a, const SurfacePoint& b) const {
  double d = 0.0;
  run(a, std::numeric_limits<double>::infinity(), &b, &d);
  return d;
}

DistanceField GeodesicSolver::distance_field(const SurfacePoint& source, double cutoff) const {
  auto nodes = run(source, cutoff, nullptr, nullptr);
  DistanceField field;
  field.cutoff = cutoff;
  field.vertex.assign(nodes.begin(), nodes.begin() + mesh_->num_vertices());
  return field;
}

double GeodesicSolver::distance_to(const DistanceField& field, const SurfacePoint& p) const {
  // Only vertex values are retained; interpolate linearly inside the face.
  const auto& t = mesh_->face(p.face);
  return p.bary[0] * field.vertex[t[0]] + p.bary[1] * field.vertex[t[1]] + p.bary[2] * field.vertex[t[2]];
}

double GeodesicSolver::diameter() const {
  if (diameter_ < 0.0) {
    auto d0 = distance_field(mesh_->vertex_point(0));
    int far = static_cast<int>(std::max_element(d0.vertex.begin(), d0.vertex.end()) - d0.vertex.begin());
    auto d1 = distance_field(mesh_->vertex_point(far));
    diameter_ = *std::max_element(d1.vertex.begin(), d1.vertex.end());
  }
  return diameter_;
}

double GeodesicSolver::injectivity_radius() const {
  if (injectivity_ < 0.0) {
    if (mesh_->genus() == 0) {
      injectivity_ = 0.5 * diameter();
    } else {
      // Greedy homotopy systems through a handful of roots; the shortest generator through a
      // root is the shortest noncontractible loop through it.
      double best = std::numeric_limits<double>::infinity();
      const int roots = std::min(8, mesh_->num_vertices());
      for (int k = 0; k < roots; ++k) {
        int root = static_cast<int>((static_cast<long long>(k) * mesh_->num_vertices()) / roots);
        auto tc = build_tree_cotree(*mesh_, root);
        for (double len : tc.generator_lengths) best = std::min(best, len);
      }
      injectivity_ = 0.5 * best;
    }
  }
  return injectivity_;
}

GeodesicBall GeodesicSolver::ball(const SurfacePoint& center, double r) const {
  double cutoff = r + 3.0 * mesh_->max_edge_length();
  return ball(center, r, distance_field(center, cutoff));
}

GeodesicBall GeodesicSolver::ball(const SurfacePoint& center, double r, const DistanceField& field) const {
  const auto& m = *mesh_;
  if (!(r > 0.0)) throw NumericalError("geodesic ball radius must be positive");
  if (r > 0.5 * diameter()) throw NumericalError("geodesic ball radius exceeds half the surface diameter");
  if (field.cutoff < r + m.max_edge_length())
    throw NumericalError("distance field cutoff too small for the requested ball");

  GeodesicBall ball;
  ball.center = center;
  ball.radius = r;
  ball.face_fraction.assign(m.num_faces(), 0.0);
  const auto& d = field.vertex;
  auto inside = [&](int v) { return d[v] < r; };

  for (int f = 0; f < m.num_faces(); ++f) {
    const auto& t = m.face(f);
    std::array<double, 3> v{d[t[0]], d[t[1]], d[t[2]]};
    int n_in = inside(t[0]) + inside(t[1]) + inside(t[2]);
    double frac = 0.0;
    if (n_in == 3) {
      frac = 1.0;
    } else if (n_in == 1 || n_in == 2) {
      std::sort(v.begin(), v.end());
      if (n_in == 1) {
        frac = (r - v[0]) * (r - v[0]) / ((v[1] - v[0]) * (v[2] - v[0]));
      } else {
        frac = 1.0 - (v[2] - r) * (v[2] - r) / ((v[2] - v[0]) * (v[2] - v[1]));
      }
      if (!std::isfinite(frac)) throw NumericalError("distance field not resolved near the ball boundary");
    }
    ball.face_fraction[f] = frac;
    ball.area += frac * m.face_area(f);
  }

  // Boundary crossings live on edges whose endpoints straddle r. Each straddling face links two.
  std::vector<std::array<int, 2>> face_link(m.num_faces(), {-1, -1});
  int n_cross_faces = 0;
  int start_face = -1;
  for (int f = 0; f < m.num_faces(); ++f) {
    int k = 0;
    for (int i = 0; i < 3; ++i) {
      int h = 3 * f + i;
      if (inside(m.tail(h)) != inside(m.head(h))) face_link[f][k++] = h;
    }
    if (k == 2) {
      ++n_cross_faces;
      if (start_face < 0) start_face = f;
    }
  }
  if (start_face < 0) throw NumericalError("geodesic ball has no boundary at this resolution");

  auto crossing_point = [&](int h) {
    int a = m.tail(h), b = m.head(h);
    double t = (r - d[a]) / (d[b] - d[a]);
    SurfacePoint p;
    p.face = SurfaceMesh::face_of(h);
    p.bary.setZero();
    p.bary[h % 3] = 1.0 - t;
    p.bary[(h % 3 + 1) % 3] = t;
    return p;
  };

  // Walk the loop: enter a face through one crossing halfedge, leave through the other.
  int visited = 0;
  int f = start_face;
  int enter = face_link[f][0];
  const int first_enter = enter;
  do {
    int leave = face_link[f][0] == enter ? face_link[f][1] : face_link[f][0];
    SurfacePoint p = crossing_point(enter), q = crossing_point(leave);
    ball.boundary.push_back(p);
    ball.boundary_length += (m.layout_point(p) - m.layout_point(q)).norm();
    ++visited;
    int next_h = m.twin(leave);
    f = SurfaceMesh::face_of(next_h);
    enter = next_h;
    if (visited > n_cross_faces) break;
  } while (enter != first_enter);
  if (visited != n_cross_faces)
    throw NumericalError("geodesic ball boundary is not a single closed loop (radius too large)");
  return ball;
}

}  // namespace glv
