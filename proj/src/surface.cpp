#include "glv/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace glv {

double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

namespace {

std::uint64_t key(int a, int b, int n) { return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) + b; }

// Angle at the corner between sides a and b, opposite side c.
double corner_from_lengths(double a, double b, double c) {
  double cosv = (a * a + b * b - c * c) / (2.0 * a * b);
  cosv = std::clamp(cosv, -1.0, 1.0);
  return std::acos(cosv);
}

double heron(double a, double b, double c) {
  // Kahan's stable form.
  std::array<double, 3> s{a, b, c};
  std::sort(s.begin(), s.end(), std::greater<>());
  double x = s[0], y = s[1], z = s[2];
  double p = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  return 0.25 * std::sqrt(std::max(p, 0.0));
}

std::string face_str(int f, const SurfaceMesh::Face& t) {
  std::ostringstream s;
  s << "face " << f << " (" << t[0] << ", " << t[1] << ", " << t[2] << ")";
  return s.str();
}

}  // namespace

SurfaceMesh SurfaceMesh::from_positions(std::vector<Eigen::Vector3d> positions, std::vector<Face> faces,
                                        std::vector<int> anchor_targets) {
  SurfaceMesh m;
  m.num_vertices_ = static_cast<int>(positions.size());
  m.positions_ = std::move(positions);
  m.faces_ = std::move(faces);
  m.face_lengths_.resize(m.faces_.size());
  for (std::size_t f = 0; f < m.faces_.size(); ++f) {
    for (int i = 0; i < 3; ++i) {
      int a = m.faces_[f][i], b = m.faces_[f][(i + 1) % 3];
      if (a < 0 || b < 0 || a >= m.num_vertices_ || b >= m.num_vertices_)
        throw MeshError("vertex index out of range in " + face_str(static_cast<int>(f), m.faces_[f]));
      m.face_lengths_[f][i] = (m.positions_[a] - m.positions_[b]).norm();
    }
  }
  m.build(std::move(anchor_targets));
  return m;
}

SurfaceMesh SurfaceMesh::from_lengths(int num_vertices, std::vector<Face> faces,
                                      const std::vector<std::array<double, 3>>& lengths,
                                      std::vector<int> anchor_targets, double tol) {
  if (lengths.size() != faces.size()) throw MeshError("length table does not match face count");
  SurfaceMesh m;
  m.num_vertices_ = num_vertices;
  m.faces_ = std::move(faces);
  m.face_lengths_ = lengths;
  // Shared edges must agree.
  std::unordered_map<std::uint64_t, double> seen;
  for (std::size_t f = 0; f < m.faces_.size(); ++f) {
    for (int i = 0; i < 3; ++i) {
      int a = m.faces_[f][i], b = m.faces_[f][(i + 1) % 3];
      if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices)
        throw MeshError("vertex index out of range in " + face_str(static_cast<int>(f), m.faces_[f]));
      auto k = key(std::min(a, b), std::max(a, b), num_vertices);
      double l = lengths[f][i];
      auto [it, inserted] = seen.emplace(k, l);
      if (!inserted && std::abs(it->second - l) > tol) {
        std::ostringstream s;
        s << "edge (" << a << ", " << b << ") has inconsistent lengths " << it->second << " and " << l;
        throw MeshError(s.str());
      }
    }
  }
  m.build(std::move(anchor_targets));
  return m;
}

void SurfaceMesh::build(std::vector<int> anchor_targets) {
  const int nv = num_vertices_;
  const int nf = num_faces();
  if (nv == 0 || nf == 0) throw MeshError("empty mesh");

  for (int f = 0; f < nf; ++f) {
    const auto& t = faces_[f];
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw MeshError("degenerate " + face_str(f, t));
  }

  // Directed halfedges.
  std::unordered_map<std::uint64_t, int> directed;
  std::unordered_map<std::uint64_t, int> undirected_count;
  directed.reserve(3 * nf);
  for (int h = 0; h < 3 * nf; ++h) {
    int a = tail(h), b = head(h);
    auto [it, inserted] = directed.emplace(key(a, b, nv), h);
    int& c = undirected_count[key(std::min(a, b), std::max(a, b), nv)];
    ++c;
    if (c > 2) {
      std::ostringstream s;
      s << "non-manifold edge (" << a << ", " << b << ") shared by more than two faces";
      throw MeshError(s.str());
    }
    if (!inserted) {
      std::ostringstream s;
      s << "inconsistent orientation at edge (" << a << ", " << b << ") in " << face_str(h / 3, faces_[h / 3]);
      throw MeshError(s.str());
    }
  }

  twin_.assign(3 * nf, -1);
  he_edge_.assign(3 * nf, -1);
  edges_.clear();
  edge_he_.clear();
  for (int h = 0; h < 3 * nf; ++h) {
    int a = tail(h), b = head(h);
    auto it = directed.find(key(b, a, nv));
    if (it == directed.end()) {
      std::ostringstream s;
      s << "non-closed surface: boundary edge (" << a << ", " << b << ") in " << face_str(h / 3, faces_[h / 3]);
      throw MeshError(s.str());
    }
    twin_[h] = it->second;
  }
  // Edge ids in order of first appearance of the positively oriented halfedge.
  for (int h = 0; h < 3 * nf; ++h) {
    if (tail(h) < head(h)) {
      int e = static_cast<int>(edges_.size());
      edges_.push_back({tail(h), head(h)});
      edge_he_.push_back(h);
      he_edge_[h] = e;
      he_edge_[twin_[h]] = e;
    }
  }

  // Lengths, checking agreement between the two sides.
  lengths_.assign(edges_.size(), 0.0);
  for (int e = 0; e < num_edges(); ++e) {
    int h = edge_he_[e];
    lengths_[e] = face_lengths_[h / 3][h % 3];
    if (!(lengths_[e] > 0.0)) {
      std::ostringstream s;
      s << "edge (" << edges_[e][0] << ", " << edges_[e][1] << ") has non-positive length";
      throw MeshError(s.str());
    }
  }
  face_lengths_.clear();
  face_lengths_.shrink_to_fit();

  // Triangle inequalities, angles, areas.
  corner_angle_.assign(3 * nf, 0.0);
  face_area_.assign(nf, 0.0);
  for (int f = 0; f < nf; ++f) {
    double l0 = lengths_[he_edge_[3 * f]], l1 = lengths_[he_edge_[3 * f + 1]], l2 = lengths_[he_edge_[3 * f + 2]];
    if (!(l0 < l1 + l2 && l1 < l0 + l2 && l2 < l0 + l1))
      throw MeshError("triangle inequality violated in " + face_str(f, faces_[f]));
    face_area_[f] = heron(l0, l1, l2);
    if (!(face_area_[f] > 0.0)) throw MeshError("zero-area " + face_str(f, faces_[f]));
    // Corner i sits between sides l_{i} (outgoing) and l_{i-1} (incoming), opposite l_{i+1}.
    corner_angle_[3 * f + 0] = corner_from_lengths(l0, l2, l1);
    corner_angle_[3 * f + 1] = corner_from_lengths(l1, l0, l2);
    corner_angle_[3 * f + 2] = corner_from_lengths(l2, l1, l0);
  }

  // Vertex fans in counterclockwise order.
  std::vector<int> first_out(nv, -1);
  std::vector<int> corner_count(nv, 0);
  for (int h = 0; h < 3 * nf; ++h) {
    int v = tail(h);
    if (first_out[v] < 0) first_out[v] = h;
    ++corner_count[v];
  }
  out_offset_.assign(nv + 1, 0);
  for (int v = 0; v < nv; ++v) {
    if (corner_count[v] == 0) {
      std::ostringstream s;
      s << "vertex " << v << " is not referenced by any face";
      throw MeshError(s.str());
    }
    out_offset_[v + 1] = out_offset_[v] + corner_count[v];
  }
  out_.assign(3 * nf, -1);
  for (int v = 0; v < nv; ++v) {
    int start = first_out[v];
    if (!anchor_targets.empty() && anchor_targets[v] >= 0) {
      auto it = directed.find(key(v, anchor_targets[v], nv));
      if (it == directed.end()) {
        std::ostringstream s;
        s << "anchor target " << anchor_targets[v] << " is not adjacent to vertex " << v;
        throw MeshError(s.str());
      }
      start = it->second;
    }
    int h = start;
    int k = 0;
    do {
      if (k >= corner_count[v]) break;
      out_[out_offset_[v] + k++] = h;
      h = twin_[prev(h)];
    } while (h != start);
    if (k != corner_count[v] || h != start) {
      std::ostringstream s;
      s << "non-manifold vertex " << v << ": incident faces do not form a single fan";
      throw MeshError(s.str());
    }
  }

  // Connectedness.
  {
    std::vector<char> seen(nv, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int h : outgoing(v)) {
        int w = head(h);
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          q.push(w);
        }
      }
    }
    if (count != nv) throw MeshError("surface is not connected");
  }
  if ((2 - euler_characteristic()) % 2 != 0 || euler_characteristic() > 2)
    throw MeshError("Euler characteristic " + std::to_string(euler_characteristic()) +
                    " does not correspond to a closed orientable surface");

  dual_area_.assign(nv, 0.0);
  angle_sum_.assign(nv, 0.0);
  total_area_ = 0.0;
  for (int f = 0; f < nf; ++f) {
    total_area_ += face_area_[f];
    for (int i = 0; i < 3; ++i) {
      dual_area_[faces_[f][i]] += face_area_[f] / 3.0;
      angle_sum_[faces_[f][i]] += corner_angle_[3 * f + i];
    }
  }

  polygon_angle_.assign(3 * nf, 0.0);
  for (int v = 0; v < nv; ++v) {
    double scale = kTwoPi / angle_sum_[v];
    double acc = 0.0;
    for (int h : outgoing(v)) {
      polygon_angle_[h] = acc;
      acc += scale * corner_angle_[h];
    }
  }

  face_curvature_.assign(nf, 0.0);
  for (int f = 0; f < nf; ++f) {
    double s = -kPi;
    for (int i = 0; i < 3; ++i) s += corner_angle_[3 * f + i] * kTwoPi / angle_sum_[faces_[f][i]];
    face_curvature_[f] = s;
  }

  cotan_weight_.assign(edges_.size(), 0.0);
  for (int h = 0; h < 3 * nf; ++h) {
    // Opposite corner of halfedge h is the tail of prev(h).
    double theta = corner_angle_[prev(h)];
    cotan_weight_[he_edge_[h]] += 0.5 / std::tan(theta);
  }

  mean_edge_length_ = std::accumulate(lengths_.begin(), lengths_.end(), 0.0) / static_cast<double>(lengths_.size());
  max_edge_length_ = *std::max_element(lengths_.begin(), lengths_.end());
}

int SurfaceMesh::find_halfedge(int v, int w) const {
  for (int h : outgoing(v))
    if (head(h) == w) return h;
  return -1;
}

int SurfaceMesh::find_edge(int v, int w) const {
  int h = find_halfedge(v, w);
  return h < 0 ? -1 : he_edge_[h];
}

std::array<Eigen::Vector2d, 3> SurfaceMesh::layout(int f) const {
  double l0 = lengths_[he_edge_[3 * f]];
  double l2 = lengths_[he_edge_[3 * f + 2]];
  double a = corner_angle_[3 * f];
  return {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(l0, 0.0), Eigen::Vector2d(l2 * std::cos(a), l2 * std::sin(a))};
}

Eigen::Vector2d SurfaceMesh::layout_point(const SurfacePoint& p) const {
  auto q = layout(p.face);
  return p.bary[0] * q[0] + p.bary[1] * q[1] + p.bary[2] * q[2];
}

std::vector<int> SurfaceMesh::nonpositive_cotan_edges() const {
  std::vector<int> bad;
  for (int e = 0; e < num_edges(); ++e)
    if (!(cotan_weight_[e] > 0.0)) bad.push_back(e);
  return bad;
}

SurfacePoint SurfaceMesh::vertex_point(int v) const {
  int h = out_[out_offset_[v]];
  SurfacePoint p;
  p.face = h / 3;
  p.bary.setZero();
  p.bary[h % 3] = 1.0;
  return p;
}

int SurfaceMesh::nearest_vertex(const SurfacePoint& p) const {
  int i;
  p.bary.maxCoeff(&i);
  return faces_[p.face][i];
}

// ---------------------------------------------------------------------------
// I/O

namespace {

std::string next_data_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  }
  throw MeshError("unexpected end of mesh document");
}

}  // namespace

SurfaceMesh read_off(std::istream& in) {
  std::string header = next_data_line(in);
  std::istringstream hs(header);
  std::string tag;
  hs >> tag;
  if (tag.rfind("OFF", 0) != 0) throw MeshError("missing OFF header");
  int nv = 0, nf = 0, ne = 0;
  std::string rest = tag.size() > 3 ? tag.substr(3) : std::string();
  if (!(hs >> nv >> nf >> ne)) {
    std::istringstream cs(next_data_line(in));
    if (!(cs >> nv >> nf)) throw MeshError("malformed OFF counts line");
  }
  std::vector<Eigen::Vector3d> pos(nv);
  for (int i = 0; i < nv; ++i) {
    std::istringstream ls(next_data_line(in));
    if (!(ls >> pos[i][0] >> pos[i][1] >> pos[i][2])) throw MeshError("malformed OFF vertex line " + std::to_string(i));
  }
  std::vector<SurfaceMesh::Face> faces(nf);
  for (int i = 0; i < nf; ++i) {
    std::istringstream ls(next_data_line(in));
    int k = 0;
    if (!(ls >> k) || k != 3) throw MeshError("OFF face " + std::to_string(i) + " is not a triangle");
    if (!(ls >> faces[i][0] >> faces[i][1] >> faces[i][2])) throw MeshError("malformed OFF face " + std::to_string(i));
  }
  return SurfaceMesh::from_positions(std::move(pos), std::move(faces));
}

SurfaceMesh read_obj(std::istream& in) {
  std::vector<Eigen::Vector3d> pos;
  std::vector<SurfaceMesh::Face> faces;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ls >> p[0] >> p[1] >> p[2])) throw MeshError("malformed OBJ vertex: " + line);
      pos.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        int i = std::stoi(tok.substr(0, tok.find('/')));
        idx.push_back(i < 0 ? static_cast<int>(pos.size()) + i : i - 1);
      }
      if (idx.size() != 3) throw MeshError("OBJ face is not a triangle: " + line);
      faces.push_back({idx[0], idx[1], idx[2]});
    }
  }
  return SurfaceMesh::from_positions(std::move(pos), std::move(faces));
}

SurfaceMesh read_intrinsic(std::istream& in) {
  std::string header = next_data_line(in);
  if (header.find("INTRINSIC") == std::string::npos) throw MeshError("missing INTRINSIC header");
  std::istringstream cs(next_data_line(in));
  int nv = 0, nf = 0;
  if (!(cs >> nv >> nf)) throw MeshError("malformed INTRINSIC counts line");
  std::vector<SurfaceMesh::Face> faces(nf);
  std::vector<std::array<double, 3>> lengths(nf);
  for (int i = 0; i < nf; ++i) {
    std::istringstream ls(next_data_line(in));
    if (!(ls >> faces[i][0] >> faces[i][1] >> faces[i][2] >> lengths[i][0] >> lengths[i][1] >> lengths[i][2]))
      throw MeshError("malformed INTRINSIC face line " + std::to_string(i));
  }
  return SurfaceMesh::from_lengths(nv, std::move(faces), lengths);
}

SurfaceMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path);
  std::string first;
  {
    std::streampos start = in.tellg();
    std::getline(in, first);
    in.seekg(start);
  }
  if (first.find("INTRINSIC") != std::string::npos) return read_intrinsic(in);
  auto ends_with = [&](const std::string& ext) {
    return path.size() >= ext.size() && std::equal(ext.rbegin(), ext.rend(), path.rbegin(), [](char a, char b) {
             return std::tolower(static_cast<unsigned char>(a)) == b;
           });
  };
  if (ends_with(".obj")) return read_obj(in);
  if (ends_with(".off") || first.rfind("OFF", 0) == 0) return read_off(in);
  throw MeshError("unrecognized mesh format: " + path);
}

void write_intrinsic(std::ostream& out, const SurfaceMesh& mesh) {
  out.precision(17);
  out << "INTRINSIC\n" << mesh.num_vertices() << ' ' << mesh.num_faces() << '\n';
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.face(f);
    out << t[0] << ' ' << t[1] << ' ' << t[2];
    for (int i = 0; i < 3; ++i) out << ' ' << mesh.halfedge_length(3 * f + i);
    out << '\n';
  }
}

void write_off(std::ostream& out, const SurfaceMesh& mesh) {
  if (!mesh.has_positions()) throw MeshError("intrinsic mesh has no positions to write as OFF");
  out.precision(17);
  out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_faces() << " 0\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto& p = mesh.position(v);
    out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  }
  for (const auto& t : mesh.faces()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

// ---------------------------------------------------------------------------
// Generators

SurfaceMesh make_icosphere(int level) {
  if (level < 0) throw MeshError("icosphere level must be non-negative");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> pos = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                                      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : pos) p.normalize();
  std::vector<SurfaceMesh::Face> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                          {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                          {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                          {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto k = std::minmax(a, b);
      auto it = mid.find(k);
      if (it != mid.end()) return it->second;
      pos.push_back((pos[a] + pos[b]).normalized());
      int id = static_cast<int>(pos.size()) - 1;
      mid.emplace(k, id);
      return id;
    };
    std::vector<SurfaceMesh::Face> refined;
    refined.reserve(4 * faces.size());
    for (const auto& f : faces) {
      int a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
      refined.push_back({f[0], a, c});
      refined.push_back({f[1], b, a});
      refined.push_back({f[2], c, b});
      refined.push_back({a, b, c});
    }
    faces = std::move(refined);
  }
  return SurfaceMesh::from_positions(std::move(pos), std::move(faces));
}

SurfaceMesh make_flat_torus(int n, double cell) {
  if (n < 3) throw MeshError("flat torus needs at least 3 cells per side");
  auto id = [n](int i, int j) { return ((j % n + n) % n) * n + ((i % n + n) % n); };
  std::vector<SurfaceMesh::Face> faces;
  std::vector<std::array<double, 3>> lengths;
  const double diag = cell * std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      faces.push_back({v00, v10, v11});
      lengths.push_back({cell, cell, diag});
      faces.push_back({v00, v11, v01});
      lengths.push_back({diag, cell, cell});
    }
  }
  std::vector<int> anchors(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) anchors[id(i, j)] = id(i + 1, j);
  return SurfaceMesh::from_lengths(n * n, std::move(faces), lengths, std::move(anchors));
}

std::array<Eigen::VectorXd, 2> flat_torus_coordinate_forms(const SurfaceMesh& mesh, int n, double cell) {
  Eigen::VectorXd dx(mesh.num_edges()), dy(mesh.num_edges());
  auto wrap = [n](int d) {
    if (d > 1) d -= n;
    if (d < -1) d += n;
    return d;
  };
  for (int e = 0; e < mesh.num_edges(); ++e) {
    auto [a, b] = mesh.edge(e);
    dx[e] = cell * wrap(b % n - a % n);
    dy[e] = cell * wrap(b / n - a / n);
  }
  return {dx, dy};
}

SurfaceMesh make_revolution_torus(double major, double minor, int n_major, int n_minor) {
  if (n_major < 3 || n_minor < 3 || !(major > minor) || !(minor > 0.0))
    throw MeshError("invalid torus of revolution parameters");
  std::vector<Eigen::Vector3d> pos;
  pos.reserve(static_cast<std::size_t>(n_major) * n_minor);
  for (int j = 0; j < n_minor; ++j) {
    double v = kTwoPi * j / n_minor;
    for (int i = 0; i < n_major; ++i) {
      double u = kTwoPi * i / n_major;
      double rho = major + minor * std::cos(v);
      pos.emplace_back(rho * std::cos(u), rho * std::sin(u), minor * std::sin(v));
    }
  }
  auto id = [&](int i, int j) { return ((j + n_minor) % n_minor) * n_major + (i + n_major) % n_major; };
  std::vector<SurfaceMesh::Face> faces;
  for (int j = 0; j < n_minor; ++j) {
    for (int i = 0; i < n_major; ++i) {
      int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      // Split along the shorter diagonal.
      double d1 = (pos[v00] - pos[v11]).norm(), d2 = (pos[v10] - pos[v01]).norm();
      if (d1 <= d2) {
        faces.push_back({v00, v10, v11});
        faces.push_back({v00, v11, v01});
      } else {
        faces.push_back({v00, v10, v01});
        faces.push_back({v10, v11, v01});
      }
    }
  }
  return SurfaceMesh::from_positions(std::move(pos), std::move(faces));
}

SurfaceMesh make_genus2(int n) {
  if (n < 4) throw MeshError("genus-2 surface needs at least 4 cells per side");
  // Torus A uses ids [0, n^2); torus B uses [n^2, 2 n^2) with its four hole corners
  // identified with those of A. The removed cell is (0, 0) in both.
  const int nn = n * n;
  auto ida = [n](int i, int j) { return ((j % n + n) % n) * n + ((i % n + n) % n); };
  std::vector<int> remap(2 * nn);
  std::iota(remap.begin(), remap.end(), 0);
  // Hole corners of A: (0,0) (1,0) (1,1) (0,1). B is glued with reversed orientation, which we
  // realize by reflecting B (i -> -i), so B's hole corners are (0,0) (-1,0) (-1,1) (0,1).
  auto idb = [&](int i, int j) { return nn + ida(i, j); };
  remap[idb(0, 0)] = ida(0, 0);
  remap[idb(-1, 0)] = ida(1, 0);
  remap[idb(-1, 1)] = ida(1, 1);
  remap[idb(0, 1)] = ida(0, 1);
  std::vector<int> compact(2 * nn, -1);
  int next_id = 0;
  for (int v = 0; v < 2 * nn; ++v)
    if (remap[v] == v) compact[v] = next_id++;
  for (int v = 0; v < 2 * nn; ++v) compact[v] = compact[remap[v]];

  std::vector<SurfaceMesh::Face> faces;
  std::vector<std::array<double, 3>> lengths;
  const double diag = std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == 0 && j == 0) continue;
      int v00 = ida(i, j), v10 = ida(i + 1, j), v11 = ida(i + 1, j + 1), v01 = ida(i, j + 1);
      faces.push_back({compact[v00], compact[v10], compact[v11]});
      lengths.push_back({1.0, 1.0, diag});
      faces.push_back({compact[v00], compact[v11], compact[v01]});
      lengths.push_back({diag, 1.0, 1.0});
    }
  }
  // Reflected copy: cell (i, j) of B occupies x in [-i-1, -i]; reflection reverses orientation,
  // so emit the triangles with flipped winding.
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == 0 && j == 0) continue;
      int v00 = idb(-i, j), v10 = idb(-i - 1, j), v11 = idb(-i - 1, j + 1), v01 = idb(-i, j + 1);
      faces.push_back({compact[v00], compact[v11], compact[v10]});
      lengths.push_back({diag, 1.0, 1.0});
      faces.push_back({compact[v00], compact[v01], compact[v11]});
      lengths.push_back({1.0, 1.0, diag});
    }
  }
  return SurfaceMesh::from_lengths(next_id, std::move(faces), lengths);
}

}  // namespace glv
