#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "amgtune/rng.hpp"
#include "amgtune/sparse.hpp"

namespace amgtune {

using Vec3 = std::array<double, 3>;

inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

enum class MeshFamily { Tri, Quad, Hex, Voro, Cart3d };

inline std::string mesh_family_name(MeshFamily f) {
    switch (f) {
        case MeshFamily::Tri: return "tri";
        case MeshFamily::Quad: return "quad";
        case MeshFamily::Hex: return "hex";
        case MeshFamily::Voro: return "voro";
        case MeshFamily::Cart3d: return "cart3d";
    }
    throw std::invalid_argument("unknown mesh family");
}

inline MeshFamily mesh_family_from_name(const std::string& s) {
    for (MeshFamily f :
         {MeshFamily::Tri, MeshFamily::Quad, MeshFamily::Hex, MeshFamily::Voro, MeshFamily::Cart3d})
        if (mesh_family_name(f) == s) return f;
    throw std::invalid_argument("unknown mesh family: " + s);
}

/// Polytopal mesh of the unit square (2D polygons, counter-clockwise vertex
/// loops) or the unit cube (axis-aligned boxes with 8 corners). Faces are
/// derived from the cells; every interior face has exactly two incident cells
/// and carries the outward normal of its left cell.
struct PolyMesh {
    int dim = 2;
    std::vector<Vec3> vertices;
    std::vector<std::vector<index_t>> cells;

    struct Face {
        std::vector<index_t> verts;
        index_t left = -1;
        index_t right = -1;  // -1 for boundary faces
        Vec3 normal{0, 0, 0}; // outward from the left cell, unit length
        Vec3 centroid{0, 0, 0};
        double measure = 0.0; // length in 2D, area in 3D
        bool boundary() const { return right < 0; }
    };
    std::vector<Face> faces;

    std::vector<double> cell_measure;   // area / volume
    std::vector<double> cell_diameter;
    std::vector<Vec3> cell_centroid;

    index_t n_cells() const { return static_cast<index_t>(cells.size()); }
    index_t n_vertices() const { return static_cast<index_t>(vertices.size()); }
};

namespace meshdetail {

inline double polygon_area(const std::vector<Vec3>& pts) {
    double a = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Vec3& p = pts[k];
        const Vec3& q = pts[(k + 1) % pts.size()];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * a;
}

inline Vec3 polygon_centroid(const std::vector<Vec3>& pts, double area) {
    Vec3 c{0, 0, 0};
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Vec3& p = pts[k];
        const Vec3& q = pts[(k + 1) % pts.size()];
        double w = p[0] * q[1] - q[0] * p[1];
        c[0] += (p[0] + q[0]) * w;
        c[1] += (p[1] + q[1]) * w;
    }
    return {c[0] / (6.0 * area), c[1] / (6.0 * area), 0.0};
}

/// Sutherland-Hodgman clip of a convex/star polygon against n.x <= c.
inline std::vector<Vec3> clip_halfplane(const std::vector<Vec3>& poly, const Vec3& n, double c) {
    std::vector<Vec3> out;
    const std::size_t m = poly.size();
    for (std::size_t k = 0; k < m; ++k) {
        const Vec3& p = poly[k];
        const Vec3& q = poly[(k + 1) % m];
        double dp = dot3(n, p) - c;
        double dq = dot3(n, q) - c;
        if (dp <= 0.0) {
            out.push_back(p);
            if (dq > 0.0) out.push_back(p + (dp / (dp - dq)) * (q - p));
        } else if (dq <= 0.0) {
            out.push_back(p + (dp / (dp - dq)) * (q - p));
        }
    }
    return out;
}

inline std::vector<Vec3> clip_to_unit_square(std::vector<Vec3> poly) {
    poly = clip_halfplane(poly, {-1, 0, 0}, 0.0);
    poly = clip_halfplane(poly, {1, 0, 0}, 1.0);
    poly = clip_halfplane(poly, {0, -1, 0}, 0.0);
    poly = clip_halfplane(poly, {0, 1, 0}, 1.0);
    return poly;
}

/// Registers polygon cells into a mesh, merging vertices that coincide within
/// the snap tolerance so that neighbouring cells share vertex ids exactly.
class MeshBuilder {
public:
    explicit MeshBuilder(double snap = 1e-9) : snap_(snap) {}

    void add_polygon(const std::vector<Vec3>& pts) {
        std::vector<index_t> cell;
        for (const Vec3& p : pts) {
            index_t id = vertex_id(p);
            if (cell.empty() || cell.back() != id) cell.push_back(id);
        }
        while (cell.size() > 2 && cell.front() == cell.back()) cell.pop_back();
        if (cell.size() < 3) return;
        std::vector<Vec3> snapped;
        for (index_t id : cell) snapped.push_back(mesh_.vertices[id]);
        if (std::abs(polygon_area(snapped)) < 1e-14) return;
        mesh_.cells.push_back(std::move(cell));
    }

    PolyMesh take() {
        mesh_.dim = 2;
        // drop vertices that belong only to discarded degenerate slivers
        std::vector<index_t> remap(mesh_.vertices.size(), -1);
        std::vector<Vec3> kept;
        for (auto& cell : mesh_.cells)
            for (index_t& v : cell) {
                if (remap[v] < 0) {
                    remap[v] = static_cast<index_t>(kept.size());
                    kept.push_back(mesh_.vertices[v]);
                }
                v = remap[v];
            }
        mesh_.vertices = std::move(kept);
        return std::move(mesh_);
    }

private:
    index_t vertex_id(const Vec3& p) {
        auto key = std::array<long long, 2>{box(p[0]), box(p[1])};
        // probe the 3x3 neighbourhood of snap boxes
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = lookup_.find({key[0] + dx, key[1] + dy});
                if (it == lookup_.end()) continue;
                for (index_t id : it->second)
                    if (norm3(mesh_.vertices[id] - p) <= snap_) return id;
            }
        index_t id = static_cast<index_t>(mesh_.vertices.size());
        mesh_.vertices.push_back({p[0], p[1], 0.0});
        lookup_[key].push_back(id);
        return id;
    }

    long long box(double x) const { return static_cast<long long>(std::floor(x / (4.0 * snap_))); }

    double snap_;
    PolyMesh mesh_;
    std::map<std::array<long long, 2>, std::vector<index_t>> lookup_;
};

inline void finalize_2d(PolyMesh& m) {
    const index_t nc = m.n_cells();
    m.cell_measure.resize(nc);
    m.cell_diameter.resize(nc);
    m.cell_centroid.resize(nc);
    std::vector<index_t> stamp(m.vertices.size(), -1);
    for (index_t c = 0; c < nc; ++c) {
        auto& cell = m.cells[c];
        for (index_t v : cell) {
            if (stamp[v] == c) throw std::runtime_error("cell with repeated vertex");
            stamp[v] = c;
        }
        std::vector<Vec3> pts;
        for (index_t v : cell) pts.push_back(m.vertices[v]);
        double area = polygon_area(pts);
        if (area < 0) {  // enforce counter-clockwise loops
            std::reverse(cell.begin(), cell.end());
            std::reverse(pts.begin(), pts.end());
            area = -area;
        }
        if (!(area > 1e-14)) throw std::runtime_error("zero-area cell");
        m.cell_measure[c] = area;
        m.cell_centroid[c] = polygon_centroid(pts, area);
        double diam = 0.0;
        for (std::size_t a = 0; a < pts.size(); ++a)
            for (std::size_t b = a + 1; b < pts.size(); ++b)
                diam = std::max(diam, norm3(pts[a] - pts[b]));
        m.cell_diameter[c] = diam;
    }

    std::map<std::pair<index_t, index_t>, std::vector<std::pair<index_t, std::size_t>>> edges;
    for (index_t c = 0; c < nc; ++c) {
        const auto& cell = m.cells[c];
        for (std::size_t k = 0; k < cell.size(); ++k) {
            index_t a = cell[k], b = cell[(k + 1) % cell.size()];
            edges[{std::min(a, b), std::max(a, b)}].push_back({c, k});
        }
    }
    m.faces.clear();
    for (const auto& [key, owners] : edges) {
        if (owners.size() > 2) throw std::runtime_error("non-manifold face");
        PolyMesh::Face f;
        f.left = owners[0].first;
        f.right = owners.size() == 2 ? owners[1].first : -1;
        // orient along the left cell's traversal so the outward normal is (dy, -dx)
        const auto& cell = m.cells[f.left];
        std::size_t k = owners[0].second;
        index_t a = cell[k], b = cell[(k + 1) % cell.size()];
        f.verts = {a, b};
        Vec3 d = m.vertices[b] - m.vertices[a];
        f.measure = norm3(d);
        if (!(f.measure > 0)) throw std::runtime_error("zero-length face");
        f.normal = {d[1] / f.measure, -d[0] / f.measure, 0.0};
        f.centroid = 0.5 * (m.vertices[a] + m.vertices[b]);
        m.faces.push_back(std::move(f));
    }
}

inline void finalize_cart3d(PolyMesh& m) {
    const index_t nc = m.n_cells();
    m.cell_measure.resize(nc);
    m.cell_diameter.resize(nc);
    m.cell_centroid.resize(nc);
    for (index_t c = 0; c < nc; ++c) {
        const auto& cell = m.cells[c];
        if (cell.size() != 8) throw std::runtime_error("cart3d cell must have 8 vertices");
        Vec3 lo = m.vertices[cell[0]], hi = lo;
        for (index_t v : cell)
            for (int d = 0; d < 3; ++d) {
                lo[d] = std::min(lo[d], m.vertices[v][d]);
                hi[d] = std::max(hi[d], m.vertices[v][d]);
            }
        Vec3 ext = hi - lo;
        m.cell_measure[c] = ext[0] * ext[1] * ext[2];
        if (!(m.cell_measure[c] > 0)) throw std::runtime_error("zero-volume cell");
        m.cell_centroid[c] = 0.5 * (lo + hi);
        m.cell_diameter[c] = norm3(ext);
    }
    // six axis-aligned quads per box, matched by sorted vertex ids
    static const int quads[6][4] = {{0, 2, 6, 4}, {1, 3, 7, 5}, {0, 1, 5, 4},
                                    {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 5, 7, 6}};
    static const Vec3 normals[6] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}};
    std::map<std::array<index_t, 4>, std::vector<std::pair<index_t, int>>> quadmap;
    for (index_t c = 0; c < nc; ++c) {
        for (int q = 0; q < 6; ++q) {
            std::array<index_t, 4> key;
            for (int i = 0; i < 4; ++i) key[i] = m.cells[c][quads[q][i]];
            std::sort(key.begin(), key.end());
            quadmap[key].push_back({c, q});
        }
    }
    m.faces.clear();
    for (const auto& [key, owners] : quadmap) {
        if (owners.size() > 2) throw std::runtime_error("non-manifold face");
        PolyMesh::Face f;
        f.left = owners[0].first;
        f.right = owners.size() == 2 ? owners[1].first : -1;
        int q = owners[0].second;
        for (int i = 0; i < 4; ++i) f.verts.push_back(m.cells[f.left][quads[q][i]]);
        Vec3 lo = m.vertices[f.verts[0]], hi = lo;
        for (index_t v : f.verts)
            for (int d = 0; d < 3; ++d) {
                lo[d] = std::min(lo[d], m.vertices[v][d]);
                hi[d] = std::max(hi[d], m.vertices[v][d]);
            }
        Vec3 ext = hi - lo;
        f.normal = normals[q];
        double area = 1.0;
        for (int d = 0; d < 3; ++d)
            if (ext[d] > 0) area *= ext[d];
        f.measure = area;
        f.centroid = 0.5 * (lo + hi);
        m.faces.push_back(std::move(f));
    }
}

} // namespace meshdetail

/// Validates invariants and derives faces and cell geometry. Throws on
/// repeated cell vertices, degenerate cells or non-manifold connectivity.
inline void finalize_mesh(PolyMesh& m) {
    for (const auto& cell : m.cells)
        for (index_t v : cell)
            if (v < 0 || v >= m.n_vertices()) throw std::runtime_error("cell vertex out of range");
    if (m.dim == 2)
        meshdetail::finalize_2d(m);
    else
        meshdetail::finalize_cart3d(m);
}

// --- generators ---------------------------------------------------------------

namespace meshdetail {

inline index_t grid_sides(int refinement) {
    if (refinement < 1 || refinement > 12) throw std::invalid_argument("refinement out of range");
    return static_cast<index_t>(4) << (refinement - 1);  // 4, 8, 16, ...
}

inline PolyMesh make_quad(index_t s) {
    PolyMesh m;
    m.dim = 2;
    for (index_t j = 0; j <= s; ++j)
        for (index_t i = 0; i <= s; ++i)
            m.vertices.push_back({static_cast<double>(i) / s, static_cast<double>(j) / s, 0.0});
    auto vid = [s](index_t i, index_t j) { return j * (s + 1) + i; };
    for (index_t j = 0; j < s; ++j)
        for (index_t i = 0; i < s; ++i)
            m.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    return m;
}

inline PolyMesh make_tri(index_t s) {
    PolyMesh m = make_quad(s);
    std::vector<std::vector<index_t>> tris;
    for (const auto& q : m.cells) {
        tris.push_back({q[0], q[1], q[2]});
        tris.push_back({q[0], q[2], q[3]});
    }
    m.cells = std::move(tris);
    return m;
}

inline PolyMesh make_hex(index_t target_cells) {
    // pointy-top honeycomb clipped to the unit square
    double side = std::sqrt(1.0 / (2.598076211353316 * static_cast<double>(target_cells)));
    double w = std::sqrt(3.0) * side;
    MeshBuilder builder;
    int rows = static_cast<int>(std::ceil(1.0 / (1.5 * side))) + 2;
    int cols = static_cast<int>(std::ceil(1.0 / w)) + 2;
    for (int r = -1; r <= rows; ++r) {
        double cy = r * 1.5 * side;
        double shift = (r % 2 == 0) ? 0.0 : 0.5 * w;
        for (int c = -1; c <= cols; ++c) {
            double cx = c * w + shift;
            std::vector<Vec3> hex;
            constexpr double pi = 3.14159265358979323846;
            for (int k = 0; k < 6; ++k) {
                double ang = (60.0 * k + 30.0) * pi / 180.0;
                hex.push_back({cx + side * std::cos(ang), cy + side * std::sin(ang), 0.0});
            }
            hex = clip_to_unit_square(hex);
            if (hex.size() >= 3) builder.add_polygon(hex);
        }
    }
    return builder.take();
}

inline PolyMesh make_voro(index_t s, std::uint64_t seed) {
    // clipped Voronoi diagram of a jittered s-by-s seed grid
    Rng rng(seed);
    std::vector<Vec3> seeds;
    double h = 1.0 / s;
    for (index_t j = 0; j < s; ++j)
        for (index_t i = 0; i < s; ++i)
            seeds.push_back({(i + 0.5 + 0.42 * rng.uniform(-1.0, 1.0)) * h,
                             (j + 0.5 + 0.42 * rng.uniform(-1.0, 1.0)) * h, 0.0});
    MeshBuilder builder;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        std::vector<Vec3> cell = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
        for (std::size_t j = 0; j < seeds.size() && cell.size() >= 3; ++j) {
            if (j == i) continue;
            Vec3 d = seeds[j] - seeds[i];
            double dist = norm3(d);
            if (dist > 4.0 * h) continue;  // bisector cannot cut the cell
            Vec3 n = (1.0 / dist) * d;
            double c = dot3(n, 0.5 * (seeds[i] + seeds[j]));
            cell = clip_halfplane(cell, n, c);
        }
        if (cell.size() >= 3) builder.add_polygon(cell);
    }
    return builder.take();
}

inline PolyMesh make_cart3d(index_t s) {
    PolyMesh m;
    m.dim = 3;
    auto vid = [s](index_t i, index_t j, index_t k) { return (k * (s + 1) + j) * (s + 1) + i; };
    for (index_t k = 0; k <= s; ++k)
        for (index_t j = 0; j <= s; ++j)
            for (index_t i = 0; i <= s; ++i)
                m.vertices.push_back({static_cast<double>(i) / s, static_cast<double>(j) / s,
                                      static_cast<double>(k) / s});
    for (index_t k = 0; k < s; ++k)
        for (index_t j = 0; j < s; ++j)
            for (index_t i = 0; i < s; ++i)
                m.cells.push_back({vid(i, j, k), vid(i + 1, j, k), vid(i, j + 1, k),
                                   vid(i + 1, j + 1, k), vid(i, j, k + 1), vid(i + 1, j, k + 1),
                                   vid(i, j + 1, k + 1), vid(i + 1, j + 1, k + 1)});
    return m;
}

} // namespace meshdetail

/// Built-in mesh families on the unit square/cube. Cell counts grow
/// geometrically with the refinement level (quad: (4*2^(r-1))^2 cells, tri
/// twice that, hex and voro match the quad count, cart3d: (2^r)^3 boxes).
/// The voro family is seeded; other families ignore the seed.
inline PolyMesh generate_mesh(MeshFamily family, int refinement, std::uint64_t seed = 0,
                              index_t max_cells = 1 << 20) {
    using namespace meshdetail;
    PolyMesh m;
    switch (family) {
        case MeshFamily::Quad: {
            index_t s = grid_sides(refinement);
            if (s * s > max_cells) throw std::invalid_argument("refinement overflow");
            m = make_quad(s);
            break;
        }
        case MeshFamily::Tri: {
            index_t s = grid_sides(refinement);
            if (2 * s * s > max_cells) throw std::invalid_argument("refinement overflow");
            m = make_tri(s);
            break;
        }
        case MeshFamily::Hex: {
            index_t s = grid_sides(refinement);
            if (s * s > max_cells) throw std::invalid_argument("refinement overflow");
            m = make_hex(s * s);
            break;
        }
        case MeshFamily::Voro: {
            index_t s = grid_sides(refinement);
            if (s * s > max_cells) throw std::invalid_argument("refinement overflow");
            m = make_voro(s, derive_seed(seed, "voro-mesh"));
            break;
        }
        case MeshFamily::Cart3d: {
            if (refinement < 1 || refinement > 7) throw std::invalid_argument("refinement out of range");
            index_t s = static_cast<index_t>(1) << refinement;
            if (s * s * s > max_cells) throw std::invalid_argument("refinement overflow");
            m = make_cart3d(s);
            break;
        }
    }
    finalize_mesh(m);
    return m;
}

// --- text import/export --------------------------------------------------------

/// Structured text format: header "polymesh <dim>", a vertex block, a cell
/// block of vertex index lists and an optional per-cell coefficient block.
inline void save_mesh(const PolyMesh& m, const std::string& path,
                      const std::vector<double>* cell_values = nullptr) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "polymesh " << m.dim << "\n";
    out << "vertices " << m.n_vertices() << "\n";
    char buf[128];
    for (const Vec3& v : m.vertices) {
        if (m.dim == 2)
            std::snprintf(buf, sizeof buf, "%.17g %.17g", v[0], v[1]);
        else
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", v[0], v[1], v[2]);
        out << buf << "\n";
    }
    out << "cells " << m.n_cells() << "\n";
    for (const auto& cell : m.cells) {
        out << cell.size();
        for (index_t v : cell) out << " " << v;
        out << "\n";
    }
    if (cell_values) {
        out << "coefficients " << cell_values->size() << "\n";
        for (double v : *cell_values) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << "\n";
        }
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

struct LoadedMesh {
    PolyMesh mesh;
    std::vector<double> cell_values;  // empty when the block is absent
};

inline LoadedMesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string tag;
    LoadedMesh lm;
    PolyMesh& m = lm.mesh;
    if (!(in >> tag >> m.dim) || tag != "polymesh" || (m.dim != 2 && m.dim != 3))
        throw std::runtime_error(path + ": malformed mesh header");
    long nv = 0;
    if (!(in >> tag >> nv) || tag != "vertices" || nv < 0)
        throw std::runtime_error(path + ": malformed vertex block");
    m.vertices.resize(static_cast<std::size_t>(nv), {0, 0, 0});
    for (long i = 0; i < nv; ++i) {
        if (m.dim == 2) {
            if (!(in >> m.vertices[i][0] >> m.vertices[i][1]))
                throw std::runtime_error(path + ": truncated vertex block");
        } else if (!(in >> m.vertices[i][0] >> m.vertices[i][1] >> m.vertices[i][2])) {
            throw std::runtime_error(path + ": truncated vertex block");
        }
    }
    long ncells = 0;
    if (!(in >> tag >> ncells) || tag != "cells" || ncells < 0)
        throw std::runtime_error(path + ": malformed cell block");
    m.cells.resize(static_cast<std::size_t>(ncells));
    for (long c = 0; c < ncells; ++c) {
        long k = 0;
        if (!(in >> k) || k < 3) throw std::runtime_error(path + ": malformed cell");
        m.cells[c].resize(static_cast<std::size_t>(k));
        for (long i = 0; i < k; ++i)
            if (!(in >> m.cells[c][i])) throw std::runtime_error(path + ": truncated cell block");
    }
    if (in >> tag) {
        long nvals = 0;
        if (tag != "coefficients" || !(in >> nvals) || nvals != ncells)
            throw std::runtime_error(path + ": malformed coefficient block");
        lm.cell_values.resize(static_cast<std::size_t>(nvals));
        for (long i = 0; i < nvals; ++i)
            if (!(in >> lm.cell_values[i])) throw std::runtime_error(path + ": truncated coefficients");
    }
    finalize_mesh(m);
    return lm;
}

} // namespace amgtune
