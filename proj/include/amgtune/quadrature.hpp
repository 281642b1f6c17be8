#pragma once

#include <cmath>
#include <vector>

#include "amgtune/mesh.hpp"

namespace amgtune {

struct QuadPoint {
    Vec3 x{0, 0, 0};
    double w = 0.0;
};

namespace quaddetail {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int npts, std::vector<double>& x, std::vector<double>& w) {
    x.resize(npts);
    w.resize(npts);
    constexpr double pi = 3.14159265358979323846;
    for (int i = 0; i < npts; ++i) {
        double t = std::cos(pi * (i + 0.75) / (npts + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= npts; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = npts * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= npts; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = npts * (t * p1 - p0) / (t * t - 1.0);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

} // namespace quaddetail

/// Rule on the segment [a, b] exact for polynomials of the given degree.
inline std::vector<QuadPoint> segment_rule(const Vec3& a, const Vec3& b, int degree) {
    int npts = degree / 2 + 1;
    std::vector<double> gx, gw;
    quaddetail::gauss_legendre(npts, gx, gw);
    double len = norm3(b - a);
    std::vector<QuadPoint> q(npts);
    for (int i = 0; i < npts; ++i) {
        double t = 0.5 * (gx[i] + 1.0);
        q[i].x = a + t * (b - a);
        q[i].w = 0.5 * len * gw[i];
    }
    return q;
}

/// Rule on the triangle (a, b, c) exact for polynomials of the given degree,
/// built from a collapsed tensor product (Duffy map).
inline std::vector<QuadPoint> triangle_rule(const Vec3& a, const Vec3& b, const Vec3& c,
                                            int degree) {
    int npts = (degree + 2) / 2 + 1;
    std::vector<double> gx, gw;
    quaddetail::gauss_legendre(npts, gx, gw);
    double area2 = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    std::vector<QuadPoint> q;
    q.reserve(static_cast<std::size_t>(npts) * npts);
    for (int i = 0; i < npts; ++i) {
        double u = 0.5 * (gx[i] + 1.0);  // [0,1]
        for (int j = 0; j < npts; ++j) {
            double v = 0.5 * (gx[j] + 1.0);
            double l1 = u, l2 = v * (1.0 - u);
            QuadPoint p;
            p.x = a + l1 * (b - a) + l2 * (c - a);
            p.w = 0.25 * gw[i] * gw[j] * (1.0 - u) * area2;
            q.push_back(p);
        }
    }
    return q;
}

/// Volume rule on a polygonal cell: the polygon is fanned into triangles from
/// its centroid (valid for cells star-shaped with respect to it; a negative
/// fan triangle reports the cell). Exactness degree as requested.
inline std::vector<QuadPoint> polygon_rule(const PolyMesh& mesh, index_t cell, int degree) {
    const auto& verts = mesh.cells[cell];
    const Vec3 c = mesh.cell_centroid[cell];
    std::vector<QuadPoint> q;
    for (std::size_t k = 0; k < verts.size(); ++k) {
        const Vec3& a = mesh.vertices[verts[k]];
        const Vec3& b = mesh.vertices[verts[(k + 1) % verts.size()]];
        double area2 = (a[0] - c[0]) * (b[1] - c[1]) - (b[0] - c[0]) * (a[1] - c[1]);
        if (!(area2 > 0.0))
            throw std::runtime_error("cell " + std::to_string(cell) +
                                     " is not star-shaped with respect to its centroid");
        auto tri = triangle_rule(c, a, b, degree);
        q.insert(q.end(), tri.begin(), tri.end());
    }
    return q;
}

/// Volume rule on an axis-aligned box cell (tensor Gauss).
inline std::vector<QuadPoint> box_rule(const PolyMesh& mesh, index_t cell, int degree) {
    Vec3 lo = mesh.vertices[mesh.cells[cell][0]], hi = lo;
    for (index_t v : mesh.cells[cell])
        for (int d = 0; d < 3; ++d) {
            lo[d] = std::min(lo[d], mesh.vertices[v][d]);
            hi[d] = std::max(hi[d], mesh.vertices[v][d]);
        }
    int npts = degree / 2 + 1;
    std::vector<double> gx, gw;
    quaddetail::gauss_legendre(npts, gx, gw);
    std::vector<QuadPoint> q;
    for (int i = 0; i < npts; ++i)
        for (int j = 0; j < npts; ++j)
            for (int k = 0; k < npts; ++k) {
                QuadPoint p;
                p.x = {lo[0] + 0.5 * (gx[i] + 1.0) * (hi[0] - lo[0]),
                       lo[1] + 0.5 * (gx[j] + 1.0) * (hi[1] - lo[1]),
                       lo[2] + 0.5 * (gx[k] + 1.0) * (hi[2] - lo[2])};
                p.w = 0.125 * gw[i] * gw[j] * gw[k] * (hi[0] - lo[0]) * (hi[1] - lo[1]) *
                      (hi[2] - lo[2]);
                q.push_back(p);
            }
    return q;
}

/// Rule on a mesh face: a Gauss segment in 2D, a tensor rule on the
/// axis-aligned quad in 3D.
inline std::vector<QuadPoint> face_rule(const PolyMesh& mesh, const PolyMesh::Face& f,
                                        int degree) {
    if (mesh.dim == 2)
        return segment_rule(mesh.vertices[f.verts[0]], mesh.vertices[f.verts[1]], degree);
    Vec3 lo = mesh.vertices[f.verts[0]], hi = lo;
    for (index_t v : f.verts)
        for (int d = 0; d < 3; ++d) {
            lo[d] = std::min(lo[d], mesh.vertices[v][d]);
            hi[d] = std::max(hi[d], mesh.vertices[v][d]);
        }
    int d1 = -1, d2 = -1;
    for (int d = 0; d < 3; ++d)
        if (hi[d] > lo[d]) (d1 < 0 ? d1 : d2) = d;
    int npts = degree / 2 + 1;
    std::vector<double> gx, gw;
    quaddetail::gauss_legendre(npts, gx, gw);
    std::vector<QuadPoint> q;
    for (int i = 0; i < npts; ++i)
        for (int j = 0; j < npts; ++j) {
            QuadPoint p;
            p.x = lo;
            p.x[d1] = lo[d1] + 0.5 * (gx[i] + 1.0) * (hi[d1] - lo[d1]);
            p.x[d2] = lo[d2] + 0.5 * (gx[j] + 1.0) * (hi[d2] - lo[d2]);
            p.w = 0.25 * gw[i] * gw[j] * (hi[d1] - lo[d1]) * (hi[d2] - lo[d2]);
            q.push_back(p);
        }
    return q;
}

} // namespace amgtune
