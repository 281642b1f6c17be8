#pragma once

#include <vector>

#include "amgtune/coefficients.hpp"
#include "amgtune/fem.hpp"
#include "amgtune/mesh.hpp"
#include "amgtune/problem.hpp"

namespace amgtune {

namespace vemdetail {

inline void check_star_shaped(const PolyMesh& mesh, index_t cell) {
    const auto& verts = mesh.cells[cell];
    const Vec3 c = mesh.cell_centroid[cell];
    for (std::size_t k = 0; k < verts.size(); ++k) {
        const Vec3& a = mesh.vertices[verts[k]];
        const Vec3& b = mesh.vertices[verts[(k + 1) % verts.size()]];
        double area2 = (a[0] - c[0]) * (b[1] - c[1]) - (b[0] - c[0]) * (a[1] - c[1]);
        if (!(area2 > 0.0))
            throw std::runtime_error("VEM cell " + std::to_string(cell) +
                                     " is not star-shaped; the projector is ill-defined");
    }
}

} // namespace vemdetail

/// Local lowest-order virtual element stiffness for constant diffusion:
/// the consistency part |K| kappa (grad Pi)^T (grad Pi) built from the
/// standard gradient projector onto linear monomials, plus the dofi-dofi
/// stabilization tau (I - Pi)^T (I - Pi) with tau = kappa.
inline DenseMatrix vem_local_matrix(const PolyMesh& mesh, index_t cell, double kappa) {
    vemdetail::check_star_shaped(mesh, cell);
    const auto& verts = mesh.cells[cell];
    const std::size_t m = verts.size();
    const Vec3 c = mesh.cell_centroid[cell];
    const double h = mesh.cell_diameter[cell];
    const double area = mesh.cell_measure[cell];

    // D(i, alpha) = m_alpha(V_i) with scaled monomials {1, (x-xc)/h, (y-yc)/h}
    DenseMatrix d(m, 3);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec3& v = mesh.vertices[verts[i]];
        d(i, 0) = 1.0;
        d(i, 1) = (v[0] - c[0]) / h;
        d(i, 2) = (v[1] - c[1]) / h;
    }
    // B(alpha, i): row 0 fixes the constant via the vertex average; rows 1-2
    // are the boundary integrals of grad m_alpha . n against the hat dofs
    DenseMatrix b(3, m);
    for (std::size_t i = 0; i < m; ++i) b(0, i) = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < m; ++k) {
        const Vec3& va = mesh.vertices[verts[k]];
        const Vec3& vb = mesh.vertices[verts[(k + 1) % m]];
        Vec3 e = vb - va;
        Vec3 n = {e[1], -e[0], 0.0};  // outward times |e| for a CCW loop
        // edge midpoint rule is exact for the linear hat trace: each endpoint
        // dof collects |e|/2
        for (std::size_t end : {k, (k + 1) % m}) {
            b(1, end) += 0.5 * n[0] / h;
            b(2, end) += 0.5 * n[1] / h;
        }
    }
    // G = B D, projector coefficients Pi* = G^-1 B
    DenseMatrix g = b * d;
    LuFactors lu(g);
    if (lu.singular()) throw std::runtime_error("VEM projector system is singular");
    DenseMatrix pistar(3, m);
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> col = lu.solve({b(0, j), b(1, j), b(2, j)});
        for (int a = 0; a < 3; ++a) pistar(a, j) = col[a];
    }

    DenseMatrix k(m, m);
    // consistency: gradients of the projections are constant vectors
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            k(i, j) = kappa * area * (pistar(1, i) * pistar(1, j) + pistar(2, i) * pistar(2, j)) /
                      (h * h);
    // stabilization on the dofs
    DenseMatrix pi = d * pistar;  // m x m
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < m; ++l) {
                double li = (l == i ? 1.0 : 0.0) - pi(l, i);
                double lj = (l == j ? 1.0 : 0.0) - pi(l, j);
                s += li * lj;
            }
            k(i, j) += kappa * s;
        }
    return k;
}

/// Lowest-order VEM for the diffusion problem with f = 1 and homogeneous
/// Dirichlet data on 2D polygonal meshes; Dirichlet vertices eliminated.
inline ProblemInstance assemble_vem1_diffusion(const PolyMesh& mesh,
                                               const CoefficientField& field) {
    if (mesh.dim != 2) throw std::invalid_argument("lowest-order VEM assembly is two-dimensional");
    std::vector<char> onb = boundary_vertices(mesh);
    std::vector<index_t> dof(static_cast<std::size_t>(mesh.n_vertices()), -1);
    index_t n = 0;
    for (index_t v = 0; v < mesh.n_vertices(); ++v)
        if (!onb[v]) dof[v] = n++;

    std::vector<Triplet> t;
    DenseVector rhs(static_cast<std::size_t>(n), 0.0);
    for (index_t c = 0; c < mesh.n_cells(); ++c) {
        DenseMatrix k = vem_local_matrix(mesh, c, field.values[c]);
        const auto& cell = mesh.cells[c];
        const double mload = mesh.cell_measure[c] / static_cast<double>(cell.size());
        for (std::size_t i = 0; i < cell.size(); ++i) {
            if (dof[cell[i]] < 0) continue;
            rhs[dof[cell[i]]] += mload;
            for (std::size_t j = 0; j < cell.size(); ++j) {
                if (dof[cell[j]] < 0) continue;
                if (k(i, j) != 0.0) t.push_back({dof[cell[i]], dof[cell[j]], k(i, j)});
            }
        }
    }

    ProblemInstance prob;
    prob.matrix = SparseMatrix::from_triplets(n, n, std::move(t));
    prob.rhs = std::move(rhs);
    prob.dim = 2;
    prob.p = 1;
    prob.discretization = "VEM1";
    prob.pattern = field.pattern;
    prob.eps = field.pattern == "random-cellwise" ? field.eps_max : field.eps;
    spd_spot_check(prob.matrix, "VEM1");
    return prob;
}

} // namespace amgtune
