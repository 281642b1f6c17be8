#pragma once

#include <vector>

#include "amgtune/coefficients.hpp"
#include "amgtune/mesh.hpp"
#include "amgtune/problem.hpp"

namespace amgtune {

/// Marks vertices lying on boundary faces.
inline std::vector<char> boundary_vertices(const PolyMesh& mesh) {
    std::vector<char> onb(static_cast<std::size_t>(mesh.n_vertices()), 0);
    for (const auto& f : mesh.faces)
        if (f.boundary())
            for (index_t v : f.verts) onb[v] = 1;
    return onb;
}

/// Local P1 stiffness of a triangle with constant diffusion kappa.
inline DenseMatrix fem_local_matrix(const PolyMesh& mesh, index_t cell, double kappa) {
    const auto& c = mesh.cells[cell];
    if (c.size() != 3) throw std::invalid_argument("P1 assembly requires a triangular mesh");
    const Vec3& p0 = mesh.vertices[c[0]];
    const Vec3& p1 = mesh.vertices[c[1]];
    const Vec3& p2 = mesh.vertices[c[2]];
    double area = mesh.cell_measure[cell];
    double b[3] = {p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]};
    double cc[3] = {p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};
    DenseMatrix k(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k(i, j) = kappa * (b[i] * b[j] + cc[i] * cc[j]) / (4.0 * area);
    return k;
}

/// Piecewise-linear FEM for -div(kappa grad u) = 1 with homogeneous Dirichlet
/// data; boundary rows are eliminated, so n equals the interior vertex count.
inline ProblemInstance assemble_fem_p1_diffusion(const PolyMesh& mesh,
                                                 const CoefficientField& field) {
    if (mesh.dim != 2) throw std::invalid_argument("P1 assembly is two-dimensional");
    std::vector<char> onb = boundary_vertices(mesh);
    std::vector<index_t> dof(static_cast<std::size_t>(mesh.n_vertices()), -1);
    index_t n = 0;
    for (index_t v = 0; v < mesh.n_vertices(); ++v)
        if (!onb[v]) dof[v] = n++;

    std::vector<Triplet> t;
    DenseVector rhs(static_cast<std::size_t>(n), 0.0);
    for (index_t c = 0; c < mesh.n_cells(); ++c) {
        DenseMatrix k = fem_local_matrix(mesh, c, field.values[c]);
        const auto& cell = mesh.cells[c];
        for (int i = 0; i < 3; ++i) {
            if (dof[cell[i]] < 0) continue;
            rhs[dof[cell[i]]] += mesh.cell_measure[c] / 3.0;
            for (int j = 0; j < 3; ++j) {
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
    prob.discretization = "FEM-P1";
    prob.pattern = field.pattern;
    prob.eps = field.pattern == "random-cellwise" ? field.eps_max : field.eps;
    spd_spot_check(prob.matrix, "FEM-P1");
    return prob;
}

} // namespace amgtune
