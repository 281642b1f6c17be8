#pragma once

#include <array>
#include <vector>

#include "amgtune/coefficients.hpp"
#include "amgtune/mesh.hpp"
#include "amgtune/problem.hpp"
#include "amgtune/quadrature.hpp"

namespace amgtune {

inline int dg_local_dim(int p, int dim) {
    return dim == 2 ? (p + 1) * (p + 2) / 2 : (p + 1) * (p + 2) * (p + 3) / 6;
}

/// Modal basis of one cell: scaled monomials ((x-c)/sx)^a ((y-c)/sy)^b ...
/// on the cell's bounding box, ordered by total degree.
struct DgBasis {
    int p = 1;
    int dim = 2;
    int nb = 0;
    Vec3 center{0, 0, 0};
    Vec3 scale{1, 1, 1};
    std::vector<std::array<int, 3>> exps;

    DgBasis(const PolyMesh& mesh, index_t cell, int p_in) : p(p_in), dim(mesh.dim) {
        Vec3 lo = mesh.vertices[mesh.cells[cell][0]], hi = lo;
        for (index_t v : mesh.cells[cell])
            for (int d = 0; d < 3; ++d) {
                lo[d] = std::min(lo[d], mesh.vertices[v][d]);
                hi[d] = std::max(hi[d], mesh.vertices[v][d]);
            }
        center = 0.5 * (lo + hi);
        for (int d = 0; d < dim; ++d) scale[d] = std::max(0.5 * (hi[d] - lo[d]), 1e-300);
        for (int deg = 0; deg <= p; ++deg)
            for (int a = deg; a >= 0; --a) {
                if (dim == 2) {
                    exps.push_back({a, deg - a, 0});
                } else {
                    for (int b = deg - a; b >= 0; --b) exps.push_back({a, b, deg - a - b});
                }
            }
        nb = static_cast<int>(exps.size());
    }

    /// Values and gradients of all basis functions at x.
    void eval(const Vec3& x, std::vector<double>& val, std::vector<Vec3>& grad) const {
        val.resize(nb);
        grad.resize(nb);
        Vec3 t{0, 0, 0};
        for (int d = 0; d < dim; ++d) t[d] = (x[d] - center[d]) / scale[d];
        auto powi = [](double base, int e) {
            double r = 1.0;
            for (int k = 0; k < e; ++k) r *= base;
            return r;
        };
        for (int k = 0; k < nb; ++k) {
            const auto& e = exps[k];
            double parts[3] = {powi(t[0], e[0]), powi(t[1], e[1]), powi(t[2], e[2])};
            val[k] = parts[0] * parts[1] * parts[2];
            grad[k] = {0, 0, 0};
            for (int d = 0; d < dim; ++d) {
                if (e[d] == 0) continue;
                double g = e[d] * powi(t[d], e[d] - 1) / scale[d];
                for (int o = 0; o < 3; ++o)
                    if (o != d) g *= parts[o];
                grad[k][d] = g;
            }
        }
    }
};

struct DgOptions {
    bool include_faces = true;  // volume-only assembly for kernel checks
    bool spd_check = true;
    index_t spd_check_limit = 2000;
};

namespace dgdetail {

inline double harmonic_mean(double a, double b) { return 2.0 * a * b / (a + b); }

inline std::vector<QuadPoint> cell_rule(const PolyMesh& mesh, index_t cell, int degree) {
    return mesh.dim == 2 ? polygon_rule(mesh, cell, degree) : box_rule(mesh, cell, degree);
}

} // namespace dgdetail

/// Interior-penalty DG stiffness for -div(kappa grad u) = 1, homogeneous
/// Dirichlet data imposed weakly. Penalty sigma = gamma * {kappa p^2 / h}
/// with the harmonic average across interior faces and the one-sided value on
/// the boundary. Quadrature exact to degree 2p+1.
inline ProblemInstance assemble_dg_diffusion(const PolyMesh& mesh, const CoefficientField& field,
                                             int p, double gamma, DgOptions opt = {}) {
    if (p < 1 || p > 4) throw std::invalid_argument("DG degree must be 1..4");
    const int nb = dg_local_dim(p, mesh.dim);
    const int qdeg = 2 * p + 1;
    const index_t n = mesh.n_cells() * nb;
    std::vector<Triplet> t;
    DenseVector rhs(static_cast<std::size_t>(n), 0.0);

    std::vector<DgBasis> basis;
    basis.reserve(static_cast<std::size_t>(mesh.n_cells()));
    for (index_t c = 0; c < mesh.n_cells(); ++c) basis.emplace_back(mesh, c, p);

    std::vector<double> val;
    std::vector<Vec3> grad;
    for (index_t c = 0; c < mesh.n_cells(); ++c) {
        const double kappa = field.values[c];
        DenseMatrix k(nb, nb);
        std::vector<double> load(nb, 0.0);
        for (const QuadPoint& q : dgdetail::cell_rule(mesh, c, qdeg)) {
            basis[c].eval(q.x, val, grad);
            for (int i = 0; i < nb; ++i) {
                load[i] += q.w * val[i];
                for (int j = 0; j < nb; ++j) k(i, j) += q.w * kappa * dot3(grad[i], grad[j]);
            }
        }
        const index_t off = c * nb;
        for (int i = 0; i < nb; ++i) {
            rhs[off + i] = load[i];
            for (int j = 0; j < nb; ++j)
                if (k(i, j) != 0.0) t.push_back({off + i, off + j, k(i, j)});
        }
    }

    if (opt.include_faces) {
        std::vector<double> val2;
        std::vector<Vec3> grad2;
        for (const auto& f : mesh.faces) {
            const bool interior = !f.boundary();
            const index_t cells[2] = {f.left, f.right};
            const double sgn[2] = {1.0, -1.0};
            const double kl = field.values[f.left];
            // diffusion-weighted (harmonic) flux average; keeps the form
            // coercive under strong jumps with the harmonic penalty
            double kflux, sigma;
            if (interior) {
                const double kr = field.values[f.right];
                kflux = 0.5 * dgdetail::harmonic_mean(kl, kr);
                sigma = gamma * dgdetail::harmonic_mean(kl * p * p / mesh.cell_diameter[f.left],
                                                        kr * p * p / mesh.cell_diameter[f.right]);
            } else {
                kflux = kl;
                sigma = gamma * kl * p * p / mesh.cell_diameter[f.left];
            }
            const int nsides = interior ? 2 : 1;
            for (const QuadPoint& q : face_rule(mesh, f, qdeg)) {
                for (int a = 0; a < nsides; ++a) {
                    basis[cells[a]].eval(q.x, val, grad);
                    for (int b = 0; b < nsides; ++b) {
                        basis[cells[b]].eval(q.x, val2, grad2);
                        const index_t offa = cells[a] * nb;
                        const index_t offb = cells[b] * nb;
                        for (int i = 0; i < nb; ++i) {
                            const double ndgi = dot3(grad[i], f.normal);
                            for (int j = 0; j < nb; ++j) {
                                const double ndgj = dot3(grad2[j], f.normal);
                                // grouping keeps the transposed entry bitwise equal
                                double v = -sgn[a] * val[i] * kflux * ndgj -
                                           sgn[b] * val2[j] * kflux * ndgi +
                                           (sigma * (sgn[a] * sgn[b])) * (val[i] * val2[j]);
                                if (v != 0.0) t.push_back({offa + i, offb + j, q.w * v});
                            }
                        }
                    }
                }
            }
        }
    }

    ProblemInstance prob;
    prob.matrix = SparseMatrix::from_triplets(n, n, std::move(t));
    prob.matrix = detail::drop_exact_zeros(prob.matrix);
    prob.rhs = std::move(rhs);
    prob.dim = mesh.dim;
    prob.p = p;
    prob.discretization = "DG";
    prob.pattern = field.pattern;
    prob.eps = field.pattern == "random-cellwise" ? field.eps_max : field.eps;
    prob.gamma = gamma;
    if (opt.include_faces && opt.spd_check) spd_spot_check(prob.matrix, "DG", opt.spd_check_limit);
    return prob;
}

/// Interior-penalty DG for linear elasticity in displacement form with
/// heterogeneous Young's modulus (E_K per cell) and a global Poisson ratio.
/// Vector dofs are blocked per cell: all x-components, then y (then z).
/// The penalty eta = gamma * {E p^2 / h} mirrors the scalar sigma.
inline ProblemInstance assemble_dg_elasticity(const PolyMesh& mesh, const CoefficientField& field,
                                              int p, double gamma, DgOptions opt = {}) {
    if (p < 1 || p > 4) throw std::invalid_argument("DG degree must be 1..4");
    const int d = mesh.dim;
    const int nb = dg_local_dim(p, d);
    const int nloc = d * nb;
    const int qdeg = 2 * p + 1;
    const index_t n = mesh.n_cells() * nloc;
    const double nu = field.nu;
    if (!(nu > 0.0 && nu < 0.5)) throw std::invalid_argument("Poisson ratio must lie in (0, 1/2)");
    auto lame_mu = [nu](double e) { return e / (2.0 * (1.0 + nu)); };
    auto lame_lambda = [nu](double e) { return e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); };

    std::vector<Triplet> t;
    DenseVector rhs(static_cast<std::size_t>(n), 0.0);
    std::vector<DgBasis> basis;
    basis.reserve(static_cast<std::size_t>(mesh.n_cells()));
    for (index_t c = 0; c < mesh.n_cells(); ++c) basis.emplace_back(mesh, c, p);

    std::vector<double> val, val2;
    std::vector<Vec3> grad, grad2;
    for (index_t c = 0; c < mesh.n_cells(); ++c) {
        const double mu = lame_mu(field.values[c]);
        const double lambda = lame_lambda(field.values[c]);
        DenseMatrix k(nloc, nloc);
        std::vector<double> load(nb, 0.0);
        for (const QuadPoint& q : dgdetail::cell_rule(mesh, c, qdeg)) {
            basis[c].eval(q.x, val, grad);
            for (int i = 0; i < nb; ++i) {
                load[i] += q.w * val[i];
                for (int j = 0; j < nb; ++j) {
                    const double gg = dot3(grad[i], grad[j]);
                    for (int ci = 0; ci < d; ++ci)
                        for (int cj = 0; cj < d; ++cj) {
                            // sigma(phi_j e_cj) : eps(phi_i e_ci)
                            double v = mu * ((ci == cj ? gg : 0.0) + grad[j][ci] * grad[i][cj]) +
                                       lambda * grad[j][cj] * grad[i][ci];
                            k(ci * nb + i, cj * nb + j) += q.w * v;
                        }
                }
            }
        }
        const index_t off = c * nloc;
        for (int ci = 0; ci < d; ++ci)
            for (int i = 0; i < nb; ++i) rhs[off + ci * nb + i] = load[i];
        for (int i = 0; i < nloc; ++i)
            for (int j = 0; j < nloc; ++j)
                if (k(i, j) != 0.0) t.push_back({off + i, off + j, k(i, j)});
    }

    if (opt.include_faces) {
        for (const auto& f : mesh.faces) {
            const bool interior = !f.boundary();
            const index_t cells[2] = {f.left, f.right};
            const double sgn[2] = {1.0, -1.0};
            const double el = field.values[f.left];
            // stiffness-weighted flux: tractions on interior faces use the
            // Lame parameters of half the harmonic Young modulus
            double eflux, eta;
            if (interior) {
                const double er = field.values[f.right];
                eflux = 0.5 * dgdetail::harmonic_mean(el, er);
                eta = gamma * dgdetail::harmonic_mean(el * p * p / mesh.cell_diameter[f.left],
                                                      er * p * p / mesh.cell_diameter[f.right]);
            } else {
                eflux = el;
                eta = gamma * el * p * p / mesh.cell_diameter[f.left];
            }
            const double muf = lame_mu(eflux);
            const double lamf = lame_lambda(eflux);
            const int nsides = interior ? 2 : 1;
            const Vec3 nrm = f.normal;
            for (const QuadPoint& q : face_rule(mesh, f, qdeg)) {
                for (int a = 0; a < nsides; ++a) {
                    basis[cells[a]].eval(q.x, val, grad);
                    for (int b = 0; b < nsides; ++b) {
                        basis[cells[b]].eval(q.x, val2, grad2);
                        const index_t offa = cells[a] * nloc;
                        const index_t offb = cells[b] * nloc;
                        for (int i = 0; i < nb; ++i) {
                            const double gin = dot3(grad[i], nrm);
                            for (int j = 0; j < nb; ++j) {
                                const double gjn = dot3(grad2[j], nrm);
                                for (int ci = 0; ci < d; ++ci)
                                    for (int cj = 0; cj < d; ++cj) {
                                        // traction of the trial side against the
                                        // test jump, its transpose, and the penalty
                                        double trac_j =
                                            muf * ((ci == cj ? gjn : 0.0) + grad2[j][ci] * nrm[cj]) +
                                            lamf * grad2[j][cj] * nrm[ci];
                                        double trac_i =
                                            muf * ((ci == cj ? gin : 0.0) + grad[i][cj] * nrm[ci]) +
                                            lamf * grad[i][ci] * nrm[cj];
                                        double v = -sgn[a] * val[i] * trac_j -
                                                   sgn[b] * val2[j] * trac_i;
                                        if (ci == cj)
                                            v += (eta * (sgn[a] * sgn[b])) * (val[i] * val2[j]);
                                        if (v != 0.0)
                                            t.push_back({offa + ci * nb + i, offb + cj * nb + j,
                                                         q.w * v});
                                    }
                            }
                        }
                    }
                }
            }
        }
    }

    ProblemInstance prob;
    prob.matrix = SparseMatrix::from_triplets(n, n, std::move(t));
    prob.matrix = detail::drop_exact_zeros(prob.matrix);
    prob.rhs = std::move(rhs);
    prob.dim = d;
    prob.p = p;
    prob.discretization = "DG";
    prob.pattern = field.pattern;
    prob.eps = field.pattern == "random-cellwise" ? field.eps_max : field.eps;
    prob.gamma = gamma;
    if (opt.include_faces && opt.spd_check) spd_spot_check(prob.matrix, "DG", opt.spd_check_limit);
    return prob;
}

} // namespace amgtune
