#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "amgtune/dense.hpp"
#include "amgtune/interp.hpp"
#include "amgtune/rng.hpp"
#include "amgtune/smoothers.hpp"
#include "amgtune/sparse.hpp"

namespace amgtune {

struct AmgLimits {
    int max_levels = 25;
    index_t min_coarse = 2;
    /// Largest system the coarsest level may dense-factorize. When coarsening
    /// stalls above this size the coarse "solve" degrades to a couple of
    /// l1-Jacobi sweeps and the cycle simply stops contracting.
    index_t dense_max = 2000;
};

struct Level {
    SparseMatrix a;
    SparseMatrix p;  // n_k x n_{k+1}; empty on the coarsest level
    SparseMatrix r;  // transpose of p
    CfSplitting split;
    InterpDiagnostics interp_diag;
    SmootherState smoother;  // populated by attach_smoother
};

struct AmgHierarchy {
    std::vector<Level> levels;
    LuFactors coarse_lu;
    bool coarse_direct = true;
    SmootherState coarse_fallback;  // l1-Jacobi data when coarse_direct is false
    bool smoother_attached = false;
    SmootherKind smoother_kind = SmootherKind::SorJacobi;
    double theta = 0.0;
    std::uint64_t seed = 0;

    int n_levels() const { return static_cast<int>(levels.size()); }
    const SparseMatrix& fine() const { return levels.front().a; }

    double operator_complexity() const {
        double s = 0.0;
        for (const Level& l : levels) s += l.a.nnz();
        return s / levels.front().a.nnz();
    }
};

/// Builds the multilevel hierarchy: strength graph with the given theta, CLJP
/// splitting, classical interpolation, restriction as the transpose and the
/// Galerkin coarse operator at each level. Coarsening stops when the grid size
/// drops below limits.min_coarse, the C set comes out empty, coarsening stops
/// reducing the size, or limits.max_levels is reached.
inline AmgHierarchy amg_setup(const SparseMatrix& a, double theta, std::uint64_t seed,
                              AmgLimits limits = {}) {
    if (!a.is_symmetric()) throw std::invalid_argument("amg_setup: matrix must be symmetric");
    AmgHierarchy h;
    h.theta = theta;
    h.seed = seed;
    h.levels.push_back({a, {}, {}, {}, {}, {}});

    while (static_cast<int>(h.levels.size()) < limits.max_levels) {
        Level& lvl = h.levels.back();
        const index_t nk = lvl.a.n();
        if (nk < limits.min_coarse) break;
        StrengthGraph g = build_strength(lvl.a, theta);
        std::uint64_t level_seed =
            derive_seed(seed, "cljp-level-" + std::to_string(h.levels.size()));
        CfSplitting split = cljp_split(g, level_seed);
        if (split.n_coarse == 0 || split.n_coarse >= nk) break;
        InterpResult ir = build_interpolation(lvl.a, g, split);
        SparseMatrix r = transpose(ir.p);
        SparseMatrix ac = triple_product(r, lvl.a, ir.p);
        lvl.split = std::move(split);
        lvl.interp_diag = ir.diag;
        lvl.r = std::move(r);
        lvl.p = std::move(ir.p);
        h.levels.push_back({std::move(ac), {}, {}, {}, {}, {}});
    }

    const SparseMatrix& coarse = h.levels.back().a;
    if (coarse.n() <= limits.dense_max) {
        h.coarse_lu = LuFactors(coarse.to_dense());
        h.coarse_direct = true;
    } else {
        h.coarse_direct = false;
        h.coarse_fallback = make_smoother(SmootherKind::L1Jacobi, coarse);
    }
    return h;
}

/// Prepares the per-level relaxation data for the chosen smoother.
inline void attach_smoother(AmgHierarchy& h, SmootherKind kind, SmootherOptions opt = {}) {
    for (std::size_t k = 0; k + 1 < h.levels.size(); ++k)
        h.levels[k].smoother = make_smoother(kind, h.levels[k].a, &h.levels[k].split, opt);
    if (h.levels.size() == 1 && !h.coarse_direct)
        h.coarse_fallback = make_smoother(SmootherKind::L1Jacobi, h.levels[0].a);
    h.smoother_kind = kind;
    h.smoother_attached = true;
}

/// Per-level diagnostic dump: size, stored entries, C/F counts and the
/// cumulative operator complexity. CSV when header=true, aligned text otherwise.
inline void dump_hierarchy(const AmgHierarchy& h, std::ostream& os, bool csv = false) {
    if (csv) os << "level,n,nnz,n_coarse,n_fine,operator_complexity\n";
    double nnz1 = h.levels.front().a.nnz();
    double cum = 0.0;
    for (std::size_t k = 0; k < h.levels.size(); ++k) {
        const Level& l = h.levels[k];
        cum += l.a.nnz();
        index_t nc = (k + 1 < h.levels.size()) ? l.split.n_coarse : 0;
        index_t nf = l.a.n() - nc;
        if (csv) {
            os << k + 1 << "," << l.a.n() << "," << l.a.nnz() << "," << nc << "," << nf << ","
               << cum / nnz1 << "\n";
        } else {
            os << "level " << k + 1 << ": n=" << l.a.n() << " nnz=" << l.a.nnz() << " C=" << nc
               << " F=" << nf << " opcx=" << cum / nnz1 << "\n";
        }
    }
}

} // namespace amgtune
