#pragma once

#include <vector>

#include "amgtune/cljp.hpp"
#include "amgtune/sparse.hpp"
#include "amgtune/strength.hpp"

namespace amgtune {

struct InterpDiagnostics {
    index_t zero_rows = 0;           // F points with no coarse neighbour
    index_t weak_fallback_rows = 0;  // rows with a vanishing lumped denominator
    index_t lumped_strong = 0;       // strong F neighbours without coarse connections
};

struct InterpResult {
    SparseMatrix p;
    InterpDiagnostics diag;
};

/// Classical interpolation. C-point rows are unit coordinate rows. An F-point
/// row i interpolates from its coarse neighbours C_i = { j in C : a_ij != 0 }
/// with weights
///   w_ij = -( a_ij + sum_{l in Ds} a_il ahat_lj / sum_{m in C_i} ahat_lm )
///          / ( a_ii + sum_{l in Dw} a_il ),
/// where Ds are the strong F neighbours, Dw the weak neighbours, and
/// ahat_lj = a_lj when a_lj * a_ll <= 0, else 0. A strong F neighbour with no
/// ahat connection to C_i is lumped into the denominator; a vanishing
/// denominator falls back to w_ij = -a_ij / a_ii; an F point with no coarse
/// neighbour gets a zero row. All three events are counted in the diagnostics.
inline InterpResult build_interpolation(const SparseMatrix& a, const StrengthGraph& g,
                                        const CfSplitting& split) {
    const index_t n = a.n();
    InterpResult res;
    std::vector<Triplet> t;

    std::vector<char> in_ci(static_cast<std::size_t>(n), 0);
    std::vector<index_t> ci;

    for (index_t i = 0; i < n; ++i) {
        if (split.is_coarse(i)) {
            t.push_back({i, split.coarse_index[i], 1.0});
            continue;
        }
        auto cols = a.row_cols(i);
        auto vals = a.row_vals(i);

        ci.clear();
        double aii = 0.0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            index_t j = cols[k];
            if (j == i) {
                aii = vals[k];
            } else if (vals[k] != 0.0 && split.is_coarse(j)) {
                ci.push_back(j);
                in_ci[j] = 1;
            }
        }
        if (ci.empty()) {
            res.diag.zero_rows++;
            continue;
        }

        double denom = aii;
        std::vector<double> numer(ci.size(), 0.0);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            index_t l = cols[k];
            if (l == i) continue;
            double ail = vals[k];
            if (!g.depends_on(i, l)) {
                denom += ail;  // weak neighbour, coarse or fine
                continue;
            }
            if (split.is_coarse(l)) continue;  // strong coarse: direct term below
            // strong F neighbour: distribute a_il over C_i through ahat
            double all = a.diagonal(l);
            double s = 0.0;
            auto lcols = a.row_cols(l);
            auto lvals = a.row_vals(l);
            for (std::size_t q = 0; q < lcols.size(); ++q) {
                if (in_ci[lcols[q]] && lvals[q] * all <= 0.0) s += lvals[q];
            }
            if (s == 0.0) {
                denom += ail;
                res.diag.lumped_strong++;
                continue;
            }
            for (std::size_t q = 0; q < lcols.size(); ++q) {
                index_t m = lcols[q];
                if (!in_ci[m] || !(lvals[q] * all <= 0.0)) continue;
                auto it = std::lower_bound(ci.begin(), ci.end(), m);
                numer[static_cast<std::size_t>(it - ci.begin())] += ail * lvals[q] / s;
            }
        }

        bool weak_only = (denom == 0.0);
        if (weak_only) res.diag.weak_fallback_rows++;
        for (std::size_t k = 0; k < ci.size(); ++k) {
            index_t j = ci[k];
            double aij = a.value_at(i, j);
            double w = weak_only ? -aij / aii : -(aij + numer[k]) / denom;
            if (w != 0.0) t.push_back({i, split.coarse_index[j], w});
        }
        for (index_t j : ci) in_ci[j] = 0;
    }

    res.p = SparseMatrix::from_triplets(n, split.n_coarse, std::move(t));
    return res;
}

} // namespace amgtune
