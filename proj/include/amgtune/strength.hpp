#pragma once

#include <stdexcept>
#include <vector>

#include "amgtune/sparse.hpp"

namespace amgtune {

/// Strong-dependency graph of a matrix for a threshold theta in (0, 1].
/// dep holds S_i = { j != i : -a_ij >= theta * max_{l != i} (-a_il) } whenever
/// that max is positive, else S_i is empty. inf holds the influence sets
/// S_i^T = { j : i in S_j }. Rows with only nonnegative off-diagonal entries
/// have no strong dependencies.
struct StrengthGraph {
    index_t n = 0;
    double theta = 0.0;
    std::vector<index_t> dep_ptr, dep_idx;
    std::vector<index_t> inf_ptr, inf_src;  // j -> list of i with j in S_i
    std::vector<index_t> inf_edge;          // position of the matching dep edge

    std::span<const index_t> deps(index_t i) const {
        return {dep_idx.data() + dep_ptr[i], dep_idx.data() + dep_ptr[i + 1]};
    }
    index_t influence_count(index_t j) const { return inf_ptr[j + 1] - inf_ptr[j]; }

    bool depends_on(index_t i, index_t j) const {
        auto d = deps(i);
        return std::binary_search(d.begin(), d.end(), j);
    }
};

inline StrengthGraph build_strength(const SparseMatrix& a, double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("strong threshold must lie in (0, 1]");
    if (!a.is_square()) throw std::invalid_argument("build_strength: square matrix required");
    const index_t n = a.n();
    StrengthGraph g;
    g.n = n;
    g.theta = theta;
    g.dep_ptr.assign(static_cast<std::size_t>(n) + 1, 0);

    for (index_t i = 0; i < n; ++i) {
        double maxneg = 0.0;
        auto cols = a.row_cols(i);
        auto vals = a.row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k)
            if (cols[k] != i) maxneg = std::max(maxneg, -vals[k]);
        if (maxneg > 0.0) {
            const double cut = theta * maxneg;
            for (std::size_t k = 0; k < cols.size(); ++k)
                if (cols[k] != i && -vals[k] >= cut) g.dep_idx.push_back(cols[k]);
        }
        g.dep_ptr[static_cast<std::size_t>(i) + 1] = static_cast<index_t>(g.dep_idx.size());
    }

    // influence lists = transpose of the dependency lists
    g.inf_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    for (index_t j : g.dep_idx) g.inf_ptr[j + 1]++;
    for (index_t j = 0; j < n; ++j) g.inf_ptr[j + 1] += g.inf_ptr[j];
    g.inf_src.resize(g.dep_idx.size());
    g.inf_edge.resize(g.dep_idx.size());
    std::vector<index_t> next(g.inf_ptr.begin(), g.inf_ptr.end() - 1);
    for (index_t i = 0; i < n; ++i) {
        for (index_t e = g.dep_ptr[i]; e < g.dep_ptr[i + 1]; ++e) {
            index_t j = g.dep_idx[e];
            index_t pos = next[j]++;
            g.inf_src[pos] = i;
            g.inf_edge[pos] = e;
        }
    }
    return g;
}

} // namespace amgtune
