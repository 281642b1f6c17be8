#pragma once

#include <cstdint>
#include <vector>

#include "amgtune/rng.hpp"
#include "amgtune/strength.hpp"

namespace amgtune {

enum class CfLabel : std::int8_t { F = 0, C = 1 };

struct CfSplitting {
    std::vector<CfLabel> labels;
    std::vector<index_t> coarse_index;  // -1 for F points
    index_t n_coarse = 0;

    index_t n() const { return static_cast<index_t>(labels.size()); }
    bool is_coarse(index_t i) const { return labels[i] == CfLabel::C; }
};

/// CLJP splitting. Weights are eta(i) = |S_i^T| + uniform tie-break drawn from
/// the seeded generator. Each round selects the nodes whose weight beats every
/// undecided neighbour across the remaining strength edges, marks them C,
/// applies the two weight-decrement update rules, then marks nodes with
/// eta < 1 as F. A diagonal matrix (empty graph) yields an all-F splitting.
inline CfSplitting cljp_split(const StrengthGraph& g, std::uint64_t seed) {
    const index_t n = g.n;
    CfSplitting split;
    split.labels.assign(static_cast<std::size_t>(n), CfLabel::F);
    split.coarse_index.assign(static_cast<std::size_t>(n), -1);

    Rng rng(seed);
    std::vector<double> weight(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i)
        weight[i] = static_cast<double>(g.influence_count(i)) + rng.uniform();

    enum : std::int8_t { kUndecided = 0, kC = 1, kF = 2 };
    std::vector<std::int8_t> state(static_cast<std::size_t>(n), kUndecided);
    std::vector<char> alive(g.dep_idx.size(), 1);
    index_t undecided = n;

    // ties broken by index so the loop always makes progress
    auto beats = [&](index_t i, index_t j) {
        return weight[i] > weight[j] || (weight[i] == weight[j] && i > j);
    };

    std::vector<index_t> selected;
    while (undecided > 0) {
        // nodes with eta < 1 can no longer become C
        for (index_t i = 0; i < n; ++i) {
            if (state[i] == kUndecided && weight[i] < 1.0) {
                state[i] = kF;
                --undecided;
            }
        }
        if (undecided == 0) break;

        selected.clear();
        for (index_t i = 0; i < n; ++i) {
            if (state[i] != kUndecided) continue;
            bool ismax = true;
            for (index_t e = g.dep_ptr[i]; e < g.dep_ptr[i + 1] && ismax; ++e)
                if (alive[e] && state[g.dep_idx[e]] == kUndecided && !beats(i, g.dep_idx[e]))
                    ismax = false;
            for (index_t e = g.inf_ptr[i]; e < g.inf_ptr[i + 1] && ismax; ++e)
                if (alive[g.inf_edge[e]] && state[g.inf_src[e]] == kUndecided &&
                    !beats(i, g.inf_src[e]))
                    ismax = false;
            if (ismax) selected.push_back(i);
        }

        for (index_t c : selected) {
            state[c] = kC;
            --undecided;
        }

        for (index_t c : selected) {
            // rule 1: nodes that influence the new C point lose that credit
            for (index_t e = g.dep_ptr[c]; e < g.dep_ptr[c + 1]; ++e) {
                if (!alive[e]) continue;
                alive[e] = 0;
                index_t j = g.dep_idx[e];
                if (state[j] == kUndecided) weight[j] -= 1.0;
            }
            // rule 2: a node depending on c no longer needs neighbours that
            // also depend on c; those neighbours lose the credit
            for (index_t e = g.inf_ptr[c]; e < g.inf_ptr[c + 1]; ++e) {
                index_t dep_edge = g.inf_edge[e];
                index_t i = g.inf_src[e];
                if (alive[dep_edge]) alive[dep_edge] = 0;
                for (index_t e2 = g.dep_ptr[i]; e2 < g.dep_ptr[i + 1]; ++e2) {
                    if (!alive[e2]) continue;
                    index_t j = g.dep_idx[e2];
                    if (j == c) continue;
                    if (g.depends_on(j, c)) {
                        alive[e2] = 0;
                        if (state[j] == kUndecided) weight[j] -= 1.0;
                    }
                }
            }
        }
    }

    for (index_t i = 0; i < n; ++i) {
        if (state[i] == kC) {
            split.labels[i] = CfLabel::C;
            split.coarse_index[i] = split.n_coarse++;
        }
    }
    return split;
}

} // namespace amgtune
