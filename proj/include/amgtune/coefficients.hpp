#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "amgtune/mesh.hpp"
#include "amgtune/rng.hpp"

namespace amgtune {

enum class CoeffPattern { Checkerboard, Stripes, Quadrant, Inclusion, RandomCellwise };

inline std::string pattern_name(CoeffPattern p) {
    switch (p) {
        case CoeffPattern::Checkerboard: return "checkerboard";
        case CoeffPattern::Stripes: return "stripes";
        case CoeffPattern::Quadrant: return "quadrant";
        case CoeffPattern::Inclusion: return "inclusion";
        case CoeffPattern::RandomCellwise: return "random-cellwise";
    }
    throw std::invalid_argument("unknown pattern");
}

inline CoeffPattern pattern_from_name(const std::string& s) {
    for (CoeffPattern p : {CoeffPattern::Checkerboard, CoeffPattern::Stripes,
                           CoeffPattern::Quadrant, CoeffPattern::Inclusion,
                           CoeffPattern::RandomCellwise})
        if (pattern_name(p) == s) return p;
    throw std::invalid_argument("unknown pattern: " + s);
}

/// Per-cell coefficient values: diffusion kappa_K or Young's modulus E_K,
/// always of the form 10^eps. Elasticity additionally carries a global
/// Poisson ratio.
struct CoefficientField {
    std::vector<double> values;
    std::string pattern;
    double eps = 0.0;      // jump exponent of the two-region patterns
    double eps_max = 0.0;  // exponent bound of the random-cellwise pattern
    double nu = 0.29;      // Poisson ratio (elasticity only)
};

namespace coeffdetail {

/// Two-region split of the unit domain evaluated at a cell centroid:
/// true = gray subdomain (value 10^eps), false = white (value 1).
inline bool in_gray(CoeffPattern p, const Vec3& c, int dim) {
    switch (p) {
        case CoeffPattern::Stripes:  // four vertical stripes, alternating
            return static_cast<int>(std::floor(c[0] * 4.0)) % 2 == 1;
        case CoeffPattern::Checkerboard: {
            int s = static_cast<int>(std::floor(c[0] * 4.0)) + static_cast<int>(std::floor(c[1] * 4.0));
            if (dim == 3) s += static_cast<int>(std::floor(c[2] * 4.0));
            return s % 2 == 1;
        }
        case CoeffPattern::Quadrant:  // diagonal quadrants share the value
            return (c[0] - 0.5) * (c[1] - 0.5) > 0.0;
        case CoeffPattern::Inclusion: {
            double r2 = (c[0] - 0.5) * (c[0] - 0.5) + (c[1] - 0.5) * (c[1] - 0.5);
            if (dim == 3) r2 += (c[2] - 0.5) * (c[2] - 0.5);
            return r2 < 0.0625;  // ball of radius 1/4
        }
        case CoeffPattern::RandomCellwise: break;
    }
    throw std::invalid_argument("pattern is not a two-region pattern");
}

} // namespace coeffdetail

/// Assigns 10^eps on the gray region and 1 on the white region for the four
/// two-region patterns, or 10^eps_i with eps_i ~ U[0, eps_max] per cell for
/// the random-cellwise pattern (seeded).
inline CoefficientField make_coefficients(const PolyMesh& mesh, CoeffPattern pattern, double eps,
                                          std::uint64_t seed = 0) {
    CoefficientField f;
    f.pattern = pattern_name(pattern);
    f.values.resize(static_cast<std::size_t>(mesh.n_cells()));
    if (pattern == CoeffPattern::RandomCellwise) {
        f.eps_max = eps;
        Rng rng(derive_seed(seed, "coefficients"));
        for (double& v : f.values) v = std::pow(10.0, rng.uniform(0.0, eps));
    } else {
        f.eps = eps;
        double gray = std::pow(10.0, eps);
        for (index_t c = 0; c < mesh.n_cells(); ++c)
            f.values[c] =
                coeffdetail::in_gray(pattern, mesh.cell_centroid[c], mesh.dim) ? gray : 1.0;
    }
    return f;
}

} // namespace amgtune
