#pragma once

#include <functional>
#include <string>
#include <vector>

#include "amgtune/coefficients.hpp"
#include "amgtune/dg.hpp"
#include "amgtune/fem.hpp"
#include "amgtune/mesh.hpp"
#include "amgtune/problem.hpp"
#include "amgtune/vem.hpp"

namespace amgtune {

/// Declarative description of one suite problem.
struct SuiteProblemSpec {
    std::string suite;
    MeshFamily family = MeshFamily::Quad;
    int refinement = 1;
    std::string disc = "vem1";  // fem | vem1 | dg | dg-elasticity
    int p = 1;
    CoeffPattern pattern = CoeffPattern::Checkerboard;
    double eps = 1.0;           // two-region exponent or eps_max
    double gamma_lo = 5.0, gamma_hi = 20.0;
    double nu = 0.29;

    std::string id() const {
        std::ostringstream os;
        os << suite << "/" << mesh_family_name(family) << "/r" << refinement << "/" << disc << "/p"
           << p << "/" << pattern_name(pattern) << "/e" << eps;
        return os.str();
    }
};

struct SuiteDef {
    std::string name;
    std::string metric = "rho";  // rho | time | both
    /// Solver protocol of the suite: symmetric V-cycle ordering inside CG, or
    /// the production-style forward application (non-symmetric for the SOR
    /// family). Applied uniformly to every configuration of the suite.
    bool symmetric_precond = true;
    std::vector<SuiteProblemSpec> problems;
};

/// Builds the linear system for one suite entry. The DG penalty is drawn
/// uniformly from [gamma_lo, gamma_hi]; a draw that fails the SPD spot-check
/// is rejected and redrawn, mirroring how the experiments keep A positive
/// definite.
inline ProblemInstance generate_problem(const SuiteProblemSpec& spec, std::uint64_t seed) {
    std::uint64_t pseed = derive_seed(seed, spec.id());
    PolyMesh mesh = generate_mesh(spec.family, spec.refinement, pseed);
    CoefficientField field = make_coefficients(mesh, spec.pattern, spec.eps, pseed);
    field.nu = spec.nu;

    ProblemInstance prob;
    if (spec.disc == "fem") {
        prob = assemble_fem_p1_diffusion(mesh, field);
    } else if (spec.disc == "vem1") {
        prob = assemble_vem1_diffusion(mesh, field);
    } else if (spec.disc == "dg" || spec.disc == "dg-elasticity") {
        Rng rng(derive_seed(pseed, "gamma"));
        std::string last_error = "no penalty draw attempted";
        bool built = false;
        for (int attempt = 0; attempt < 16 && !built; ++attempt) {
            double gamma = rng.uniform(spec.gamma_lo, spec.gamma_hi);
            try {
                prob = spec.disc == "dg" ? assemble_dg_diffusion(mesh, field, spec.p, gamma)
                                         : assemble_dg_elasticity(mesh, field, spec.p, gamma);
                built = true;
            } catch (const std::runtime_error& e) {
                last_error = e.what();
            }
        }
        if (!built)
            throw std::runtime_error(spec.id() + ": no SPD penalty draw found (" + last_error + ")");
    } else {
        throw std::invalid_argument("unknown discretization: " + spec.disc);
    }
    prob.id = spec.id();
    prob.mesh_family = mesh_family_name(spec.family);
    return prob;
}

namespace suitedetail {

inline constexpr CoeffPattern kTwoRegion[4] = {CoeffPattern::Checkerboard, CoeffPattern::Stripes,
                                               CoeffPattern::Quadrant, CoeffPattern::Inclusion};

} // namespace suitedetail

/// Built-in desk-scale suites. Refinement ranges may be narrowed via
/// [r_min, r_max] without changing the problem definitions.
inline SuiteDef make_suite(const std::string& name, int r_min = 0, int r_max = 99) {
    SuiteDef def;
    def.name = name;
    auto clamp_r = [&](int lo, int hi, auto&& add) {
        for (int r = std::max(lo, r_min); r <= std::min(hi, r_max); ++r) add(r);
    };

    const MeshFamily poly2d[4] = {MeshFamily::Tri, MeshFamily::Quad, MeshFamily::Voro,
                                  MeshFamily::Hex};

    if (name == "tc1-mini") {
        // 2D VEM diffusion, two-region coefficient patterns, rho metric
        def.metric = "rho";
        for (int fam = 0; fam < 4; ++fam) {
            clamp_r(1, 6, [&](int r) {
                SuiteProblemSpec s;
                s.suite = name;
                s.family = poly2d[fam];
                s.refinement = r;
                s.disc = "vem1";
                s.pattern = suitedetail::kTwoRegion[(fam + r) % 4];
                s.eps = 1.0 + ((fam + 2 * r) % 4);  // jumps of 10..10^4
                def.problems.push_back(s);
            });
        }
    } else if (name == "tc2-mini") {
        // 2D DG diffusion, heterogeneous cellwise kappa
        def.metric = "time";
        for (int fam = 0; fam < 4; ++fam) {
            clamp_r(1, 3, [&](int r) {
                for (int p : {1, 2, 3}) {
                    SuiteProblemSpec s;
                    s.suite = name;
                    s.family = poly2d[fam];
                    s.refinement = r;
                    s.disc = "dg";
                    s.p = p;
                    s.pattern = CoeffPattern::RandomCellwise;
                    s.eps = (p + r) % 3 == 0 ? 1.0 : ((p + r) % 3 == 1 ? 2.0 : 4.0);
                    def.problems.push_back(s);
                }
            });
        }
    } else if (name == "tc3-mini") {
        // 3D DG diffusion on Cartesian grids
        def.metric = "time";
        clamp_r(1, 3, [&](int r) {
            for (int p : {1, 2}) {
                SuiteProblemSpec s;
                s.suite = name;
                s.family = MeshFamily::Cart3d;
                s.refinement = r;
                s.disc = "dg";
                s.p = p;
                s.pattern = CoeffPattern::RandomCellwise;
                s.eps = (p + r) % 2 ? 2.0 : 4.0;
                def.problems.push_back(s);
            }
        });
    } else if (name == "tc4-mini") {
        // 2D DG elasticity
        def.metric = "time";
        for (int fam = 0; fam < 4; ++fam) {
            clamp_r(1, 2, [&](int r) {
                for (int p : {1, 2}) {
                    SuiteProblemSpec s;
                    s.suite = name;
                    s.family = poly2d[fam];
                    s.refinement = r;
                    s.disc = "dg-elasticity";
                    s.p = p;
                    s.pattern = CoeffPattern::RandomCellwise;
                    s.eps = (fam + p + r) % 3 == 0 ? 1.0 : ((fam + p + r) % 3 == 1 ? 2.0 : 4.0);
                    s.gamma_lo = 4.0;  // 2D elasticity penalty range
                    def.problems.push_back(s);
                }
            });
        }
    } else if (name == "tc5-mini") {
        // 3D DG elasticity on Cartesian grids
        def.metric = "time";
        clamp_r(1, 2, [&](int r) {
            for (int p : {1, 2}) {
                SuiteProblemSpec s;
                s.suite = name;
                s.family = MeshFamily::Cart3d;
                s.refinement = r;
                s.disc = "dg-elasticity";
                s.p = p;
                s.pattern = CoeffPattern::RandomCellwise;
                s.eps = (p + r) % 2 ? 2.0 : 4.0;
                def.problems.push_back(s);
            }
        });
    } else if (name == "dg-hetero") {
        // strongly heterogeneous DG diffusion run under the production solver
        // protocol (forward smoother application inside CG); the default
        // parameters fail on most of these while the l1/FCF family survives
        def.metric = "rho";
        def.symmetric_precond = false;
        auto add = [&](MeshFamily fam, int r, int p) {
            if (r < r_min || r > r_max) return;
            SuiteProblemSpec s;
            s.suite = name;
            s.family = fam;
            s.refinement = r;
            s.disc = "dg";
            s.p = p;
            s.pattern = CoeffPattern::RandomCellwise;
            s.eps = 4.0;
            def.problems.push_back(s);
        };
        for (MeshFamily fam : poly2d)
            for (int r : {1, 2, 3}) add(fam, r, 2);
        for (MeshFamily fam : {MeshFamily::Quad, MeshFamily::Voro, MeshFamily::Hex})
            for (int r : {1, 2}) add(fam, r, 3);
        add(MeshFamily::Tri, 3, 1);
        add(MeshFamily::Hex, 3, 1);
    } else if (name == "poisson-sanity") {
        def.metric = "rho";
        clamp_r(1, 5, [&](int r) {
            SuiteProblemSpec s;
            s.suite = name;
            s.family = MeshFamily::Tri;
            s.refinement = r;
            s.disc = "fem";
            s.pattern = CoeffPattern::Checkerboard;
            s.eps = 0.0;
            def.problems.push_back(s);
        });
    } else {
        throw std::invalid_argument("unknown suite: " + name);
    }
    return def;
}

} // namespace amgtune
