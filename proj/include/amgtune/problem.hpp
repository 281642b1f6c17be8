#pragma once

#include <sstream>
#include <string>

#include "amgtune/dense.hpp"
#include "amgtune/sparse.hpp"

namespace amgtune {

/// A generated linear system A u = f with the metadata the dataset pipeline
/// and the surrogate need.
struct ProblemInstance {
    std::string id;
    SparseMatrix matrix;
    DenseVector rhs;

    int dim = 2;
    int p = 1;
    std::string discretization;  // FEM-P1 | DG | VEM1
    std::string mesh_family;
    std::string pattern;
    double eps = 0.0;
    double gamma = 0.0;

    index_t n() const { return matrix.n(); }
    index_t nnz() const { return matrix.nnz(); }

    std::string metadata_record() const {
        std::ostringstream os;
        os.precision(17);
        os << "id=" << id << " n=" << n() << " nnz=" << nnz() << " dim=" << dim << " p=" << p
           << " disc=" << discretization << " mesh=" << mesh_family << " pattern=" << pattern
           << " eps=" << eps << " gamma=" << gamma;
        return os.str();
    }
};

/// Shared SPD spot-check: dense Cholesky on systems small enough to afford it.
inline void spd_spot_check(const SparseMatrix& a, const std::string& what,
                           index_t limit = 2000) {
    if (a.n() > limit) return;
    if (!cholesky_spd_check(a.to_dense()))
        throw std::runtime_error(what + ": matrix failed the SPD spot-check" +
                                 (what.find("DG") != std::string::npos
                                      ? " (penalty gamma too small; increase gamma)"
                                      : ""));
}

} // namespace amgtune
