#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "amgtune/sparse.hpp"

namespace amgtune {

/// m x m x 4 feature image of a sparse matrix. Channels: 0 max positive
/// entry, 1 max negative magnitude, 2 entry sum, 3 stored-entry count.
struct PooledTensor {
    int m = 0;
    bool normalized = false;
    std::vector<double> data;  // channel-major, row-major within a channel

    double& at(int f, int i, int j) { return data[(static_cast<std::size_t>(f) * m + i) * m + j]; }
    double at(int f, int i, int j) const {
        return data[(static_cast<std::size_t>(f) * m + i) * m + j];
    }
    std::size_t size() const { return data.size(); }
};

/// Block index of row/column r when n points are split into m pooling blocks:
/// the leading (n mod m) blocks absorb the remainder with q+1 points each.
inline index_t pooling_block(index_t r, index_t q, index_t rem) {
    const index_t t = (q + 1) * rem;
    return r < t ? r / (q + 1) : (r - t) / q + rem;
}

/// Pools a sparse matrix into the m x m x 4 image in one pass over the
/// stored entries (O(nnz)). Trailing blocks stay zero when m > n.
inline PooledTensor pool(const SparseMatrix& a, int m) {
    if (m < 1) throw std::invalid_argument("pooling size must be positive");
    if (!a.is_square()) throw std::invalid_argument("pooling expects a square matrix");
    PooledTensor v;
    v.m = m;
    v.data.assign(static_cast<std::size_t>(m) * m * 4, 0.0);
    const index_t n = a.n();
    const index_t q = n / m;
    const index_t rem = n % m;
    for (index_t r = 0; r < n; ++r) {
        const index_t bi = pooling_block(r, q, rem);
        auto cols = a.row_cols(r);
        auto vals = a.row_vals(r);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const index_t bj = pooling_block(cols[k], q, rem);
            const double val = vals[k];
            double& c1 = v.at(0, bi, bj);
            double& c2 = v.at(1, bi, bj);
            c1 = std::max(c1, std::max(0.0, val));
            c2 = std::max(c2, std::max(0.0, -val));
            v.at(2, bi, bj) += val;
            v.at(3, bi, bj) += 1.0;
        }
    }
    return v;
}

/// Logarithmic normalization: per channel, v -> sign(v) log(|v|+1) / max
/// log(|v|+1). Zeros stay zero; an all-zero channel is left untouched.
inline PooledTensor normalize(PooledTensor v) {
    if (v.normalized) throw std::logic_error("tensor is already normalized");
    const std::size_t plane = static_cast<std::size_t>(v.m) * v.m;
    for (int f = 0; f < 4; ++f) {
        double maxlog = 0.0;
        for (std::size_t k = 0; k < plane; ++k)
            maxlog = std::max(maxlog, std::log(std::abs(v.data[f * plane + k]) + 1.0));
        if (maxlog == 0.0) continue;
        for (std::size_t k = 0; k < plane; ++k) {
            double& x = v.data[f * plane + k];
            double s = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
            x = s * std::log(std::abs(x) + 1.0) / maxlog;
        }
    }
    v.normalized = true;
    return v;
}

// --- binary dump -----------------------------------------------------------

/// Layout: 8 magic bytes "AMGPOOL1", uint32 m, uint32 f(=4), then m*m*f
/// little-endian 32-bit floats, row-major by channel.
inline void write_pooled(const PooledTensor& v, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write("AMGPOOL1", 8);
    std::uint32_t m = static_cast<std::uint32_t>(v.m), f = 4;
    out.write(reinterpret_cast<const char*>(&m), 4);
    out.write(reinterpret_cast<const char*>(&f), 4);
    for (double x : v.data) {
        float xf = static_cast<float>(x);
        out.write(reinterpret_cast<const char*>(&xf), 4);
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

inline PooledTensor read_pooled(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "AMGPOOL1", 8) != 0)
        throw std::runtime_error(path + ": not a pooled-tensor file");
    std::uint32_t m = 0, f = 0;
    in.read(reinterpret_cast<char*>(&m), 4);
    in.read(reinterpret_cast<char*>(&f), 4);
    if (!in || f != 4 || m == 0) throw std::runtime_error(path + ": malformed pooled-tensor header");
    PooledTensor v;
    v.m = static_cast<int>(m);
    v.data.resize(static_cast<std::size_t>(m) * m * 4);
    for (double& x : v.data) {
        float xf = 0.0f;
        in.read(reinterpret_cast<char*>(&xf), 4);
        x = xf;
    }
    if (!in) throw std::runtime_error(path + ": truncated pooled-tensor file");
    return v;
}

} // namespace amgtune
