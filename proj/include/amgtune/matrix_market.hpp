#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "amgtune/sparse.hpp"

namespace amgtune {

namespace detail {

inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace detail

/// Matrix Market coordinate reader: real, general or symmetric, 1-based.
/// Symmetric files are expanded to full storage. Malformed headers,
/// out-of-range indices and duplicate entries are rejected.
inline SparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || detail::lower(object) != "matrix")
        throw std::runtime_error(path + ": malformed MatrixMarket header");
    format = detail::lower(format);
    field = detail::lower(field);
    symmetry = detail::lower(symmetry);
    if (format != "coordinate" || (field != "real" && field != "integer"))
        throw std::runtime_error(path + ": unsupported MatrixMarket type " + format + " " + field);
    if (symmetry != "general" && symmetry != "symmetric")
        throw std::runtime_error(path + ": unsupported symmetry " + symmetry);

    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream ds(line);
    long rows = 0, cols = 0, nnz = 0;
    if (!(ds >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
        throw std::runtime_error(path + ": malformed size line");

    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(nnz));
    for (long k = 0; k < nnz; ++k) {
        long i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v)) throw std::runtime_error(path + ": truncated entry list");
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw std::runtime_error(path + ": entry index out of range");
        t.push_back({static_cast<index_t>(i - 1), static_cast<index_t>(j - 1), v});
        if (symmetry == "symmetric" && i != j)
            t.push_back({static_cast<index_t>(j - 1), static_cast<index_t>(i - 1), v});
    }
    std::vector<std::pair<index_t, index_t>> keys;
    keys.reserve(t.size());
    for (const Triplet& e : t) keys.emplace_back(e.row, e.col);
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
        throw std::runtime_error(path + ": duplicate entries");
    return SparseMatrix::from_triplets(static_cast<index_t>(rows), static_cast<index_t>(cols),
                                       std::move(t));
}

/// Writer; uses the symmetric format (lower triangle) when requested, after
/// verifying the matrix really is symmetric. Values carry 17 significant
/// digits so a write/read round trip is exact.
inline void write_matrix_market(const SparseMatrix& a, const std::string& path,
                                bool symmetric_format = false) {
    if (symmetric_format && !a.is_symmetric())
        throw std::runtime_error("symmetric Matrix Market output requested for a non-symmetric matrix");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "%%MatrixMarket matrix coordinate real "
        << (symmetric_format ? "symmetric" : "general") << "\n";
    std::vector<Triplet> t = a.triplets();
    if (symmetric_format) {
        std::erase_if(t, [](const Triplet& e) { return e.row < e.col; });
    }
    out << a.rows() << " " << a.cols() << " " << t.size() << "\n";
    for (const Triplet& e : t)
        out << (e.row + 1) << " " << (e.col + 1) << " " << detail::format_full(e.value) << "\n";
    if (!out) throw std::runtime_error("write failed for " + path);
}

inline DenseVector read_matrix_market_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || detail::lower(format) != "array")
        throw std::runtime_error(path + ": malformed vector header");
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream ds(line);
    long rows = 0, cols = 0;
    if (!(ds >> rows >> cols) || cols != 1)
        throw std::runtime_error(path + ": vector size line must be 'n 1'");
    DenseVector v(static_cast<std::size_t>(rows));
    for (long i = 0; i < rows; ++i)
        if (!(in >> v[i])) throw std::runtime_error(path + ": truncated vector");
    return v;
}

inline void write_matrix_market_vector(const DenseVector& v, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "%%MatrixMarket matrix array real general\n";
    out << v.size() << " 1\n";
    for (double x : v) out << detail::format_full(x) << "\n";
    if (!out) throw std::runtime_error("write failed for " + path);
}

} // namespace amgtune
