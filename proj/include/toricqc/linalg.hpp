#pragma once

// Exact linear algebra: Gaussian elimination over Q and Smith normal form
// over Z. Matrices are row-major vectors of rows; sizes are tiny (k <= a few).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "toricqc/error.hpp"
#include "toricqc/rational.hpp"

namespace toricqc {

using QMatrix = std::vector<QVector>;
using ZMatrix = std::vector<std::vector<Z>>;

namespace detail {

/// In-place reduced row echelon form; returns pivot columns.
inline std::vector<std::size_t> rref(QMatrix& m, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && m[sel][col] == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[sel], m[row]);
        Q inv = Q(1) / m[row][col];
        for (auto& x : m[row]) x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0) continue;
            Q f = m[r][col];
            for (std::size_t c = 0; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace detail

inline std::size_t rank(QMatrix m) {
    if (m.empty()) return 0;
    return detail::rref(m, m.front().size()).size();
}

/// Rank of a set of vectors (given as rows).
inline std::size_t rank_of_vectors(const std::vector<QVector>& vs) { return rank(vs); }

/// Solves sum_i a_i * columns[i] = target. Returns the solution only when it
/// exists and is unique.
inline std::optional<QVector> solve_unique(const std::vector<QVector>& columns, const QVector& target) {
    const std::size_t n = columns.size();
    const std::size_t dim = target.size();
    QMatrix aug(dim, QVector(n + 1));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug[r][c] = columns[c].at(r);
        aug[r][n] = target[r];
    }
    auto piv = detail::rref(aug, n + 1);
    if (!piv.empty() && piv.back() == n) return std::nullopt;  // inconsistent
    if (piv.size() != n) return std::nullopt;                  // not unique
    QVector sol(n);
    for (std::size_t i = 0; i < n; ++i) sol[piv[i]] = aug[i][n];
    return sol;
}

inline std::optional<QMatrix> inverse(const QMatrix& a) {
    const std::size_t n = a.size();
    QMatrix aug(n, QVector(2 * n));
    for (std::size_t r = 0; r < n; ++r) {
        if (a[r].size() != n) throw Error(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
        for (std::size_t c = 0; c < n; ++c) aug[r][c] = a[r][c];
        aug[r][n + r] = 1;
    }
    auto piv = detail::rref(aug, n);
    if (piv.size() != n) return std::nullopt;
    QMatrix inv(n, QVector(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv[r][c] = aug[r][n + c];
    return inv;
}

/// Smith normal form D = U * M * V of an integer matrix. Only V is kept since
/// stabilizer computations need the column transform.
struct SmithForm {
    std::vector<Z> diagonal;  ///< min(rows, cols) entries, nonnegative
    ZMatrix column_transform; ///< V, unimodular, cols x cols
};

inline SmithForm smith_normal_form(ZMatrix m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    ZMatrix v(cols, std::vector<Z>(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) v[i][i] = 1;

    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (auto& r : m) std::swap(r[a], r[b]);
        for (auto& r : v) std::swap(r[a], r[b]);
    };
    // col[b] -= f * col[a]
    auto axpy_col = [&](std::size_t a, std::size_t b, const Z& f) {
        for (auto& r : m) r[b] -= f * r[a];
        for (auto& r : v) r[b] -= f * r[a];
    };

    const std::size_t steps = std::min(rows, cols);
    for (std::size_t t = 0; t < steps; ++t) {
        for (;;) {
            // pivot: smallest nonzero |entry| in the lower-right block
            std::size_t pr = rows, pc = cols;
            for (std::size_t r = t; r < rows; ++r)
                for (std::size_t c = t; c < cols; ++c)
                    if (m[r][c] != 0 && (pr == rows || abs(m[r][c]) < abs(m[pr][pc]))) pr = r, pc = c;
            if (pr == rows) break;
            std::swap(m[t], m[pr]);
            swap_cols(t, pc);

            bool clean = true;
            for (std::size_t r = t + 1; r < rows; ++r) {
                Z f = m[r][t] / m[t][t];
                if (f != 0)
                    for (std::size_t c = 0; c < cols; ++c) m[r][c] -= f * m[t][c];
                if (m[r][t] != 0) clean = false;
            }
            for (std::size_t c = t + 1; c < cols; ++c) {
                Z f = m[t][c] / m[t][t];
                if (f != 0) axpy_col(t, c, f);
                if (m[t][c] != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility condition d_t | every remaining entry
            bool divides_all = true;
            for (std::size_t r = t + 1; r < rows && divides_all; ++r)
                for (std::size_t c = t + 1; c < cols; ++c)
                    if (m[r][c] % m[t][t] != 0) {
                        for (std::size_t cc = 0; cc < cols; ++cc) m[t][cc] += m[r][cc];
                        divides_all = false;
                        break;
                    }
            if (divides_all) break;
        }
    }
    SmithForm out;
    for (std::size_t t = 0; t < steps; ++t) out.diagonal.push_back(abs(m[t][t]));
    out.column_transform = std::move(v);
    return out;
}

}  // namespace toricqc
