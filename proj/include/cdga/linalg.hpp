#pragma once

#include "cdga/rational.hpp"

#include <optional>
#include <vector>

namespace cdga {

using Row = std::vector<Rational>;
using Matrix = std::vector<Row>;

// In-place row echelon reduction; returns the rank.  Pivoting is
// deterministic: columns left to right, first row with a nonzero entry.
inline int row_reduce(Matrix& m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
        std::size_t sel = pivot_row;
        while (sel < rows && m[sel][col] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[sel], m[pivot_row]);
        const Rational inv = Rational(1) / m[pivot_row][col];
        for (std::size_t c = col; c < cols; ++c) m[pivot_row][c] *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pivot_row || m[r][col] == 0) continue;
            const Rational factor = m[r][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= factor * m[pivot_row][c];
        }
        ++pivot_row;
    }
    return static_cast<int>(pivot_row);
}

inline int matrix_rank(Matrix m) { return row_reduce(m); }

// Exact solution of A·x = b, free variables pinned to zero; nullopt when
// inconsistent.  A is rows × cols, row-major.
inline std::optional<Row> solve_linear(Matrix a, const Row& b) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    for (std::size_t r = 0; r < rows; ++r) a[r].push_back(b[r]);
    if (rows == 0) return Row(cols, Rational(0));

    row_reduce(a);
    Row x(cols, Rational(0));
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t lead = 0;
        while (lead < cols && a[r][lead] == 0) ++lead;
        if (lead == cols) {
            if (a[r][cols] != 0) return std::nullopt;
            continue;
        }
        x[lead] = a[r][cols];
    }
    return x;
}

}  // namespace cdga
