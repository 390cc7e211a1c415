#pragma once

/**
 * @file linalg.hpp
 * @brief Windowed matrices and vectors over the basis grid of l2, with the
 * operator, Hilbert-Schmidt and nuclear norms.
 *
 * Indices are absolute and 1-based on the unilateral grid (l2 over N). On the
 * bilateral grid (l2 over Z) offsets may be zero or negative. A WindowedMatrix
 * stores a dense block; every entry outside the block is exactly zero.
 *
 * Singular values come from a one-sided (Hestenes) Jacobi sweep on the
 * columns of A or A*, whichever has fewer columns.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace commutant_lab {

using Complex = std::complex<double>;
using Index = std::int64_t;

enum class Grid { Unilateral, Bilateral };

inline std::string_view to_string(Grid grid) {
    return grid == Grid::Unilateral ? "unilateral" : "bilateral";
}

enum class NormKind { Operator, HilbertSchmidt, Nuclear };

inline std::string_view to_string(NormKind kind) {
    switch (kind) {
        case NormKind::Operator: return "op";
        case NormKind::HilbertSchmidt: return "hs";
        case NormKind::Nuclear: return "nuclear";
    }
    return "op";
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(Complex z, const char* where) {
    if (!is_finite(z)) fail(ErrorKind::NonFinite, std::string("non-finite value in ") + where);
}

namespace detail {

inline void check_grid_offset(Grid grid, Index offset, std::size_t size, const char* what) {
    if (grid == Grid::Unilateral && size > 0 && offset < 1)
        fail(ErrorKind::DomainError, std::string(what) + ": unilateral index must be >= 1");
}

inline void check_same_grid(Grid a, Grid b) {
    if (a != b) fail(ErrorKind::BilateralMismatch, "operands live on different grids");
}

}  // namespace detail

/// Finitely supported vector; entries[k] is the coordinate at index offset + k.
class Vec2 {
public:
    Vec2() = default;

    Vec2(Index offset, std::vector<Complex> entries, Grid grid = Grid::Unilateral)
        : offset_(offset), entries_(std::move(entries)), grid_(grid) {
        detail::check_grid_offset(grid_, offset_, entries_.size(), "Vec2");
        for (Complex z : entries_) require_finite(z, "Vec2");
        if (entries_.empty() && grid_ == Grid::Unilateral) offset_ = 1;
    }

    static Vec2 basis(Index j, Grid grid = Grid::Unilateral) { return Vec2(j, {Complex(1.0)}, grid); }

    Index offset() const noexcept { return offset_; }
    Index end() const noexcept { return offset_ + static_cast<Index>(entries_.size()); }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    Grid grid() const noexcept { return grid_; }
    std::span<const Complex> entries() const noexcept { return entries_; }

    Complex operator[](Index i) const noexcept {
        if (i < offset_ || i >= end()) return {};
        return entries_[static_cast<std::size_t>(i - offset_)];
    }

    double norm() const {
        double s = 0.0;
        for (Complex z : entries_) s += std::norm(z);
        return std::sqrt(s);
    }

    /// Shrinks to the bounding range of exactly nonzero entries.
    Vec2 trimmed() const {
        std::size_t lo = 0;
        std::size_t hi = entries_.size();
        while (lo < hi && entries_[lo] == Complex{}) ++lo;
        while (hi > lo && entries_[hi - 1] == Complex{}) --hi;
        if (lo == hi) return Vec2(grid_ == Grid::Unilateral ? 1 : 0, {}, grid_);
        return Vec2(offset_ + static_cast<Index>(lo),
                    std::vector<Complex>(entries_.begin() + static_cast<std::ptrdiff_t>(lo),
                                         entries_.begin() + static_cast<std::ptrdiff_t>(hi)),
                    grid_);
    }

    friend Vec2 operator+(const Vec2& a, const Vec2& b) { return combine(a, b, 1.0); }
    friend Vec2 operator-(const Vec2& a, const Vec2& b) { return combine(a, b, -1.0); }
    friend Vec2 operator*(Complex c, const Vec2& v) {
        std::vector<Complex> out(v.entries_.begin(), v.entries_.end());
        for (Complex& z : out) z *= c;
        return Vec2(v.offset_, std::move(out), v.grid_);
    }

    /// Exact comparison after trimming both sides.
    friend bool operator==(const Vec2& a, const Vec2& b) {
        if (a.grid_ != b.grid_) return false;
        Vec2 ta = a.trimmed();
        Vec2 tb = b.trimmed();
        return ta.entries_ == tb.entries_ && (ta.empty() || ta.offset_ == tb.offset_);
    }

private:
    static Vec2 combine(const Vec2& a, const Vec2& b, double sign) {
        detail::check_same_grid(a.grid_, b.grid_);
        if (a.empty()) return Complex(sign) * b;
        if (b.empty()) return a;
        Index lo = std::min(a.offset_, b.offset_);
        Index hi = std::max(a.end(), b.end());
        std::vector<Complex> out(static_cast<std::size_t>(hi - lo));
        for (Index i = lo; i < hi; ++i) {
            Complex bi = b[i];
            out[static_cast<std::size_t>(i - lo)] = sign > 0 ? a[i] + bi : a[i] - bi;
        }
        return Vec2(lo, std::move(out), a.grid_);
    }

    Index offset_ = 1;
    std::vector<Complex> entries_;
    Grid grid_ = Grid::Unilateral;
};

/// Half-open index box [row_begin, row_end) x [col_begin, col_end).
struct Window {
    Index row_begin = 1;
    Index row_end = 1;
    Index col_begin = 1;
    Index col_end = 1;

    bool empty() const noexcept { return row_end <= row_begin || col_end <= col_begin; }
    Index rows() const noexcept { return std::max<Index>(0, row_end - row_begin); }
    Index cols() const noexcept { return std::max<Index>(0, col_end - col_begin); }

    bool contains(Index i, Index j) const noexcept {
        return i >= row_begin && i < row_end && j >= col_begin && j < col_end;
    }

    friend bool operator==(const Window&, const Window&) = default;
};

inline Window hull(const Window& a, const Window& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return {std::min(a.row_begin, b.row_begin), std::max(a.row_end, b.row_end),
            std::min(a.col_begin, b.col_begin), std::max(a.col_end, b.col_end)};
}

class WindowedMatrix {
public:
    WindowedMatrix() = default;

    WindowedMatrix(Index row_offset, Index col_offset, std::size_t rows, std::size_t cols,
                   Grid grid = Grid::Unilateral)
        : row_offset_(row_offset), col_offset_(col_offset), rows_(rows), cols_(cols),
          data_(rows * cols), grid_(grid) {
        detail::check_grid_offset(grid_, row_offset_, rows_ * cols_, "WindowedMatrix rows");
        detail::check_grid_offset(grid_, col_offset_, rows_ * cols_, "WindowedMatrix cols");
    }

    explicit WindowedMatrix(const Window& w, Grid grid = Grid::Unilateral)
        : WindowedMatrix(w.row_begin, w.col_begin, static_cast<std::size_t>(w.rows()),
                         static_cast<std::size_t>(w.cols()), grid) {}

    static WindowedMatrix from_rows(Index row_offset, Index col_offset,
                                    const std::vector<std::vector<Complex>>& rows,
                                    Grid grid = Grid::Unilateral) {
        std::size_t ncols = rows.empty() ? 0 : rows.front().size();
        WindowedMatrix m(row_offset, col_offset, rows.size(), ncols, grid);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != ncols) fail(ErrorKind::DomainError, "ragged rows");
            for (std::size_t c = 0; c < ncols; ++c) {
                require_finite(rows[r][c], "WindowedMatrix");
                m.data_[r * ncols + c] = rows[r][c];
            }
        }
        return m;
    }

    /// Matrix unit E_{i,j}: the operator x -> <x, e_j> e_i.
    static WindowedMatrix unit(Index i, Index j, Grid grid = Grid::Unilateral) {
        WindowedMatrix m(i, j, 1, 1, grid);
        m.data_[0] = 1.0;
        return m;
    }

    static WindowedMatrix diagonal(Index offset, const std::vector<Complex>& values,
                                   Grid grid = Grid::Unilateral) {
        WindowedMatrix m(offset, offset, values.size(), values.size(), grid);
        for (std::size_t k = 0; k < values.size(); ++k) {
            require_finite(values[k], "WindowedMatrix::diagonal");
            m.data_[k * values.size() + k] = values[k];
        }
        return m;
    }

    Index row_offset() const noexcept { return row_offset_; }
    Index col_offset() const noexcept { return col_offset_; }
    Index row_end() const noexcept { return row_offset_ + static_cast<Index>(rows_); }
    Index col_end() const noexcept { return col_offset_ + static_cast<Index>(cols_); }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
    Grid grid() const noexcept { return grid_; }
    Window window() const noexcept { return {row_offset_, row_end(), col_offset_, col_end()}; }
    std::span<const Complex> data() const noexcept { return data_; }

    bool in_window(Index i, Index j) const noexcept { return window().contains(i, j); }

    /// Absolute-index read; zero outside the window.
    Complex operator()(Index i, Index j) const noexcept {
        if (!in_window(i, j)) return {};
        return data_[local(i, j)];
    }

    void set(Index i, Index j, Complex value) {
        if (!in_window(i, j)) fail(ErrorKind::DomainError, "set outside window");
        require_finite(value, "WindowedMatrix::set");
        data_[local(i, j)] = value;
    }

    void add(Index i, Index j, Complex value) {
        if (!in_window(i, j)) fail(ErrorKind::DomainError, "add outside window");
        data_[local(i, j)] += value;
    }

    Vec2 column(Index j) const {
        std::vector<Complex> out(rows_);
        if (j >= col_offset_ && j < col_end())
            for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + static_cast<std::size_t>(j - col_offset_)];
        return Vec2(rows_ ? row_offset_ : default_offset(), std::move(out), grid_);
    }

    Vec2 row(Index i) const {
        std::vector<Complex> out(cols_);
        if (i >= row_offset_ && i < row_end())
            for (std::size_t c = 0; c < cols_; ++c) out[c] = data_[static_cast<std::size_t>(i - row_offset_) * cols_ + c];
        return Vec2(cols_ ? col_offset_ : default_offset(), std::move(out), grid_);
    }

    /// Re-embeds into another window; refuses to drop a nonzero entry.
    WindowedMatrix rewindowed(const Window& w) const {
        WindowedMatrix out(w, grid_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                Complex z = data_[r * cols_ + c];
                if (z == Complex{}) continue;
                Index i = row_offset_ + static_cast<Index>(r);
                Index j = col_offset_ + static_cast<Index>(c);
                if (!w.contains(i, j)) fail(ErrorKind::DomainError, "rewindow would drop a nonzero entry");
                out.data_[out.local(i, j)] = z;
            }
        }
        return out;
    }

    /// Keeps only the entries inside w (an explicit projection, never implicit).
    WindowedMatrix clipped(const Window& w) const {
        WindowedMatrix out(w, grid_);
        for (Index i = w.row_begin; i < w.row_end; ++i)
            for (Index j = w.col_begin; j < w.col_end; ++j) out.data_[out.local(i, j)] = (*this)(i, j);
        return out;
    }

    /// Canonical form: bounding box of entries that are exactly nonzero.
    WindowedMatrix trimmed() const {
        Index r0 = row_end(), r1 = row_offset_ - 1, c0 = col_end(), c1 = col_offset_ - 1;
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                if (data_[r * cols_ + c] == Complex{}) continue;
                Index i = row_offset_ + static_cast<Index>(r);
                Index j = col_offset_ + static_cast<Index>(c);
                r0 = std::min(r0, i);
                r1 = std::max(r1, i);
                c0 = std::min(c0, j);
                c1 = std::max(c1, j);
            }
        }
        if (r1 < r0) return WindowedMatrix(default_offset(), default_offset(), 0, 0, grid_);
        return clipped({r0, r1 + 1, c0, c1 + 1});
    }

    friend bool operator==(const WindowedMatrix& a, const WindowedMatrix& b) {
        if (a.grid_ != b.grid_) return false;
        WindowedMatrix ta = a.trimmed();
        WindowedMatrix tb = b.trimmed();
        if (ta.empty() || tb.empty()) return ta.empty() && tb.empty();
        return ta.window() == tb.window() && ta.data_ == tb.data_;
    }

    friend WindowedMatrix operator+(const WindowedMatrix& a, const WindowedMatrix& b) {
        return combine(a, b, false);
    }
    friend WindowedMatrix operator-(const WindowedMatrix& a, const WindowedMatrix& b) {
        return combine(a, b, true);
    }
    friend WindowedMatrix operator*(Complex c, const WindowedMatrix& a) {
        WindowedMatrix out = a;
        for (Complex& z : out.data_) z *= c;
        return out;
    }

private:
    std::size_t local(Index i, Index j) const noexcept {
        return static_cast<std::size_t>(i - row_offset_) * cols_ + static_cast<std::size_t>(j - col_offset_);
    }

    Index default_offset() const noexcept { return grid_ == Grid::Unilateral ? 1 : 0; }

    static WindowedMatrix combine(const WindowedMatrix& a, const WindowedMatrix& b, bool subtract) {
        detail::check_same_grid(a.grid_, b.grid_);
        Window w = hull(a.empty() ? Window{} : a.window(), b.empty() ? Window{} : b.window());
        if (a.empty() && b.empty()) return WindowedMatrix(a.default_offset(), a.default_offset(), 0, 0, a.grid_);
        WindowedMatrix out(w, a.grid_);
        for (Index i = w.row_begin; i < w.row_end; ++i)
            for (Index j = w.col_begin; j < w.col_end; ++j)
                out.data_[out.local(i, j)] = subtract ? a(i, j) - b(i, j) : a(i, j) + b(i, j);
        return out;
    }

    Index row_offset_ = 1;
    Index col_offset_ = 1;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
    Grid grid_ = Grid::Unilateral;
};

/// Largest entry modulus of A - B over the union window.
inline double max_abs_diff(const WindowedMatrix& a, const WindowedMatrix& b) {
    Window w = hull(a.empty() ? Window{} : a.window(), b.empty() ? Window{} : b.window());
    double m = 0.0;
    for (Index i = w.row_begin; i < w.row_end; ++i)
        for (Index j = w.col_begin; j < w.col_end; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

inline double max_abs(const WindowedMatrix& a) {
    double m = 0.0;
    for (Complex z : a.data()) m = std::max(m, std::abs(z));
    return m;
}

/// The operator x -> <x, v> u, so entry (i,j) = u_i conj(v_j).
inline WindowedMatrix rank_one(const Vec2& u, const Vec2& v) {
    detail::check_same_grid(u.grid(), v.grid());
    WindowedMatrix out(u.offset(), v.offset(), u.size(), v.size(), u.grid());
    for (Index i = u.offset(); i < u.end(); ++i)
        for (Index j = v.offset(); j < v.end(); ++j) out.set(i, j, u[i] * std::conj(v[j]));
    return out;
}

inline WindowedMatrix adjoint(const WindowedMatrix& a) {
    WindowedMatrix out(a.col_offset(), a.row_offset(), a.cols(), a.rows(), a.grid());
    for (Index i = a.row_offset(); i < a.row_end(); ++i)
        for (Index j = a.col_offset(); j < a.col_end(); ++j) out.set(j, i, std::conj(a(i, j)));
    return out;
}

/// Exact product of two finite matrices on the same grid.
inline WindowedMatrix matmul(const WindowedMatrix& a, const WindowedMatrix& b) {
    detail::check_same_grid(a.grid(), b.grid());
    WindowedMatrix out(a.row_offset(), b.col_offset(), a.rows(), b.cols(), a.grid());
    Index k0 = std::max(a.col_offset(), b.row_offset());
    Index k1 = std::min(a.col_end(), b.row_end());
    for (Index i = a.row_offset(); i < a.row_end(); ++i) {
        for (Index j = b.col_offset(); j < b.col_end(); ++j) {
            Complex s{};
            for (Index k = k0; k < k1; ++k) s += a(i, k) * b(k, j);
            out.set(i, j, s);
        }
    }
    return out;
}

/// Hilbert-Schmidt pairing <A, B> = tr(B* A) = sum_{i,j} A_{ij} conj(B_{ij}).
inline Complex hs_inner(const WindowedMatrix& a, const WindowedMatrix& b) {
    Complex s{};
    for (Index i = a.row_offset(); i < a.row_end(); ++i)
        for (Index j = a.col_offset(); j < a.col_end(); ++j) s += a(i, j) * std::conj(b(i, j));
    return s;
}

namespace detail {

/// One-sided Jacobi on the column set `cols` (each of length m); returns the
/// column norms after orthogonalization, i.e. the singular values.
inline std::vector<double> jacobi_singular_values(std::vector<std::vector<Complex>> cols) {
    constexpr double kOffTol = 1e-12;
    constexpr double kPairTol = 1e-15;
    constexpr int kMaxSweeps = 80;
    const std::size_t n = cols.size();
    auto dot = [](const std::vector<Complex>& x, const std::vector<Complex>& y) {
        Complex s{};
        for (std::size_t k = 0; k < x.size(); ++k) s += std::conj(x[k]) * y[k];
        return s;
    };
    auto sqnorm = [](const std::vector<Complex>& x) {
        double s = 0.0;
        for (Complex z : x) s += std::norm(z);
        return s;
    };
    double hs_sq = 0.0;
    for (const auto& col : cols) hs_sq += sqnorm(col);

    // Stops once the off-diagonal Gram mass seen during a sweep is below
    // kOffTol ||A||_HS^2; that sweep has already rotated it further down.
    bool converged = n < 2 || hs_sq == 0.0;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        double off_sq = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = sqnorm(cols[p]);
                double beta = sqnorm(cols[q]);
                Complex gamma = dot(cols[p], cols[q]);
                double g = std::abs(gamma);
                off_sq += g * g;
                if (g == 0.0 || g <= kPairTol * std::sqrt(alpha * beta)) continue;
                Complex phase = gamma / g;  // rotate column q so the pairing is real
                double zeta = (beta - alpha) / (2.0 * g);
                double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (std::size_t k = 0; k < cols[p].size(); ++k) {
                    Complex xp = cols[p][k];
                    Complex xq = cols[q][k] * std::conj(phase);
                    cols[p][k] = c * xp - s * xq;
                    cols[q][k] = s * xp + c * xq;
                }
            }
        }
        converged = std::sqrt(off_sq) < kOffTol * hs_sq;
    }
    if (!converged) fail(ErrorKind::ConvergenceFailure, "Jacobi SVD sweep cap reached");

    std::vector<double> sv;
    sv.reserve(n);
    for (const auto& col : cols) sv.push_back(std::sqrt(sqnorm(col)));
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

}  // namespace detail

/// Singular values in descending order (min(rows, cols) of them).
inline std::vector<double> singular_values(const WindowedMatrix& a) {
    if (a.empty()) return {};
    const bool by_columns = a.rows() >= a.cols();
    const std::size_t n = by_columns ? a.cols() : a.rows();
    const std::size_t m = by_columns ? a.rows() : a.cols();
    std::vector<std::vector<Complex>> cols(n, std::vector<Complex>(m));
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            Complex z = a.data()[r * a.cols() + c];
            if (by_columns) cols[c][r] = z;
            else cols[r][c] = std::conj(z);
        }
    }
    return detail::jacobi_singular_values(std::move(cols));
}

inline double norm(const WindowedMatrix& a, NormKind kind) {
    if (kind == NormKind::HilbertSchmidt) {
        double s = 0.0;
        for (Complex z : a.data()) s += std::norm(z);
        return std::sqrt(s);
    }
    std::vector<double> sv = singular_values(a);
    if (sv.empty()) return 0.0;
    if (kind == NormKind::Operator) return sv.front();
    double s = 0.0;
    for (double x : sv) s += x;
    return s;
}

}  // namespace commutant_lab
