#pragma once

// Shared generators and brute-force oracles for the unit tests. The oracles
// work on plain dense arrays or Eigen, never on the library's own kernels.

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <commutant_lab.hpp>

namespace testing_support {

using namespace commutant_lab;

using Dense = std::vector<std::vector<Complex>>;

/// Small independent generator, separate from the library's Rng.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}
    double real(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    Complex complex() { return {real(), real()}; }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

    WindowedMatrix matrix(Index r0, Index c0, std::size_t rows, std::size_t cols) {
        WindowedMatrix m(r0, c0, rows, cols);
        for (Index i = r0; i < r0 + static_cast<Index>(rows); ++i)
            for (Index j = c0; j < c0 + static_cast<Index>(cols); ++j) m.set(i, j, complex());
        return m;
    }
    WindowedMatrix square(std::size_t n) { return matrix(1, 1, n, n); }
    Vec2 vector(Index offset, std::size_t n) {
        std::vector<Complex> e(n);
        for (auto& z : e) z = complex();
        return Vec2(offset, e);
    }

private:
    std::mt19937 eng_;
};

inline Eigen::MatrixXcd to_eigen(const WindowedMatrix& a) {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                a(a.row_offset() + static_cast<Index>(r), a.col_offset() + static_cast<Index>(c));
    return m;
}

inline std::vector<double> oracle_singular_values(const WindowedMatrix& a) {
    if (a.empty()) return {};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
    auto s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

inline double oracle_op_norm(const WindowedMatrix& a) {
    auto s = oracle_singular_values(a);
    return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
}

inline std::vector<Complex> oracle_eigenvalues(const WindowedMatrix& a) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(a), false);
    auto v = es.eigenvalues();
    return {v.data(), v.data() + v.size()};
}

/// Largest distance after greedily matching each expected value to an unused computed one.
inline double multiset_gap(const std::vector<Complex>& expected, const std::vector<Complex>& got) {
    if (expected.size() != got.size()) return 1e300;
    std::vector<bool> used(got.size(), false);
    double worst = 0.0;
    for (Complex e : expected) {
        std::size_t best = 0;
        double d = 1e300;
        for (std::size_t k = 0; k < got.size(); ++k)
            if (!used[k] && std::abs(got[k] - e) < d) {
                d = std::abs(got[k] - e);
                best = k;
            }
        used[best] = true;
        worst = std::max(worst, d);
    }
    return worst;
}

/// Dense block of A over rows r0..r1-1, cols c0..c1-1 (absolute indices).
inline Dense block(const WindowedMatrix& a, Index r0, Index r1, Index c0, Index c1) {
    Dense d(static_cast<std::size_t>(r1 - r0), std::vector<Complex>(static_cast<std::size_t>(c1 - c0)));
    for (Index i = r0; i < r1; ++i)
        for (Index j = c0; j < c1; ++j) d[static_cast<std::size_t>(i - r0)][static_cast<std::size_t>(j - c0)] = a(i, j);
    return d;
}

inline Dense dense_mul(const Dense& a, const Dense& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Dense c(n, std::vector<Complex>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][p] * b[p][j];
    return c;
}

inline Complex at(const Dense& d, std::size_t i, std::size_t j) {
    return i < d.size() && j < d[i].size() ? d[i][j] : Complex{};
}

/// Dense matrix of B^k on indices 1..n: ones at (i, i + k).
inline Dense shift_power(std::size_t n, std::size_t k) {
    Dense d(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i + k < n; ++i) d[i][i + k] = 1.0;
    return d;
}

inline double max_gap(const WindowedMatrix& a, const Dense& d, Index r0, Index c0) {
    double worst = 0.0;
    Window w = a.window();
    for (Index i = std::min(w.row_begin, r0); i < std::max(w.row_end, r0 + static_cast<Index>(d.size())); ++i)
        for (Index j = std::min(w.col_begin, c0);
             j < std::max(w.col_end, c0 + static_cast<Index>(d.empty() ? 0 : d[0].size())); ++j) {
            Complex ref = (i >= r0 && j >= c0) ? at(d, static_cast<std::size_t>(i - r0), static_cast<std::size_t>(j - c0))
                                              : Complex{};
            worst = std::max(worst, std::abs(a(i, j) - ref));
        }
    return worst;
}

template <class Fn>
void expect_error(ErrorKind kind, Fn&& fn) {
    try {
        fn();
        ADD_FAILURE() << "expected " << to_string(kind);
    } catch (const LabError& e) {
        EXPECT_EQ(e.kind(), kind) << e.what();
    }
}

}  // namespace testing_support
