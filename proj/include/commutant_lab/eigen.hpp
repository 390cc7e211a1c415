#pragma once

/**
 * @file eigen.hpp
 * @brief Eigenvalues of a square windowed matrix: Householder reduction to
 * Hessenberg form, then single-shift complex QR with Wilkinson shifts and
 * deflation. Only eigenvalues are formed, never Schur vectors.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "linalg.hpp"

namespace commutant_lab {

namespace detail {

using Dense = std::vector<std::vector<Complex>>;

inline void to_hessenberg(Dense& h) {
    const std::size_t n = h.size();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double alpha_norm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) alpha_norm += std::norm(h[i][k]);
        alpha_norm = std::sqrt(alpha_norm);
        double tail = 0.0;
        for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(h[i][k]);
        if (tail == 0.0) continue;

        std::vector<Complex> v(n, Complex{});
        Complex x0 = h[k + 1][k];
        Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
        v[k + 1] = x0 + phase * alpha_norm;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = h[i][k];
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);

        // H <- (I - 2 v v*/|v|^2) H (I - 2 v v*/|v|^2)
        for (std::size_t j = 0; j < n; ++j) {
            Complex s{};
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h[i][j];
            s *= 2.0 / vnorm2;
            for (std::size_t i = k + 1; i < n; ++i) h[i][j] -= v[i] * s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            Complex s{};
            for (std::size_t j = k + 1; j < n; ++j) s += h[i][j] * v[j];
            s *= 2.0 / vnorm2;
            for (std::size_t j = k + 1; j < n; ++j) h[i][j] -= s * std::conj(v[j]);
        }
        for (std::size_t i = k + 2; i < n; ++i) h[i][k] = Complex{};
    }
}

/// Rotation [[c, s], [-conj(s), c]] mapping (a, b) to (r, 0).
inline void givens(Complex a, Complex b, double& c, Complex& s) {
    double aa = std::abs(a);
    double bb = std::abs(b);
    if (bb == 0.0) {
        c = 1.0;
        s = Complex{};
        return;
    }
    if (aa == 0.0) {
        c = 0.0;
        s = std::conj(b) / bb;
        return;
    }
    double r = std::hypot(aa, bb);
    c = aa / r;
    s = (a / aa) * std::conj(b) / r;
}

inline Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
    Complex half_tr = 0.5 * (a + d);
    Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    Complex l1 = half_tr + disc;
    Complex l2 = half_tr - disc;
    return std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
}

}  // namespace detail

/// All eigenvalues with multiplicity, sorted by (re, im).
inline std::vector<Complex> eigenvalues(const WindowedMatrix& m) {
    if (m.rows() != m.cols()) fail(ErrorKind::DomainError, "eigenvalues need a square window");
    const std::size_t n = m.rows();
    std::vector<Complex> eig;
    if (n == 0) return eig;
    detail::Dense h(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h[i][j] = m.data()[i * n + j];

    detail::to_hessenberg(h);

    double scale = 0.0;
    for (const auto& row : h)
        for (Complex z : row) scale = std::max(scale, std::abs(z));
    const double eps = std::numeric_limits<double>::epsilon();
    const std::size_t max_iter_per_eig = 60;

    eig.assign(n, Complex{});
    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
    std::size_t iter = 0;
    while (hi >= 0) {
        if (hi == 0) {
            eig[0] = h[0][0];
            break;
        }
        std::ptrdiff_t lo = hi;
        while (lo > 0) {
            double sub = std::abs(h[lo][lo - 1]);
            double local = std::abs(h[lo - 1][lo - 1]) + std::abs(h[lo][lo]);
            if (local == 0.0) local = scale;
            if (sub <= eps * local) {
                h[lo][lo - 1] = Complex{};
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eig[hi] = h[hi][hi];
            --hi;
            iter = 0;
            continue;
        }
        if (++iter > max_iter_per_eig) fail(ErrorKind::ConvergenceFailure, "QR iteration cap reached");

        Complex mu;
        if (iter % 10 == 0) {
            mu = h[hi][hi] + 0.75 * std::abs(h[hi][hi - 1]);  // exceptional shift
        } else {
            mu = detail::wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
        }

        const std::size_t b = static_cast<std::size_t>(lo);
        const std::size_t e = static_cast<std::size_t>(hi);
        for (std::size_t k = b; k <= e; ++k) h[k][k] -= mu;
        std::vector<double> cs(e - b);
        std::vector<Complex> ss(e - b);
        for (std::size_t k = b; k < e; ++k) {
            detail::givens(h[k][k], h[k + 1][k], cs[k - b], ss[k - b]);
            const double c = cs[k - b];
            const Complex s = ss[k - b];
            for (std::size_t j = k; j <= e; ++j) {
                Complex x = h[k][j];
                Complex y = h[k + 1][j];
                h[k][j] = c * x + s * y;
                h[k + 1][j] = -std::conj(s) * x + c * y;
            }
        }
        for (std::size_t k = b; k < e; ++k) {
            const double c = cs[k - b];
            const Complex s = ss[k - b];
            for (std::size_t i = b; i <= std::min(k + 1, e); ++i) {
                Complex x = h[i][k];
                Complex y = h[i][k + 1];
                h[i][k] = x * c + y * std::conj(s);
                h[i][k + 1] = -x * s + y * c;
            }
        }
        for (std::size_t k = b; k <= e; ++k) h[k][k] += mu;
    }

    std::sort(eig.begin(), eig.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return eig;
}

}  // namespace commutant_lab
