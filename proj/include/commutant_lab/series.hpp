#pragma once

/**
 * @file series.hpp
 * @brief Truncated power series built from matrix diagonals, and the
 * difference transforms that the backward-shift commutator induces on them.
 *
 * A CoeffSeries (b_1, ..., b_L) stands for sum_r b_r z^(r-1). The transform
 * tau_j replaces b_r by b_r - b_(r-j), which is multiplication by (1 - z^j);
 * the output is j coefficients longer so that identity holds exactly for the
 * finite polynomial.
 */

#include <vector>

#include "linalg.hpp"

namespace commutant_lab {

struct CoeffSeries {
    std::vector<Complex> coeffs;  // coeffs[r - 1] = b_r

    std::size_t size() const noexcept { return coeffs.size(); }

    /// b_r with b_r = 0 outside 1..L.
    Complex coeff(Index r) const noexcept {
        if (r < 1 || r > static_cast<Index>(coeffs.size())) return {};
        return coeffs[static_cast<std::size_t>(r - 1)];
    }

    friend bool operator==(const CoeffSeries&, const CoeffSeries&) = default;
};

/// f_k: coeffs[r] = a_{k+r, r} for r = 1..length.
inline CoeffSeries diag_series(const WindowedMatrix& a, Index k, std::size_t length) {
    if (k < 0) fail(ErrorKind::DomainError, "diag_series needs k >= 0");
    if (length < 1) fail(ErrorKind::DomainError, "diag_series needs length >= 1");
    CoeffSeries s;
    s.coeffs.resize(length);
    for (std::size_t r = 1; r <= length; ++r) s.coeffs[r - 1] = a(k + static_cast<Index>(r), static_cast<Index>(r));
    return s;
}

/// tau_j: first j coefficients kept, then b_r - b_{r-j}; length grows by j.
inline CoeffSeries tau(const CoeffSeries& s, Index j) {
    if (j < 1) fail(ErrorKind::DomainError, "tau needs j >= 1");
    const Index out_len = static_cast<Index>(s.size()) + j;
    CoeffSeries out;
    out.coeffs.resize(static_cast<std::size_t>(out_len));
    for (Index r = 1; r <= out_len; ++r) out.coeffs[static_cast<std::size_t>(r - 1)] = s.coeff(r) - s.coeff(r - j);
    return out;
}

inline CoeffSeries tau_power(const CoeffSeries& s, Index j, std::size_t n) {
    if (j < 1) fail(ErrorKind::DomainError, "tau needs j >= 1");
    CoeffSeries out = s;
    for (std::size_t k = 0; k < n; ++k) out = tau(out, j);
    return out;
}

/// Horner evaluation inside the open unit disk.
inline Complex eval(const CoeffSeries& s, Complex z) {
    if (!(std::abs(z) < 1.0)) fail(ErrorKind::DomainError, "series evaluation needs |z| < 1");
    Complex acc{};
    for (auto it = s.coeffs.rbegin(); it != s.coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

}  // namespace commutant_lab
