#pragma once

/**
 * @file certificate.hpp
 * @brief Finite non-hypercyclicity evidence for Delta_{cB} and Delta_{p(B)}
 * on the compact operators.
 *
 * For an initial matrix A the engine finds k_eps (the first corner size from
 * which every tail ||A - P_k A|| stays below eps), evaluates the orbit against
 * the target E_{1,1} for n in (k_eps, n_max], and for every such n computes
 * the main-diagonal function g_n at z0 two ways: directly from the orbit, and
 * from the leading-term closed form gamma^e (1 - z0^m)^n f_{mn}(z0) - 1.
 *
 * If the orbit came within eps of E_{1,1}, every |h_r| < eps and the geometric
 * tail bound caps |g_n(z0)| at eps / (1 - |z0|). For cB that cap is 1/3, while
 * the closed form keeps |g_n(z0)| above 2/3. A row with both is impossible,
 * which is what the per-row bounds record.
 */

#include <cmath>
#include <string>
#include <vector>

#include "elementary_map.hpp"
#include "series.hpp"

namespace commutant_lab {

/// Exponent of the leading coefficient in the p(B) closed form. PerIteration
/// uses gamma^n; AsPrinted uses gamma^m as the formula is commonly quoted.
enum class LeadingExponent { PerIteration, AsPrinted };

inline std::string_view to_string(LeadingExponent e) {
    return e == LeadingExponent::PerIteration ? "per-iteration" : "as-printed";
}

enum class CertificateVerdict { NoNearApproachObserved, NearApproachObserved, IdentityViolation };

inline std::string_view to_string(CertificateVerdict v) {
    switch (v) {
        case CertificateVerdict::NoNearApproachObserved: return "NoNearApproachObserved";
        case CertificateVerdict::NearApproachObserved: return "NearApproachObserved";
        case CertificateVerdict::IdentityViolation: return "IdentityViolation";
    }
    return "IdentityViolation";
}

struct CertificateRow {
    std::size_t n = 0;
    double orbit_distance = 0.0;
    Complex f_n_at_z0;
    Complex g_n_at_z0_direct;
    Complex g_n_at_z0_formula;
    double bound_upper = 0.0;  // eps / (1 - |z0|): cap on |g_n(z0)| under a near approach
    double bound_lower = 0.0;  // 1 - |leading term|: floor on |g_n(z0)| from the closed form
    bool consistent = false;
};

struct CertificateReport {
    std::vector<Complex> poly;  // c_0..c_m; cB is {0, c}
    Complex c;                  // leading coefficient
    std::size_t degree = 1;
    double epsilon = 0.0;
    std::size_t k_eps = 0;
    Complex z0;
    std::size_t n_max = 0;
    LeadingExponent exponent = LeadingExponent::PerIteration;
    std::vector<double> tail_norms;  // ||A - P_k A||_op for k = 0..K
    std::vector<CertificateRow> per_n;
    CertificateVerdict verdict = CertificateVerdict::NoNearApproachObserved;
    std::string note;
};

struct CertifyOptions {
    LeadingExponent exponent = LeadingExponent::PerIteration;
    std::size_t window_cap = 1024;
    unsigned threads = 0;
};

inline constexpr double kIdentityTolerance = 1e-9;

/// ||A - P_k A||_op for k = 0..K, where K is the last index touched by A.
inline std::vector<double> corner_tail_norms(const WindowedMatrix& a, unsigned threads = 0) {
    Index last = std::max<Index>(0, std::max(a.row_end(), a.col_end()) - 1);
    std::vector<double> tails(static_cast<std::size_t>(last + 1));
    parallel_for(tails.size(), threads, [&](std::size_t k) {
        tails[k] = norm(a - proj_corner(a, static_cast<Index>(k)), NormKind::Operator);
    });
    return tails;
}

/// Smallest k with ||A - P_j A|| < eps for every j >= k.
inline std::size_t k_epsilon(const std::vector<double>& tails, double eps) {
    std::size_t k = tails.size();
    while (k > 0 && tails[k - 1] < eps) --k;
    return k;
}

namespace detail {

inline Complex ipow(Complex base, std::size_t e) {
    Complex r(1.0);
    for (std::size_t k = 0; k < e; ++k) r *= base;
    return r;
}

inline CertificateReport certify_impl(const WindowedMatrix& a, std::vector<Complex> poly, double eps,
                                      std::size_t n_max, const CertifyOptions& opts, bool restrict_to_path) {
    if (a.grid() != Grid::Unilateral) fail(ErrorKind::DomainError, "certificates live on the unilateral grid");
    if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorKind::PreconditionViolated, "epsilon must be positive");
    for (Complex z : poly) require_finite(z, "polynomial coefficient");
    while (poly.size() > 1 && poly.back() == Complex{}) poly.pop_back();

    CertificateReport rep;
    rep.poly = poly;
    rep.epsilon = eps;
    rep.n_max = n_max;
    rep.exponent = opts.exponent;
    rep.degree = poly.size() - 1;
    rep.c = poly.back();

    if (rep.degree == 0) {
        // Delta of a scalar multiple of the identity is the zero map.
        rep.c = Complex{};
        rep.degree = 0;
        rep.z0 = Complex(1.0 - 3.0 * eps);
        rep.note = "zero map: Delta_T = 0 is not hypercyclic";
        rep.verdict = CertificateVerdict::NoNearApproachObserved;
        return rep;
    }

    const double m = static_cast<double>(rep.degree);
    if (!(3.0 * std::abs(rep.c) * eps < 1.0))
        fail(ErrorKind::PreconditionViolated, "3|c| eps < 1 is required");
    double z0 = rep.degree == 1 ? 1.0 - 3.0 * eps : std::pow(1.0 - 3.0 * eps, 1.0 / m);
    if (rep.degree > 1 && !(1.0 - 3.0 * eps > 0.0))
        fail(ErrorKind::PreconditionViolated, "p(B) certificates need 3 eps < 1 so that z0 is a real root");
    if (!(std::abs(z0) < 1.0)) fail(ErrorKind::PreconditionViolated, "z0 = 1 - 3 eps must lie in the open disk");
    rep.z0 = Complex(z0);

    rep.tail_norms = corner_tail_norms(a, opts.threads);
    rep.k_eps = k_epsilon(rep.tail_norms, eps);

    const ElementaryMap delta = ElementaryMap::commutator(OperatorSpec::poly_b(poly));
    const WindowedMatrix e11 = WindowedMatrix::unit(1, 1);
    OrbitOptions oo;
    oo.norm = NormKind::Operator;
    oo.window_cap = opts.window_cap;
    oo.threads = opts.threads;
    std::vector<OrbitRecord> orbit_records = orbit(delta, a, n_max, {{"e1e1", e11}}, oo);

    const std::size_t width = static_cast<std::size_t>(std::max(a.row_end(), a.col_end()));
    const std::size_t length = width + rep.degree * n_max + 1;
    const double bound_upper = eps / (1.0 - std::abs(z0));

    std::vector<std::size_t> steps;
    for (std::size_t n = rep.k_eps + 1; n <= n_max; ++n) steps.push_back(n);
    rep.per_n.resize(steps.size());

    parallel_for(steps.size(), opts.threads, [&](std::size_t idx) {
        const std::size_t n = steps[idx];
        const Index source_diag = static_cast<Index>(rep.degree * n);
        CertificateRow& row = rep.per_n[idx];
        row.n = n;
        row.orbit_distance = orbit_records[n].distances.at("e1e1");

        WindowedMatrix value = orbit_records[n].value;
        if (restrict_to_path) {
            // Only the D_{mn} -> D_0 path: n steps of at most m diagonals each.
            WindowedMatrix v = proj_subdiagonal(a, source_diag);
            for (std::size_t k = 0; k < n; ++k) v = apply_map(delta, v);
            value = v;
        }
        CoeffSeries h = diag_series(value - e11, 0, length);
        row.g_n_at_z0_direct = eval(h, rep.z0);

        CoeffSeries f = diag_series(a, source_diag, length);
        row.f_n_at_z0 = eval(f, rep.z0);
        const std::size_t e = opts.exponent == LeadingExponent::PerIteration ? n : rep.degree;
        const Complex lead = ipow(rep.c, e) * ipow(Complex(1.0) - ipow(rep.z0, rep.degree), n) * row.f_n_at_z0;
        row.g_n_at_z0_formula = lead - Complex(1.0);
        row.bound_upper = bound_upper;
        row.bound_lower = 1.0 - std::abs(lead);
        row.consistent = std::abs(row.g_n_at_z0_direct - row.g_n_at_z0_formula) <=
                         kIdentityTolerance * (1.0 + std::abs(row.g_n_at_z0_direct));
    });

    bool all_consistent = true;
    bool near = false;
    for (const auto& row : rep.per_n) {
        all_consistent = all_consistent && row.consistent;
        near = near || row.orbit_distance < eps;
    }
    if (!all_consistent) rep.verdict = CertificateVerdict::IdentityViolation;
    else if (near) rep.verdict = CertificateVerdict::NearApproachObserved;
    else rep.verdict = CertificateVerdict::NoNearApproachObserved;
    return rep;
}

}  // namespace detail

/// Certificate for Delta_{cB}; g_n is read off the full orbit value.
inline CertificateReport certify_cB(const WindowedMatrix& a, Complex c, double eps, std::size_t n_max,
                                    const CertifyOptions& opts = {}) {
    require_finite(c, "c");
    return detail::certify_impl(a, {Complex{}, c}, eps, n_max, opts, false);
}

/// Certificate for Delta_{p(B)}, coeffs = c_0..c_m. g_n follows the D_{mn} -> D_0
/// path, which is the part of the diagonal the leading term accounts for.
inline CertificateReport certify_pB(const WindowedMatrix& a, const std::vector<Complex>& coeffs, double eps,
                                    std::size_t n_max, const CertifyOptions& opts = {}) {
    if (coeffs.empty()) fail(ErrorKind::PreconditionViolated, "polynomial needs at least one coefficient");
    return detail::certify_impl(a, coeffs, eps, n_max, opts, true);
}

}  // namespace commutant_lab
