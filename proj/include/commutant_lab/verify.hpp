#pragma once

/**
 * @file verify.hpp
 * @brief Self-check suites behind `commutant_lab verify`. Each suite compares
 * library output with an independent computation and reports the largest
 * residual it saw.
 */

#include <string>
#include <vector>

#include "certificate.hpp"
#include "dynamics.hpp"
#include "spectral.hpp"

namespace commutant_lab {

struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"matr", "tau", "normal", "paranormal", "hc", "spectral"};
    return names;
}

namespace detail {

/// Largest distance when each expected value is matched to its closest unused
/// computed value.
inline double multiset_distance(std::vector<Complex> expected, std::vector<Complex> computed) {
    if (expected.size() != computed.size()) return std::numeric_limits<double>::infinity();
    std::vector<bool> used(computed.size(), false);
    double worst = 0.0;
    for (Complex e : expected) {
        std::size_t best = computed.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < computed.size(); ++k) {
            if (used[k]) continue;
            double d = std::abs(computed[k] - e);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        used[best] = true;
        worst = std::max(worst, best_d);
    }
    return worst;
}

}  // namespace detail

/// Delta_B(A)_{ij} = a_{i+1,j} - a_{i,j-1} on 100 random A supported in 1..16.
inline SuiteResult verify_matr(std::uint64_t seed = 7) {
    SuiteResult r{"matr", 0, 0.0, 1e-12, false, ""};
    const ElementaryMap delta = ElementaryMap::commutator(OperatorSpec::backward_shift());
    for (std::size_t s = 0; s < 100; ++s) {
        Rng rng(derive_seed(seed, s));
        WindowedMatrix a = random_dense(rng, {1, 17, 1, 17});
        WindowedMatrix out = apply_map(delta, a);
        for (Index i = 1; i <= 17; ++i)
            for (Index j = 1; j <= 18; ++j) {
                Complex expected = a(i + 1, j) - a(i, j - 1);
                r.max_residual = std::max(r.max_residual, std::abs(out(i, j) - expected));
                ++r.checks;
            }
    }
    r.passed = r.max_residual <= r.tolerance;
    r.detail = "entrywise formula on 100 random 16x16 matrices";
    return r;
}

/// tau_j^n against the coefficients of (1 - z^j)^n f from the binomial theorem.
inline SuiteResult verify_tau(std::uint64_t seed = 11) {
    SuiteResult r{"tau", 0, 0.0, 0.0, false, ""};
    Rng rng(seed);
    for (Index j = 1; j <= 4; ++j)
        for (std::size_t n = 0; n <= 8; ++n)
            for (std::size_t len = 1; len <= 32; len += 3) {
                CoeffSeries f;
                for (std::size_t k = 0; k < len; ++k) f.coeffs.push_back(static_cast<double>(rng.range(-9, 9)));
                std::vector<double> binom(n + 1, 1.0);
                for (std::size_t k = 1; k <= n; ++k) binom[k] = binom[k - 1] * static_cast<double>(n - k + 1) / k;
                std::vector<Complex> prod(len + j * n, Complex{});
                for (std::size_t k = 0; k <= n; ++k) {
                    double c = (k % 2 ? -1.0 : 1.0) * binom[k];
                    for (std::size_t q = 0; q < len; ++q) prod[q + j * k] += c * f.coeffs[q];
                }
                CoeffSeries got = tau_power(f, j, n);
                ++r.checks;
                if (got.coeffs.size() != prod.size()) {
                    r.max_residual = std::numeric_limits<double>::infinity();
                    continue;
                }
                for (std::size_t q = 0; q < prod.size(); ++q)
                    r.max_residual = std::max(r.max_residual, std::abs(got.coeffs[q] - prod[q]));
            }
    r.passed = r.max_residual <= r.tolerance;
    r.detail = "j <= 4, n <= 8, integer series of length <= 32";
    return r;
}

/// Five normal operators commute with their adjoints' commutators; the 2x2
/// Jordan block does not.
inline SuiteResult verify_normal(std::size_t dim = 4) {
    SuiteResult r{"normal", 0, 0.0, kPropertyTolerance, false, ""};
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<OperatorSpec> normals{
        OperatorSpec::finite(WindowedMatrix::diagonal(1, {1.0, Complex(0, 1), -1.0})),
        OperatorSpec::finite(WindowedMatrix::from_rows(1, 1, {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}})),
        OperatorSpec::finite(WindowedMatrix::from_rows(1, 1, {{2, 1, 0}, {1, 2, 1}, {0, 1, 2}})),
        OperatorSpec::finite(WindowedMatrix::from_rows(1, 1, {{h, Complex(0, -h)}, {Complex(0, -h), h}})),
        OperatorSpec::bilateral_backward_shift(),
    };
    for (const auto& n : normals) {
        PropertyReport p = check_normal_commutator(n, std::max<std::size_t>(dim, 4), 8);
        r.checks += p.samples;
        r.max_residual = std::max({r.max_residual, p.max_residual, p.metrics["adjoint_pairing_residual"]});
    }
    PropertyReport jordan =
        check_normal_commutator(OperatorSpec::finite(WindowedMatrix::from_rows(1, 1, {{0, 1}, {0, 0}})), 2, 4);
    r.checks += jordan.samples;
    bool control_fails = jordan.max_residual >= 0.1;
    r.passed = r.max_residual <= r.tolerance && control_fails;
    r.detail = "Jordan control residual " + std::to_string(jordan.max_residual);
    return r;
}

/// The zero-extended forward shift yields a strict violation for Delta_T.
inline SuiteResult verify_paranormal(std::size_t dim = 8) {
    SuiteResult r{"paranormal", 0, 0.0, 1e-6, false, ""};
    PropertyReport p = paranormal_counterexample(dim);
    r.checks = p.samples;
    const auto& vals = p.witness->values;
    double m_op = vals.at("margin_op");
    double m_hs = vals.at("margin_hs");
    r.max_residual = std::min(m_op, m_hs);  // the margin; must exceed the tolerance
    r.passed = p.passed && m_op >= r.tolerance && m_hs >= r.tolerance;
    r.detail = "margins op " + std::to_string(m_op) + ", hs " + std::to_string(m_hs);
    return r;
}

/// 2B meets all three conditions with exact right inverses; B fails (ii).
inline SuiteResult verify_hc() {
    SuiteResult r{"hc", 0, 0.0, kHCTolerance, false, ""};
    auto witness = [](Complex c) {
        HCWitness w{OperatorSpec::scaled(c, OperatorSpec::backward_shift()), scaled_forward_power(1.0 / c),
                    random_finite_vector, random_finite_vector};
        return w;
    };
    HCReport two = check_hc_criterion(witness(2.0), 48, 8, 20);
    HCReport one = check_hc_criterion(witness(1.0), 48, 8, 20);
    r.checks = two.samples + one.samples;
    r.max_residual = two.right_inverse.curve.back();
    r.passed = two.holds() && two.exact_right_inverse && !one.right_to_zero.holds;
    r.detail = std::string("2B criterion ") + (two.holds() ? "holds" : "fails") + "; B condition (ii) " +
               (one.right_to_zero.holds ? "holds" : "fails");
    return r;
}

/// Eigenvalues of the 16x16 matrix of Delta_D are the differences alpha_i - alpha_j,
/// and the verdict engine classifies the reference operators.
inline SuiteResult verify_spectral() {
    SuiteResult r{"spectral", 0, 0.0, 1e-8, false, ""};
    const std::vector<Complex> alpha{0.5, Complex(0.1, 0.7), -0.3, Complex(0.9, -0.2)};
    const OperatorSpec d = OperatorSpec::diagonal(SequenceRule::explicit_list(alpha));
    WindowedMatrix super = materialize_superoperator(ElementaryMap::commutator(d), {1, 5, 1, 5});
    std::vector<Complex> expected;
    for (Complex a : alpha)
        for (Complex b : alpha) expected.push_back(a - b);
    r.max_residual = detail::multiset_distance(expected, eigenvalues(super));
    r.checks = expected.size();

    Verdict riesz = verdict_commutator(OperatorSpec::diagonal(SequenceRule::explicit_list({0.5}, 0.7)));
    Verdict normal = verdict_commutator(
        OperatorSpec::finite(WindowedMatrix::from_rows(1, 1, {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}})));
    r.checks += 2;
    bool verdicts_ok = riesz.rule == VerdictRule::RieszSpectrum && normal.rule == VerdictRule::NormalCommutator;
    r.passed = r.max_residual <= r.tolerance && verdicts_ok;
    r.detail = verdicts_ok ? "verdicts match" : "verdict mismatch";
    return r;
}

/// `dim` sizes the windows of the normal and paranormal suites.
inline SuiteResult run_suite(const std::string& name, std::size_t dim = 16) {
    if (name == "matr") return verify_matr();
    if (name == "tau") return verify_tau();
    if (name == "normal") return verify_normal(dim);
    if (name == "paranormal") return verify_paranormal(dim);
    if (name == "hc") return verify_hc();
    if (name == "spectral") return verify_spectral();
    fail(ErrorKind::DomainError, "unknown suite \"" + name + "\"");
}

}  // namespace commutant_lab
