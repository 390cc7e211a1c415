#pragma once

/**
 * @file dynamics.hpp
 * @brief Hypercyclicity-criterion harness, normal and paranormal property
 * checks, and the seeded compact-operator corpus.
 */

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "elementary_map.hpp"

namespace commutant_lab {

/// Entries a_{ij} = decay^max(i,j) g_{ij} on 1..size, g uniform in the unit
/// disk drawn row-major from Rng(seed).
inline WindowedMatrix random_compact(std::uint64_t seed, std::size_t size, double decay) {
    if (!(decay > 0.0 && decay < 1.0)) fail(ErrorKind::DomainError, "decay must lie in (0, 1)");
    Rng rng(seed);
    std::vector<double> powers(size + 1, 1.0);
    for (std::size_t k = 1; k <= size; ++k) powers[k] = powers[k - 1] * decay;
    WindowedMatrix a(1, 1, size, size);
    for (Index i = 1; i <= static_cast<Index>(size); ++i)
        for (Index j = 1; j <= static_cast<Index>(size); ++j)
            a.set(i, j, powers[static_cast<std::size_t>(std::max(i, j))] * rng.unit_disk());
    return a;
}

/// T^n x by repeated exact application.
inline Vec2 apply_power(const OperatorSpec& t, Vec2 x, std::size_t n) {
    for (std::size_t k = 0; k < n && !x.empty(); ++k) x = apply(t, x);
    return x;
}

/// Data for the Hypercyclicity Criterion: T, right maps S_n, the dense sets
/// X0 and Y0 as generators of finitely supported vectors, and n_k.
struct HCWitness {
    OperatorSpec op;
    std::function<Vec2(std::size_t n, const Vec2& y)> right_map;
    std::function<Vec2(Rng& rng, std::size_t dim)> x_gen;
    std::function<Vec2(Rng& rng, std::size_t dim)> y_gen;
    std::function<std::size_t(std::size_t k)> subsequence = [](std::size_t k) { return k; };
};

/// Random vector with support in 1..dim, starting at index 1.
inline Vec2 random_finite_vector(Rng& rng, std::size_t dim) {
    std::size_t len = static_cast<std::size_t>(rng.range(1, static_cast<Index>(dim)));
    return random_vector(rng, 1, len);
}

/// S_n = lambda^n S^n, the scaled right inverse of (B / lambda)^n.
inline std::function<Vec2(std::size_t, const Vec2&)> scaled_forward_power(Complex lambda) {
    return [lambda](std::size_t n, const Vec2& y) {
        Vec2 v = apply_power(OperatorSpec::forward_shift(y.grid()), y, n);
        Complex f(1.0);
        for (std::size_t k = 0; k < n; ++k) f *= lambda;
        return f * v;
    };
}

struct HCCondition {
    std::vector<double> curve;  // max residual over samples, k = 1..k_max
    bool holds = false;
};

struct HCReport {
    std::size_t samples = 0;
    std::size_t k_max = 0;
    HCCondition orbit_to_zero;     // (i)   ||T^{n_k} x||
    HCCondition right_to_zero;     // (ii)  ||S_{n_k} y||
    HCCondition right_inverse;     // (iii) ||T^{n_k} S_{n_k} y - y||
    bool exact_right_inverse = false;
    bool holds() const { return orbit_to_zero.holds && right_to_zero.holds && right_inverse.holds; }
};

inline constexpr double kHCTolerance = 1e-10;

namespace detail {

/// Nonincreasing after the peak and below the tolerance at the end. Rises that
/// stay under the tolerance are rounding noise and do not count.
inline bool tends_to_zero(const std::vector<double>& curve, double scale) {
    if (curve.empty()) return false;
    const double floor = kHCTolerance * scale;
    std::size_t peak = static_cast<std::size_t>(std::max_element(curve.begin(), curve.end()) - curve.begin());
    for (std::size_t k = peak + 1; k < curve.size(); ++k)
        if (curve[k] > curve[k - 1] && curve[k] > floor) return false;
    return curve.back() <= floor;
}

}  // namespace detail

/// Evaluates (i)-(iii) for k = 1..k_max on `samples` draws of x and y.
inline HCReport check_hc_criterion(const HCWitness& w, std::size_t k_max, std::size_t dim, std::size_t samples = 20,
                                   std::uint64_t seed = 1) {
    if (k_max == 0 || dim == 0 || samples == 0) fail(ErrorKind::DomainError, "k_max, dim and samples must be positive");
    HCReport rep;
    rep.samples = samples;
    rep.k_max = k_max;
    rep.orbit_to_zero.curve.assign(k_max, 0.0);
    rep.right_to_zero.curve.assign(k_max, 0.0);
    rep.right_inverse.curve.assign(k_max, 0.0);
    rep.exact_right_inverse = true;
    double scale = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        Rng rng(derive_seed(seed, s));
        Vec2 x = w.x_gen(rng, dim);
        Vec2 y = w.y_gen(rng, dim);
        scale = std::max({scale, x.norm(), y.norm()});
        for (std::size_t k = 1; k <= k_max; ++k) {
            const std::size_t n = w.subsequence(k);
            Vec2 sy = w.right_map(n, y);
            Vec2 back = apply_power(w.op, sy, n);
            double r1 = apply_power(w.op, x, n).norm();
            double r2 = sy.norm();
            double r3 = (back - y).norm();
            rep.exact_right_inverse = rep.exact_right_inverse && back == y;
            rep.orbit_to_zero.curve[k - 1] = std::max(rep.orbit_to_zero.curve[k - 1], r1);
            rep.right_to_zero.curve[k - 1] = std::max(rep.right_to_zero.curve[k - 1], r2);
            rep.right_inverse.curve[k - 1] = std::max(rep.right_inverse.curve[k - 1], r3);
        }
    }
    scale = std::max(1.0, scale);
    rep.orbit_to_zero.holds = detail::tends_to_zero(rep.orbit_to_zero.curve, scale);
    rep.right_to_zero.holds = detail::tends_to_zero(rep.right_to_zero.curve, scale);
    rep.right_inverse.holds = detail::tends_to_zero(rep.right_inverse.curve, scale);
    return rep;
}

enum class Property { Normal, HSAdjointPair, Paranormal, ParanormalViolated };

inline std::string_view to_string(Property p) {
    switch (p) {
        case Property::Normal: return "Normal";
        case Property::HSAdjointPair: return "HSAdjointPair";
        case Property::Paranormal: return "Paranormal";
        case Property::ParanormalViolated: return "ParanormalViolated";
    }
    return "Normal";
}

struct PropertyWitness {
    std::string description;
    std::optional<Vec2> u;
    std::optional<Vec2> v;
    std::map<std::string, double> values;
};

struct PropertyReport {
    Property property = Property::Normal;
    std::size_t samples = 0;
    double max_residual = 0.0;
    bool passed = false;
    std::map<std::string, double> metrics;
    std::optional<PropertyWitness> witness;
};

inline constexpr double kPropertyTolerance = 1e-10;

/// HS pairing <Delta_N X, Y> = <X, Delta_{N*} Y> and the commutation
/// Delta_N Delta_{N*} = Delta_{N*} Delta_N on every matrix unit of the dim x dim
/// window followed by `samples` random X (and Y). Residuals are relative to
/// ||X||_2 ||Y||_2 max(1, ||N||_2) and ||X||_2 max(1, ||N||_2^2).
inline PropertyReport check_normal_commutator(const OperatorSpec& n, std::size_t dim, std::size_t samples,
                                              std::uint64_t seed = 1) {
    if (dim == 0) fail(ErrorKind::DomainError, "dim must be positive");
    const Index o = n.grid() == Grid::Unilateral ? 1 : 0;
    const Window w{o, o + static_cast<Index>(dim), o, o + static_cast<Index>(dim)};
    const Index lo = n.grid() == Grid::Unilateral ? o : o - 2;
    const Index hi = o + static_cast<Index>(dim) + 2;
    const double n_hs = norm(materialize(n, {lo, hi, lo, hi}), NormKind::HilbertSchmidt);
    const ElementaryMap d = ElementaryMap::commutator(n);
    const ElementaryMap d_adj = ElementaryMap::commutator(OperatorSpec::adjoint(n));

    std::vector<WindowedMatrix> xs;
    std::vector<std::string> labels;
    for (Index i = w.row_begin; i < w.row_end; ++i) {
        for (Index j = w.col_begin; j < w.col_end; ++j) {
            xs.push_back(WindowedMatrix::unit(i, j, n.grid()));
            labels.push_back("E_" + std::to_string(i) + "," + std::to_string(j));
        }
    }
    for (std::size_t s = 0; s < samples; ++s) {
        Rng rng(derive_seed(seed, s));
        xs.push_back(random_dense(rng, w, n.grid()));
        labels.push_back("random sample " + std::to_string(s));
    }

    std::vector<double> pair_res(xs.size());
    std::vector<double> comm_res(xs.size());
    parallel_for(xs.size(), 0, [&](std::size_t k) {
        const WindowedMatrix& x = xs[k];
        const WindowedMatrix& y = xs[(k * 7 + 3) % xs.size()];
        double nx = norm(x, NormKind::HilbertSchmidt);
        double ny = norm(y, NormKind::HilbertSchmidt);
        Complex lhs = hs_inner(apply_map(d, x), y);
        Complex rhs = hs_inner(x, apply_map(d_adj, y));
        pair_res[k] = std::abs(lhs - rhs) / (nx * ny * std::max(1.0, n_hs));
        WindowedMatrix c = apply_map(d, apply_map(d_adj, x)) - apply_map(d_adj, apply_map(d, x));
        comm_res[k] = norm(c, NormKind::HilbertSchmidt) / (nx * std::max(1.0, n_hs * n_hs));
    });

    PropertyReport rep;
    rep.property = Property::Normal;
    rep.samples = xs.size();
    std::size_t worst = 0;
    double pair_max = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        pair_max = std::max(pair_max, pair_res[k]);
        if (comm_res[k] > comm_res[worst]) worst = k;
    }
    rep.max_residual = comm_res[worst];
    rep.metrics["adjoint_pairing_residual"] = pair_max;
    rep.metrics["commutation_residual"] = rep.max_residual;
    rep.passed = pair_max <= kPropertyTolerance && rep.max_residual <= kPropertyTolerance;
    if (!rep.passed) {
        PropertyWitness wit;
        wit.description = labels[worst];
        wit.values["commutation_residual"] = comm_res[worst];
        rep.witness = wit;
    }
    return rep;
}

struct ParanormalCheck {
    bool holds = false;
    double lhs = 0.0;  // ||Tx||^2
    double rhs = 0.0;  // ||T^2 x|| ||x||
};

inline ParanormalCheck check_paranormal(const OperatorSpec& t, const Vec2& x) {
    if (x.norm() == 0.0) fail(ErrorKind::ZeroVector, "paranormality is tested on a nonzero vector");
    Vec2 tx = apply(t, x);
    Vec2 ttx = apply(t, tx);
    ParanormalCheck c;
    c.lhs = tx.norm() * tx.norm();
    c.rhs = ttx.norm() * x.norm();
    c.holds = c.lhs <= c.rhs + 1e-12;
    return c;
}

/// The paranormal operator with T e_0 = 0 and T e_k = e_{k+1} for k >= 1,
/// written on the unilateral grid with e_k stored at index k + 1.
inline OperatorSpec zero_extended_forward_shift() {
    // T* = B_w with w = (0, 0, 1, 1, ...): T* e_j = w_j e_{j-1}.
    return OperatorSpec::adjoint(
        OperatorSpec::weighted_backward_shift(SequenceRule::explicit_list({Complex{}, Complex{}}, Complex(1.0))));
}

/// Searches u over span{e_0, ..., e_3} with coefficients in {0, 1, -1, 1/2, -1/2}
/// for the largest ||T*u||^2 - ||T*^2 u|| with v = e_0, then checks that
/// S = (x -> <x, u> v) violates ||Delta_T S||^2 <= ||Delta_T^2 S|| ||S|| in
/// the operator and Hilbert-Schmidt norms. Indices in the witness are stored
/// ones (e_k at k + 1).
inline PropertyReport paranormal_counterexample(std::size_t dim) {
    if (dim < 4) fail(ErrorKind::DomainError, "paranormal search needs dim >= 4");
    const OperatorSpec t = zero_extended_forward_shift();
    const OperatorSpec t_adj = OperatorSpec::adjoint(t);
    const Vec2 v = Vec2::basis(1);
    if (apply(t, v).norm() != 0.0) fail(ErrorKind::SearchFailure, "T v must vanish");

    const double grid[] = {0.0, 1.0, -1.0, 0.5, -0.5};
    std::optional<Vec2> best;
    double best_margin = 0.0;
    std::size_t candidates = 0;
    for (double a : grid)
        for (double b : grid)
            for (double c : grid)
                for (double d : grid) {
                    Vec2 raw(1, {a, b, c, d});
                    double r = raw.norm();
                    if (r == 0.0) continue;
                    ++candidates;
                    Vec2 u = Complex(1.0 / r) * raw;
                    Vec2 tu = apply(t_adj, u);
                    double margin = tu.norm() * tu.norm() - apply(t_adj, tu).norm();
                    if (margin > best_margin) {
                        best_margin = margin;
                        best = u;
                    }
                }
    if (!best) fail(ErrorKind::SearchFailure, "no u with ||T*u||^2 > ||T*^2 u|| in the search grid");

    const Vec2 u = best->trimmed();
    const WindowedMatrix s = rank_one(v, u);
    const ElementaryMap delta = ElementaryMap::commutator(t);
    const WindowedMatrix d1 = apply_map(delta, s);
    const WindowedMatrix d2 = apply_map(delta, d1);

    PropertyReport rep;
    rep.property = Property::ParanormalViolated;
    rep.samples = candidates;
    PropertyWitness wit;
    wit.description = "S = rank_one(v, u) with T v = 0";
    wit.u = u;
    wit.v = v;
    bool violated = true;
    double min_margin = 0.0;
    bool first = true;
    for (NormKind kind : {NormKind::Operator, NormKind::HilbertSchmidt}) {
        std::string k(to_string(kind));
        double n1 = norm(d1, kind);
        double lhs = n1 * n1;
        double rhs = norm(d2, kind) * norm(s, kind);
        wit.values["lhs_" + k] = lhs;
        wit.values["rhs_" + k] = rhs;
        wit.values["margin_" + k] = lhs - rhs;
        violated = violated && lhs > rhs;
        min_margin = first ? lhs - rhs : std::min(min_margin, lhs - rhs);
        first = false;
    }
    Vec2 tu = apply(t_adj, u);
    wit.values["adjoint_u_norm_sq"] = tu.norm() * tu.norm();
    wit.values["adjoint_sq_u_norm"] = apply(t_adj, tu).norm();
    rep.max_residual = min_margin;
    rep.metrics["margin"] = min_margin;
    rep.metrics["dim"] = static_cast<double>(dim);
    rep.passed = violated;
    rep.witness = wit;
    return rep;
}

}  // namespace commutant_lab
