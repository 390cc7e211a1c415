#pragma once

/**
 * @file spectral_set.hpp
 * @brief Compact subsets of C as finite unions of points, disks, circles and
 * annuli, with the self-difference S - S and the Kitai component test.
 *
 * Every part is an annulus {z : r <= |z - c| <= R} (points have r = R = 0,
 * disks r = 0, circles r = R). The difference of two such parts is again one:
 *
 *   A(c1, r1, R1) - A(c2, r2, R2) = A(c1 - c2, max(0, r1 - R2, r2 - R1), R1 + R2)
 *
 * since each part is rotation invariant about its center and the moduli
 * |z - w| fill that interval. So S - S is always computed exactly; the
 * `conservative` flag is carried through for sets read from outside.
 */

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "linalg.hpp"

namespace commutant_lab {

struct Disk {
    Complex center;
    double radius = 0.0;
};

struct Circle {
    Complex center;
    double radius = 0.0;
};

struct Annulus {
    Complex center;
    double r_inner = 0.0;
    double r_outer = 0.0;
};

struct SpectralSet {
    std::vector<Complex> points;
    std::vector<Disk> disks;
    std::vector<Circle> circles;
    std::vector<Annulus> annuli;
    bool conservative = false;  // some part is a hull rather than the exact set

    bool empty() const noexcept { return points.empty() && disks.empty() && circles.empty() && annuli.empty(); }
    bool discrete() const noexcept { return disks.empty() && circles.empty() && annuli.empty(); }

    static SpectralSet of_points(std::vector<Complex> pts) {
        SpectralSet s;
        s.points = std::move(pts);
        return s;
    }
    static SpectralSet disk(Complex center, double radius) {
        SpectralSet s;
        s.disks.push_back({center, radius});
        return s;
    }
    static SpectralSet circle(Complex center, double radius) {
        SpectralSet s;
        s.circles.push_back({center, radius});
        return s;
    }
    static SpectralSet annulus(Complex center, double r_inner, double r_outer) {
        SpectralSet s;
        s.annuli.push_back({center, r_inner, r_outer});
        return s;
    }
};

namespace detail {

struct Part {
    Complex center;
    double r = 0.0;
    double R = 0.0;
};

inline void validate(const SpectralSet& s) {
    auto radius_ok = [](double r) { return std::isfinite(r) && r >= 0.0; };
    for (Complex p : s.points) require_finite(p, "SpectralSet point");
    for (const auto& d : s.disks)
        if (!radius_ok(d.radius)) fail(ErrorKind::DomainError, "disk radius must be finite and >= 0");
    for (const auto& c : s.circles)
        if (!radius_ok(c.radius)) fail(ErrorKind::DomainError, "circle radius must be finite and >= 0");
    for (const auto& a : s.annuli)
        if (!radius_ok(a.r_inner) || !radius_ok(a.r_outer) || a.r_inner > a.r_outer)
            fail(ErrorKind::DomainError, "annulus radii must satisfy 0 <= r_inner <= r_outer");
}

inline std::vector<Part> parts_of(const SpectralSet& s) {
    std::vector<Part> out;
    for (Complex p : s.points) out.push_back({p, 0.0, 0.0});
    for (const auto& d : s.disks) out.push_back({d.center, 0.0, d.radius});
    for (const auto& c : s.circles) out.push_back({c.center, c.radius, c.radius});
    for (const auto& a : s.annuli) out.push_back({a.center, a.r_inner, a.r_outer});
    return out;
}

inline bool lex_less(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

inline void add_part(SpectralSet& s, const Part& p) {
    if (p.R == 0.0) s.points.push_back(p.center);
    else if (p.r == 0.0) s.disks.push_back({p.center, p.R});
    else if (p.r == p.R) s.circles.push_back({p.center, p.R});
    else s.annuli.push_back({p.center, p.r, p.R});
}

/// Sorts every family and removes exact duplicates.
inline SpectralSet canonical(SpectralSet s) {
    auto by_center = [](const auto& a, const auto& b) { return lex_less(a.center, b.center); };
    std::sort(s.points.begin(), s.points.end(), lex_less);
    s.points.erase(std::unique(s.points.begin(), s.points.end()), s.points.end());
    auto dedupe = [&](auto& v, auto key) {
        std::stable_sort(v.begin(), v.end(), [&](const auto& a, const auto& b) {
            if (a.center != b.center) return by_center(a, b);
            return key(a) < key(b);
        });
        v.erase(std::unique(v.begin(), v.end(),
                            [&](const auto& a, const auto& b) { return a.center == b.center && key(a) == key(b); }),
                v.end());
    };
    dedupe(s.disks, [](const Disk& d) { return d.radius; });
    dedupe(s.circles, [](const Circle& c) { return c.radius; });
    dedupe(s.annuli, [](const Annulus& a) { return std::make_pair(a.r_inner, a.r_outer); });
    return s;
}

/// Range [lo, hi] of distances from `from` to points of the part.
inline std::pair<double, double> distance_range(Complex from, const Part& p) {
    double d = std::abs(p.center - from);
    double lo = 0.0;
    if (d > p.R) lo = d - p.R;
    else if (d < p.r) lo = p.r - d;
    return {lo, d + p.R};
}

inline bool parts_meet(const Part& a, const Part& b, double tol) {
    auto [lo, hi] = distance_range(a.center, b);
    return std::max(lo, a.r) <= std::min(hi, a.R) + tol;
}

inline bool meets_unit_circle(const Part& p, double tol) {
    return parts_meet(p, Part{Complex{}, 1.0, 1.0}, tol);
}

}  // namespace detail

/// Points, then disks, circles and annuli: membership with a tolerance.
inline bool contains(const SpectralSet& s, Complex z, double tol = 1e-12) {
    for (const auto& p : detail::parts_of(s))
        if (detail::parts_meet(p, detail::Part{z, 0.0, 0.0}, tol)) return true;
    return false;
}

/// Image under z -> c z.
inline SpectralSet scaled(const SpectralSet& s, Complex c) {
    SpectralSet out;
    out.conservative = s.conservative;
    const double k = std::abs(c);
    for (const auto& p : detail::parts_of(s)) detail::add_part(out, {c * p.center, k * p.r, k * p.R});
    return detail::canonical(out);
}

/// Image under complex conjugation (the spectrum of the adjoint).
inline SpectralSet conjugated(const SpectralSet& s) {
    SpectralSet out;
    out.conservative = s.conservative;
    for (const auto& p : detail::parts_of(s)) detail::add_part(out, {std::conj(p.center), p.r, p.R});
    return detail::canonical(out);
}

/// S - S = {lambda - mu : lambda, mu in S}.
inline SpectralSet minkowski_diff(const SpectralSet& s) {
    detail::validate(s);
    if (s.empty()) fail(ErrorKind::DomainError, "minkowski_diff of the empty set");
    auto parts = detail::parts_of(s);
    SpectralSet out;
    out.conservative = s.conservative;
    for (const auto& a : parts) {
        for (const auto& b : parts) {
            double inner = std::max({0.0, a.r - b.R, b.r - a.R});
            detail::add_part(out, {a.center - b.center, inner, a.R + b.R});
        }
    }
    return detail::canonical(out);
}

struct KitaiResult {
    bool passes = false;
    std::size_t components = 0;
    std::optional<SpectralSet> failing_component;  // a component missing the unit circle
};

inline constexpr double kClusterTolerance = 1e-6;
inline constexpr double kCircleTolerance = 1e-9;

/// Every connected component must meet the unit circle. Components come from
/// single-linkage merging of parts that touch within 1e-6; a component meets
/// the circle when one of its parts does within 1e-9.
inline KitaiResult kitai_test(const SpectralSet& s) {
    detail::validate(s);
    if (s.empty()) fail(ErrorKind::DomainError, "kitai_test of the empty set");
    auto parts = detail::parts_of(s);
    std::vector<std::size_t> parent(parts.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j)
            if (detail::parts_meet(parts[i], parts[j], kClusterTolerance)) parent[find(i)] = find(j);

    KitaiResult res;
    res.passes = true;
    std::vector<bool> seen(parts.size(), false);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        std::size_t root = find(i);
        if (seen[root]) continue;
        seen[root] = true;
        ++res.components;
        bool meets = false;
        SpectralSet component;
        for (std::size_t j = 0; j < parts.size(); ++j) {
            if (find(j) != root) continue;
            meets = meets || detail::meets_unit_circle(parts[j], kCircleTolerance);
            detail::add_part(component, parts[j]);
        }
        if (!meets && res.passes) {
            res.passes = false;
            res.failing_component = detail::canonical(component);
        }
    }
    return res;
}

}  // namespace commutant_lab
