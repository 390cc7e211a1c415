#pragma once

/**
 * @file spectral.hpp
 * @brief Closed-form spectra of operator specs and the non-hypercyclicity
 * verdict engine for commutator maps.
 *
 * sigma(Delta_T) = sigma(T) - sigma(T). When sigma(T) is a finite point set
 * the difference set is finite, {0} is one of its components and it misses
 * the unit circle, so Kitai's condition rules hypercyclicity out. Eigenvalue
 * pairs of T and its transpose, and normality of T, give the other rules.
 * Truncations of shifts are nilpotent and are never used as spectra.
 */

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eigen.hpp"
#include "operator_spec.hpp"
#include "spectral_set.hpp"

namespace commutant_lab {

namespace detail {

/// The single window of a spec built only from finite matrices, if any.
inline std::optional<WindowedMatrix> finite_part(const OperatorSpec& spec) {
    using S = OperatorSpec;
    if (const auto* f = spec.as<S::FiniteMatrix>()) return f->matrix;
    if (const auto* s = spec.as<S::Scaled>()) {
        auto inner = finite_part(*s->inner);
        if (!inner) return std::nullopt;
        return s->c * *inner;
    }
    if (const auto* a = spec.as<S::Adjoint>()) {
        auto inner = finite_part(*a->inner);
        if (!inner) return std::nullopt;
        return adjoint(*inner);
    }
    if (const auto* s = spec.as<S::Sum>()) {
        auto l = finite_part(*s->left);
        auto r = finite_part(*s->right);
        if (!l || !r) return std::nullopt;
        return *l + *r;
    }
    return std::nullopt;
}

/// Square block of a finite spec, padded to the union of its row and column ranges.
inline std::optional<WindowedMatrix> finite_square(const OperatorSpec& spec) {
    auto m = finite_part(spec);
    if (!m) return std::nullopt;
    if (m->empty()) return std::nullopt;
    Index lo = std::min(m->row_offset(), m->col_offset());
    Index hi = std::max(m->row_end(), m->col_end());
    return m->rewindowed({lo, hi, lo, hi});
}

/// lambda when the spec is symbolically lambda I.
inline std::optional<Complex> scalar_value(const OperatorSpec& spec) {
    using S = OperatorSpec;
    if (const auto* p = spec.as<S::PolynomialInB>()) {
        if (p->coeffs.size() == 1) return p->coeffs[0];
        return std::nullopt;
    }
    if (const auto* d = spec.as<S::Diagonal>()) {
        auto range = d->alphas.finite_range();
        if (range && range->size() == 1) return range->front();
        return std::nullopt;
    }
    if (const auto* s = spec.as<S::Scaled>()) {
        auto v = scalar_value(*s->inner);
        if (!v) return std::nullopt;
        return s->c * *v;
    }
    if (const auto* a = spec.as<S::Adjoint>()) {
        auto v = scalar_value(*a->inner);
        if (!v) return std::nullopt;
        return std::conj(*v);
    }
    return std::nullopt;
}

/// Weights tending to zero: explicit lists with a zero tail, reciprocal and
/// geometric rules with |ratio| < 1. Such a shift is quasinilpotent.
inline bool weights_vanish(const SequenceRule& w) {
    switch (w.kind()) {
        case SequenceRule::Kind::Explicit: return w.tail() == Complex{};
        case SequenceRule::Kind::Reciprocal: return true;
        case SequenceRule::Kind::Geometric: return std::abs(w.ratio()) < 1.0 || w.scale() == Complex{};
        case SequenceRule::Kind::Periodic: {
            for (Complex z : w.values())
                if (z != Complex{}) return false;
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Exact spectrum when a closed form applies; std::nullopt means Unknown.
///
/// A FiniteMatrix is read as an operator on the span of its window, so its
/// spectrum is its eigenvalue set.
inline std::optional<SpectralSet> known_spectrum(const OperatorSpec& spec) {
    using S = OperatorSpec;
    if (auto sq = detail::finite_square(spec)) return SpectralSet::of_points(eigenvalues(*sq));
    if (const auto* d = spec.as<S::Diagonal>()) {
        auto range = d->alphas.finite_range();
        if (!range) return std::nullopt;
        return detail::canonical(SpectralSet::of_points(*range));
    }
    if (spec.as<S::BackwardShift>() || spec.as<S::ForwardShift>()) {
        return spec.bilateral() ? SpectralSet::circle({}, 1.0) : SpectralSet::disk({}, 1.0);
    }
    if (const auto* w = spec.as<S::WeightedBackwardShift>()) {
        if (!spec.bilateral() && detail::weights_vanish(w->weights)) return SpectralSet::of_points({Complex{}});
        auto range = w->weights.finite_range();
        if (range && range->size() == 1) {
            double r = std::abs(range->front());
            return spec.bilateral() ? SpectralSet::circle({}, r) : SpectralSet::disk({}, r);
        }
        return std::nullopt;
    }
    if (const auto* s = spec.as<S::Sum>()) {
        // sigma(lambda I + T) = lambda + sigma(T)
        auto shift_by = [](const SpectralSet& set, Complex lambda) {
            SpectralSet out;
            out.conservative = set.conservative;
            for (const auto& p : detail::parts_of(set)) detail::add_part(out, {p.center + lambda, p.r, p.R});
            return detail::canonical(out);
        };
        if (auto lambda = detail::scalar_value(*s->left)) {
            if (auto inner = known_spectrum(*s->right)) return shift_by(*inner, *lambda);
        }
        if (auto lambda = detail::scalar_value(*s->right)) {
            if (auto inner = known_spectrum(*s->left)) return shift_by(*inner, *lambda);
        }
        return std::nullopt;
    }
    if (const auto* p = spec.as<S::PolynomialInB>()) {
        if (p->coeffs.size() == 1) return SpectralSet::of_points({p->coeffs[0]});
        if (p->coeffs.size() == 2) {
            // sigma(c0 + c1 B) = c0 + c1 * sigma(B)
            Complex c0 = p->coeffs[0];
            double r = std::abs(p->coeffs[1]);
            return spec.bilateral() ? SpectralSet::circle(c0, r) : SpectralSet::disk(c0, r);
        }
        return std::nullopt;
    }
    if (const auto* s = spec.as<S::Scaled>()) {
        auto inner = known_spectrum(*s->inner);
        if (!inner) return std::nullopt;
        return scaled(*inner, s->c);
    }
    if (const auto* a = spec.as<S::Adjoint>()) {
        auto inner = known_spectrum(*a->inner);
        if (!inner) return std::nullopt;
        return conjugated(*inner);
    }
    return std::nullopt;
}

enum class Conclusion { NotHypercyclic, NotSupercyclic, Inconclusive };
enum class VerdictRule { KitaiComponent, RieszSpectrum, PointSpectrumPair, NormalCommutator, ZeroMap };

inline std::string_view to_string(Conclusion c) {
    switch (c) {
        case Conclusion::NotHypercyclic: return "NotHypercyclic";
        case Conclusion::NotSupercyclic: return "NotSupercyclic";
        case Conclusion::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

inline std::string_view to_string(VerdictRule r) {
    switch (r) {
        case VerdictRule::KitaiComponent: return "KitaiComponent";
        case VerdictRule::RieszSpectrum: return "RieszSpectrum";
        case VerdictRule::PointSpectrumPair: return "PointSpectrumPair";
        case VerdictRule::NormalCommutator: return "NormalCommutator";
        case VerdictRule::ZeroMap: return "ZeroMap";
    }
    return "ZeroMap";
}

struct VerdictEvidence {
    std::optional<SpectralSet> spectrum;          // sigma(T)
    std::optional<SpectralSet> commutator_spectrum;  // sigma(T) - sigma(T)
    std::optional<SpectralSet> failing_component;
    std::optional<Complex> alpha;                 // eigenvalue of T
    std::optional<Complex> beta;                  // eigenvalue of the transpose of T
    std::optional<double> normality_defect;       // ||T*T - TT*||_HS
    std::string note;
};

struct Verdict {
    Conclusion conclusion = Conclusion::Inconclusive;
    std::optional<VerdictRule> rule;
    VerdictEvidence evidence;
};

inline constexpr double kNormalityTolerance = 1e-10;

/// Eigenvalue pair (alpha for T with eigenvector e_p, beta for the transpose
/// with eigenvector e_q) for specs that are diagonal in the standard basis.
inline std::optional<std::pair<Complex, Complex>> point_spectrum_pair(const OperatorSpec& spec) {
    using S = OperatorSpec;
    const Index first = spec.bilateral() ? 0 : 1;
    // symbol(j) = <T e_j, e_j> for diagonal specs
    std::function<std::optional<Complex>(const OperatorSpec&, Index)> symbol =
        [&](const OperatorSpec& t, Index j) -> std::optional<Complex> {
        if (const auto* d = t.as<S::Diagonal>()) return d->alphas.at(j);
        if (const auto* p = t.as<S::PolynomialInB>()) {
            if (p->coeffs.size() == 1) return p->coeffs[0];
            return std::nullopt;
        }
        if (const auto* s = t.as<S::Scaled>()) {
            auto v = symbol(*s->inner, j);
            if (!v) return std::nullopt;
            return s->c * *v;
        }
        if (const auto* s = t.as<S::Sum>()) {
            auto l = symbol(*s->left, j);
            auto r = symbol(*s->right, j);
            if (!l || !r) return std::nullopt;
            return *l + *r;
        }
        if (const auto* a = t.as<S::Adjoint>()) {
            auto v = symbol(*a->inner, j);
            if (!v) return std::nullopt;
            return std::conj(*v);
        }
        return std::nullopt;
    };
    auto a = symbol(spec, first);
    auto b = symbol(spec, first + 1);
    if (!a || !b) return std::nullopt;
    return std::make_pair(*a, *b);
}

/// Specs that are normal by construction: diagonals, bilateral shifts and
/// polynomials in them, scalar multiples, adjoints and scalar translates.
inline bool symbolically_normal(const OperatorSpec& spec) {
    using S = OperatorSpec;
    if (spec.as<S::BackwardShift>() || spec.as<S::ForwardShift>()) return spec.bilateral();
    if (const auto* p = spec.as<S::PolynomialInB>()) return spec.bilateral() || p->coeffs.size() == 1;
    if (spec.as<S::Diagonal>()) return true;
    if (const auto* s = spec.as<S::Scaled>()) return symbolically_normal(*s->inner);
    if (const auto* a = spec.as<S::Adjoint>()) return symbolically_normal(*a->inner);
    if (const auto* s = spec.as<S::Sum>()) {
        if (detail::scalar_value(*s->left)) return symbolically_normal(*s->right);
        if (detail::scalar_value(*s->right)) return symbolically_normal(*s->left);
    }
    return false;
}

/// Runs the rules in order: zero map, numerical normality of a finite T,
/// discrete spectrum, eigenvalue pair, symbolic normality.
inline Verdict verdict_commutator(const OperatorSpec& spec) {
    Verdict v;
    auto sigma = known_spectrum(spec);
    if (sigma) {
        v.evidence.spectrum = sigma;
        v.evidence.commutator_spectrum = minkowski_diff(*sigma);
    }

    // Scalar multiples of the identity.
    bool zero_map = is_zero(strip_identity(spec));
    if (!zero_map) {
        if (auto sq = detail::finite_square(spec)) {
            WindowedMatrix lambda_i = WindowedMatrix::diagonal(
                sq->row_offset(), std::vector<Complex>(sq->rows(), (*sq)(sq->row_offset(), sq->col_offset())),
                sq->grid());
            zero_map = max_abs_diff(*sq, lambda_i) == 0.0;
        }
    }
    if (zero_map) {
        v.conclusion = Conclusion::NotHypercyclic;
        v.rule = VerdictRule::ZeroMap;
        v.evidence.note = "T is a scalar multiple of the identity, so Delta_T = 0";
        return v;
    }

    if (auto sq = detail::finite_square(spec)) {
        WindowedMatrix adj = adjoint(*sq);
        double defect = norm(matmul(adj, *sq) - matmul(*sq, adj), NormKind::HilbertSchmidt);
        double scale = std::max(1.0, std::pow(norm(*sq, NormKind::HilbertSchmidt), 2));
        v.evidence.normality_defect = defect;
        if (defect <= kNormalityTolerance * scale) {
            v.conclusion = Conclusion::NotSupercyclic;
            v.rule = VerdictRule::NormalCommutator;
            v.evidence.note = "T is normal; Delta_T is not supercyclic on the Hilbert-Schmidt class";
            return v;
        }
    }

    if (sigma && sigma->discrete() && !sigma->conservative) {
        KitaiResult kitai = kitai_test(*v.evidence.commutator_spectrum);
        if (!kitai.passes) {
            v.conclusion = Conclusion::NotHypercyclic;
            v.rule = VerdictRule::RieszSpectrum;
            v.evidence.failing_component = kitai.failing_component;
            v.evidence.note = "sigma(Delta_T) is discrete and its component {0} misses the unit circle";
            return v;
        }
    }

    if (auto pair = point_spectrum_pair(spec)) {
        v.conclusion = Conclusion::NotHypercyclic;
        v.rule = VerdictRule::PointSpectrumPair;
        v.evidence.alpha = pair->first;
        v.evidence.beta = pair->second;
        v.evidence.note = "beta - alpha is an eigenvalue of the adjoint of Delta_T";
        return v;
    }

    if (symbolically_normal(spec)) {
        v.conclusion = Conclusion::NotSupercyclic;
        v.rule = VerdictRule::NormalCommutator;
        v.evidence.note = "T is normal; Delta_T is not supercyclic on the Hilbert-Schmidt class";
        return v;
    }

    v.conclusion = Conclusion::Inconclusive;
    v.evidence.note = sigma ? "spectral tests do not rule out hypercyclicity" : "spectrum unknown";
    return v;
}

}  // namespace commutant_lab
