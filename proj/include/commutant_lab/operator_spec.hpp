#pragma once

/**
 * @file operator_spec.hpp
 * @brief Symbolic bounded operators on l2 with exact action on finitely
 * supported vectors.
 *
 * An OperatorSpec never approximates: apply() returns the exact image of a
 * finitely supported vector, and materialize() returns the exact block
 * <T e_j, e_i> over a window. Support bookkeeping (reach / band / growth) is
 * what lets the superoperator layer size its outputs without truncation.
 */

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "linalg.hpp"

namespace commutant_lab {

/// A total rule j -> alpha_j for the diagonal and weight sequences.
class SequenceRule {
public:
    enum class Kind { Explicit, Periodic, Reciprocal, Geometric };

    /// alpha_j = values[j - start] inside the list, `tail` elsewhere.
    static SequenceRule explicit_list(std::vector<Complex> values, Complex tail = {}, Index start = 1) {
        SequenceRule r(Kind::Explicit);
        for (Complex z : values) require_finite(z, "SequenceRule");
        require_finite(tail, "SequenceRule");
        r.values_ = std::move(values);
        r.tail_ = tail;
        r.start_ = start;
        return r;
    }

    /// alpha_j = values[(j - start) mod p].
    static SequenceRule periodic(std::vector<Complex> values, Index start = 1) {
        if (values.empty()) fail(ErrorKind::DomainError, "periodic rule needs at least one value");
        SequenceRule r(Kind::Periodic);
        for (Complex z : values) require_finite(z, "SequenceRule");
        r.values_ = std::move(values);
        r.start_ = start;
        return r;
    }

    /// alpha_j = scale / j, defined for j >= 1.
    static SequenceRule reciprocal(Complex scale = 1.0) {
        SequenceRule r(Kind::Reciprocal);
        require_finite(scale, "SequenceRule");
        r.scale_ = scale;
        return r;
    }

    /// alpha_j = scale * ratio^(j - 1), defined for j >= 1; |ratio| <= 1 keeps it bounded.
    static SequenceRule geometric(Complex scale, Complex ratio) {
        if (std::abs(ratio) > 1.0) fail(ErrorKind::DomainError, "geometric rule with |ratio| > 1 is unbounded");
        SequenceRule r(Kind::Geometric);
        require_finite(scale, "SequenceRule");
        r.scale_ = scale;
        r.ratio_ = ratio;
        return r;
    }

    static SequenceRule constant(Complex value) { return periodic({value}); }

    Kind kind() const noexcept { return kind_; }
    const std::vector<Complex>& values() const noexcept { return values_; }
    Complex tail() const noexcept { return tail_; }
    Complex scale() const noexcept { return scale_; }
    Complex ratio() const noexcept { return ratio_; }
    Index start() const noexcept { return start_; }

    Complex at(Index j) const {
        switch (kind_) {
            case Kind::Explicit: {
                if (j < start_ || j >= start_ + static_cast<Index>(values_.size())) return tail_;
                return values_[static_cast<std::size_t>(j - start_)];
            }
            case Kind::Periodic: {
                Index p = static_cast<Index>(values_.size());
                Index k = ((j - start_) % p + p) % p;
                return values_[static_cast<std::size_t>(k)];
            }
            case Kind::Reciprocal:
                if (j < 1) fail(ErrorKind::DomainError, "reciprocal rule is defined for j >= 1 only");
                return scale_ / static_cast<double>(j);
            case Kind::Geometric: {
                if (j < 1) fail(ErrorKind::DomainError, "geometric rule is defined for j >= 1 only");
                Complex v = scale_;
                for (Index k = 1; k < j; ++k) v *= ratio_;
                return v;
            }
        }
        return {};
    }

    /// Distinct values when the rule has finite range (the closure is then the range itself).
    std::optional<std::vector<Complex>> finite_range() const {
        std::vector<Complex> raw;
        switch (kind_) {
            case Kind::Explicit:
                raw = values_;
                raw.push_back(tail_);
                break;
            case Kind::Periodic:
                raw = values_;
                break;
            case Kind::Reciprocal:
                if (scale_ == Complex{}) return std::vector<Complex>{Complex{}};
                return std::nullopt;
            case Kind::Geometric:
                if (scale_ == Complex{} || ratio_ == Complex(1.0)) return std::vector<Complex>{scale_};
                if (ratio_ == Complex{}) return std::vector<Complex>{scale_, Complex{}};
                return std::nullopt;
        }
        std::vector<Complex> out;
        for (Complex z : raw) {
            bool seen = false;
            for (Complex w : out) seen = seen || (w == z);
            if (!seen) out.push_back(z);
        }
        return out;
    }

private:
    explicit SequenceRule(Kind kind) : kind_(kind) {}

    Kind kind_;
    std::vector<Complex> values_;
    Complex tail_{};
    Complex scale_{1.0};
    Complex ratio_{};
    Index start_ = 1;
};

/// Half-open index range; used for the reachable support of an operator.
struct IndexRange {
    Index begin = 1;
    Index end = 1;
    bool empty() const noexcept { return end <= begin; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Nonzero matrix entries T_{i,k} satisfy lo <= i - k <= hi.
struct Band {
    Index lo = 0;
    Index hi = 0;
    friend bool operator==(const Band&, const Band&) = default;
};

/// Support growth of L_T or R_T: rows <= R + row_delta, cols <= C + col_delta.
struct SupportGrowth {
    Index row_delta = 0;
    Index col_delta = 0;
    friend bool operator==(const SupportGrowth&, const SupportGrowth&) = default;
};

class OperatorSpec {
public:
    using Ptr = std::shared_ptr<const OperatorSpec>;

    struct BackwardShift {};
    struct ForwardShift {};
    struct WeightedBackwardShift { SequenceRule weights; };
    struct Diagonal { SequenceRule alphas; };
    struct PolynomialInB { std::vector<Complex> coeffs; };
    struct FiniteMatrix { WindowedMatrix matrix; };
    struct Scaled { Complex c; Ptr inner; };
    struct Sum { Ptr left; Ptr right; };
    struct Adjoint { Ptr inner; };

    using Node = std::variant<BackwardShift, ForwardShift, WeightedBackwardShift, Diagonal, PolynomialInB,
                              FiniteMatrix, Scaled, Sum, Adjoint>;

    static OperatorSpec backward_shift(Grid grid = Grid::Unilateral) { return {BackwardShift{}, grid}; }
    static OperatorSpec bilateral_backward_shift() { return {BackwardShift{}, Grid::Bilateral}; }
    static OperatorSpec forward_shift(Grid grid = Grid::Unilateral) { return {ForwardShift{}, grid}; }
    static OperatorSpec weighted_backward_shift(SequenceRule w, Grid grid = Grid::Unilateral) {
        return {WeightedBackwardShift{std::move(w)}, grid};
    }
    static OperatorSpec diagonal(SequenceRule alphas, Grid grid = Grid::Unilateral) {
        return {Diagonal{std::move(alphas)}, grid};
    }

    /// p(B) = sum_j coeffs[j] B^j. Trailing zero coefficients are dropped.
    static OperatorSpec poly_b(std::vector<Complex> coeffs, Grid grid = Grid::Unilateral) {
        for (Complex z : coeffs) require_finite(z, "poly_b");
        while (coeffs.size() > 1 && coeffs.back() == Complex{}) coeffs.pop_back();
        if (coeffs.empty()) coeffs.push_back(Complex{});
        return {PolynomialInB{std::move(coeffs)}, grid};
    }

    static OperatorSpec identity(Grid grid = Grid::Unilateral) { return poly_b({Complex(1.0)}, grid); }

    static OperatorSpec finite(WindowedMatrix m) {
        Grid g = m.grid();
        return {FiniteMatrix{std::move(m)}, g};
    }

    static OperatorSpec scaled(Complex c, OperatorSpec inner) {
        require_finite(c, "scaled");
        Grid g = inner.grid();
        return {Scaled{c, std::make_shared<const OperatorSpec>(std::move(inner))}, g};
    }

    static OperatorSpec sum(OperatorSpec left, OperatorSpec right) {
        detail::check_same_grid(left.grid(), right.grid());
        Grid g = left.grid();
        return {Sum{std::make_shared<const OperatorSpec>(std::move(left)),
                    std::make_shared<const OperatorSpec>(std::move(right))},
                g};
    }

    static OperatorSpec adjoint(OperatorSpec inner) {
        Grid g = inner.grid();
        return {Adjoint{std::make_shared<const OperatorSpec>(std::move(inner))}, g};
    }

    const Node& node() const noexcept { return node_; }
    Grid grid() const noexcept { return grid_; }
    bool bilateral() const noexcept { return grid_ == Grid::Bilateral; }

    template <class T>
    const T* as() const noexcept {
        return std::get_if<T>(&node_);
    }

private:
    OperatorSpec(Node node, Grid grid) : node_(std::move(node)), grid_(grid) {}

    Node node_;
    Grid grid_;
};

namespace detail {

inline IndexRange clip_to_grid(IndexRange r, Grid grid) {
    if (grid == Grid::Unilateral) r.begin = std::max<Index>(r.begin, 1);
    if (r.empty()) return {grid == Grid::Unilateral ? 1 : 0, grid == Grid::Unilateral ? 1 : 0};
    return r;
}

inline IndexRange hull(IndexRange a, IndexRange b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return {std::min(a.begin, b.begin), std::max(a.end, b.end)};
}

inline Vec2 shift_vector(const Vec2& x, Index delta) {
    if (x.empty()) return x;
    std::vector<Complex> e(x.entries().begin(), x.entries().end());
    Index off = x.offset() + delta;
    if (x.grid() == Grid::Unilateral && off < 1) {
        std::size_t drop = static_cast<std::size_t>(1 - off);
        if (drop >= e.size()) return Vec2(1, {}, x.grid());
        e.erase(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(drop));
        off = 1;
    }
    return Vec2(off, std::move(e), x.grid());
}

inline Vec2 conj(const Vec2& x) {
    std::vector<Complex> e(x.entries().begin(), x.entries().end());
    for (Complex& z : e) z = std::conj(z);
    return Vec2(x.offset(), std::move(e), x.grid());
}

inline Vec2 pointwise(const Vec2& x, auto&& weight) {
    std::vector<Complex> e(x.entries().begin(), x.entries().end());
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = weight(x.offset() + static_cast<Index>(k)) * e[k];
    return Vec2(x.offset(), std::move(e), x.grid());
}

inline std::pair<Index, Index> poly_degree_span(const std::vector<Complex>& coeffs) {
    Index lo = -1;
    Index hi = -1;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j] == Complex{}) continue;
        if (lo < 0) lo = static_cast<Index>(j);
        hi = static_cast<Index>(j);
    }
    return {lo, hi};
}

}  // namespace detail

/// Exact image T x (or T* x when `adjoint` is set).
inline Vec2 apply(const OperatorSpec& spec, const Vec2& x, bool adjoint = false) {
    if (spec.grid() != x.grid()) fail(ErrorKind::BilateralMismatch, "operator and vector grids differ");
    using S = OperatorSpec;
    return std::visit(
        [&](const auto& n) -> Vec2 {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, S::BackwardShift>) {
                return detail::shift_vector(x, adjoint ? 1 : -1);
            } else if constexpr (std::is_same_v<N, S::ForwardShift>) {
                return detail::shift_vector(x, adjoint ? -1 : 1);
            } else if constexpr (std::is_same_v<N, S::WeightedBackwardShift>) {
                // B_w e_j = w_j e_{j-1};  B_w* e_i = conj(w_{i+1}) e_{i+1}.
                if (!adjoint) {
                    Vec2 weighted = detail::pointwise(x, [&](Index j) { return n.weights.at(j); });
                    return detail::shift_vector(weighted, -1);
                }
                Vec2 moved = detail::shift_vector(x, 1);
                return detail::pointwise(moved, [&](Index j) { return std::conj(n.weights.at(j)); });
            } else if constexpr (std::is_same_v<N, S::Diagonal>) {
                return detail::pointwise(x, [&](Index j) {
                    Complex a = n.alphas.at(j);
                    return adjoint ? std::conj(a) : a;
                });
            } else if constexpr (std::is_same_v<N, S::PolynomialInB>) {
                Vec2 acc(x.grid() == Grid::Unilateral ? 1 : 0, {}, x.grid());
                Vec2 power = x;
                for (std::size_t j = 0; j < n.coeffs.size(); ++j) {
                    if (j > 0) power = detail::shift_vector(power, adjoint ? 1 : -1);
                    Complex c = adjoint ? std::conj(n.coeffs[j]) : n.coeffs[j];
                    if (c == Complex{} || power.empty()) continue;
                    acc = acc + c * power;
                }
                return acc;
            } else if constexpr (std::is_same_v<N, S::FiniteMatrix>) {
                const WindowedMatrix& m = n.matrix;
                if (m.empty()) return Vec2(x.grid() == Grid::Unilateral ? 1 : 0, {}, x.grid());
                if (!adjoint) {
                    std::vector<Complex> out(m.rows());
                    for (Index i = m.row_offset(); i < m.row_end(); ++i) {
                        Complex s{};
                        for (Index j = m.col_offset(); j < m.col_end(); ++j) s += m(i, j) * x[j];
                        out[static_cast<std::size_t>(i - m.row_offset())] = s;
                    }
                    return Vec2(m.row_offset(), std::move(out), x.grid());
                }
                std::vector<Complex> out(m.cols());
                for (Index j = m.col_offset(); j < m.col_end(); ++j) {
                    Complex s{};
                    for (Index i = m.row_offset(); i < m.row_end(); ++i) s += std::conj(m(i, j)) * x[i];
                    out[static_cast<std::size_t>(j - m.col_offset())] = s;
                }
                return Vec2(m.col_offset(), std::move(out), x.grid());
            } else if constexpr (std::is_same_v<N, S::Scaled>) {
                Complex c = adjoint ? std::conj(n.c) : n.c;
                return c * apply(*n.inner, x, adjoint);
            } else if constexpr (std::is_same_v<N, S::Sum>) {
                return apply(*n.left, x, adjoint) + apply(*n.right, x, adjoint);
            } else {
                return apply(*n.inner, x, !adjoint);
            }
        },
        spec.node());
}

/// Exact row action: the row vector a^T T, i.e. T^T a = conj(T* conj(a)).
inline Vec2 apply_transpose(const OperatorSpec& spec, const Vec2& a) {
    return detail::conj(apply(spec, detail::conj(a), true));
}

/// Indices that T (or T*) can reach from a vector supported in `from`.
inline IndexRange reach(const OperatorSpec& spec, IndexRange from, bool adjoint = false) {
    using S = OperatorSpec;
    const Grid grid = spec.grid();
    if (from.empty()) return detail::clip_to_grid({0, 0}, grid);
    IndexRange out = std::visit(
        [&](const auto& n) -> IndexRange {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, S::BackwardShift> || std::is_same_v<N, S::WeightedBackwardShift>) {
                Index d = adjoint ? 1 : -1;
                return {from.begin + d, from.end + d};
            } else if constexpr (std::is_same_v<N, S::ForwardShift>) {
                Index d = adjoint ? -1 : 1;
                return {from.begin + d, from.end + d};
            } else if constexpr (std::is_same_v<N, S::Diagonal>) {
                return from;
            } else if constexpr (std::is_same_v<N, S::PolynomialInB>) {
                auto [lo, hi] = detail::poly_degree_span(n.coeffs);
                if (lo < 0) return {0, 0};
                if (adjoint) return {from.begin + lo, from.end + hi};
                return {from.begin - hi, from.end - lo};
            } else if constexpr (std::is_same_v<N, S::FiniteMatrix>) {
                const WindowedMatrix& m = n.matrix;
                if (m.empty()) return {0, 0};
                IndexRange domain = adjoint ? IndexRange{m.row_offset(), m.row_end()}
                                            : IndexRange{m.col_offset(), m.col_end()};
                if (std::max(domain.begin, from.begin) >= std::min(domain.end, from.end)) return {0, 0};
                return adjoint ? IndexRange{m.col_offset(), m.col_end()} : IndexRange{m.row_offset(), m.row_end()};
            } else if constexpr (std::is_same_v<N, S::Scaled>) {
                return reach(*n.inner, from, adjoint);
            } else if constexpr (std::is_same_v<N, S::Sum>) {
                return detail::hull(reach(*n.left, from, adjoint), reach(*n.right, from, adjoint));
            } else {
                return reach(*n.inner, from, !adjoint);
            }
        },
        spec.node());
    return detail::clip_to_grid(out, grid);
}

/// Conservative diagonal band of the matrix of T.
inline Band band(const OperatorSpec& spec) {
    using S = OperatorSpec;
    return std::visit(
        [&](const auto& n) -> Band {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, S::BackwardShift> || std::is_same_v<N, S::WeightedBackwardShift>) {
                return {-1, -1};
            } else if constexpr (std::is_same_v<N, S::ForwardShift>) {
                return {1, 1};
            } else if constexpr (std::is_same_v<N, S::Diagonal>) {
                return {0, 0};
            } else if constexpr (std::is_same_v<N, S::PolynomialInB>) {
                auto [lo, hi] = detail::poly_degree_span(n.coeffs);
                if (lo < 0) return {0, 0};
                return {-hi, -lo};
            } else if constexpr (std::is_same_v<N, S::FiniteMatrix>) {
                const WindowedMatrix& m = n.matrix;
                if (m.empty()) return {0, 0};
                return {m.row_offset() - (m.col_end() - 1), (m.row_end() - 1) - m.col_offset()};
            } else if constexpr (std::is_same_v<N, S::Scaled>) {
                return band(*n.inner);
            } else if constexpr (std::is_same_v<N, S::Sum>) {
                Band l = band(*n.left);
                Band r = band(*n.right);
                return {std::min(l.lo, r.lo), std::max(l.hi, r.hi)};
            } else {
                Band b = band(*n.inner);
                return {-b.hi, -b.lo};
            }
        },
        spec.node());
}

/// Growth of (L_T, R_T). Every constructible spec has a finite band, so
/// UnboundedGrowth is reserved for foreign specs and never raised here.
inline std::pair<SupportGrowth, SupportGrowth> growth(const OperatorSpec& spec) {
    Band b = band(spec);
    return {SupportGrowth{b.hi, 0}, SupportGrowth{0, -b.lo}};
}

/// Exact block <T e_j, e_i> for (i, j) in the window.
inline WindowedMatrix materialize(const OperatorSpec& spec, const Window& w) {
    WindowedMatrix out(w, spec.grid());
    for (Index j = w.col_begin; j < w.col_end; ++j) {
        Vec2 col = apply(spec, Vec2::basis(j, spec.grid()));
        for (Index i = std::max(w.row_begin, col.offset()); i < std::min(w.row_end, col.end()); ++i)
            out.set(i, j, col[i]);
    }
    return out;
}

/// Columns of the window whose image has support outside the window rows.
inline std::vector<Index> boundary_columns(const OperatorSpec& spec, const Window& w) {
    std::vector<Index> out;
    for (Index j = w.col_begin; j < w.col_end; ++j) {
        Vec2 col = apply(spec, Vec2::basis(j, spec.grid())).trimmed();
        if (!col.empty() && (col.offset() < w.row_begin || col.end() > w.row_end)) out.push_back(j);
    }
    return out;
}

/// Returns T with its symbolically visible scalar-identity part removed.
/// Delta_{T + lambda I} = Delta_T, so commutators may use this form exactly.
inline OperatorSpec strip_identity(const OperatorSpec& spec) {
    using S = OperatorSpec;
    if (const auto* p = spec.as<S::PolynomialInB>()) {
        std::vector<Complex> c = p->coeffs;
        c[0] = Complex{};
        return OperatorSpec::poly_b(std::move(c), spec.grid());
    }
    if (const auto* d = spec.as<S::Diagonal>()) {
        auto range = d->alphas.finite_range();
        if (range && range->size() == 1) return OperatorSpec::poly_b({Complex{}}, spec.grid());
        return spec;
    }
    if (const auto* s = spec.as<S::Scaled>()) return OperatorSpec::scaled(s->c, strip_identity(*s->inner));
    if (const auto* s = spec.as<S::Sum>()) return OperatorSpec::sum(strip_identity(*s->left), strip_identity(*s->right));
    if (const auto* a = spec.as<S::Adjoint>()) return OperatorSpec::adjoint(strip_identity(*a->inner));
    return spec;
}

/// Symbolic zero test (exact; a FiniteMatrix is zero only if every entry is).
inline bool is_zero(const OperatorSpec& spec) {
    using S = OperatorSpec;
    if (const auto* p = spec.as<S::PolynomialInB>()) {
        for (Complex c : p->coeffs)
            if (c != Complex{}) return false;
        return true;
    }
    if (const auto* d = spec.as<S::Diagonal>()) {
        auto range = d->alphas.finite_range();
        return range && range->size() == 1 && range->front() == Complex{};
    }
    if (const auto* w = spec.as<S::WeightedBackwardShift>()) {
        auto range = w->weights.finite_range();
        return range && range->size() == 1 && range->front() == Complex{};
    }
    if (const auto* f = spec.as<S::FiniteMatrix>()) return max_abs(f->matrix) == 0.0;
    if (const auto* s = spec.as<S::Scaled>()) return s->c == Complex{} || is_zero(*s->inner);
    if (const auto* s = spec.as<S::Sum>()) return is_zero(*s->left) && is_zero(*s->right);
    if (const auto* a = spec.as<S::Adjoint>()) return is_zero(*a->inner);
    return false;
}

}  // namespace commutant_lab
