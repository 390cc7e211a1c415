#pragma once

/**
 * @file elementary_map.hpp
 * @brief Left/right multipliers, commutator maps Delta_T = L_T - R_T, their
 * orbits, and the diagonal and corner projections on windowed matrices.
 *
 * Outputs are exact: L_T acts column by column through apply(), R_T row by row
 * through apply_transpose(), and the output window is the reachable support,
 * so nothing is ever truncated. Orbits allocate one window that covers every
 * step up front and refuse to exceed the configured cap.
 */

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "operator_spec.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace commutant_lab {

class ElementaryMap {
public:
    using Ptr = std::shared_ptr<const ElementaryMap>;

    struct Left { OperatorSpec op; };
    struct Right { OperatorSpec op; };
    struct Commutator { OperatorSpec op; };
    struct Power { Ptr inner; std::size_t n; };
    struct Scaled { Complex c; Ptr inner; };
    struct Sum { Ptr left; Ptr right; };

    using Node = std::variant<Left, Right, Commutator, Power, Scaled, Sum>;

    static ElementaryMap left(OperatorSpec t) { Grid g = t.grid(); return {Left{std::move(t)}, g}; }
    static ElementaryMap right(OperatorSpec t) { Grid g = t.grid(); return {Right{std::move(t)}, g}; }
    static ElementaryMap commutator(OperatorSpec t) { Grid g = t.grid(); return {Commutator{std::move(t)}, g}; }

    static ElementaryMap power(ElementaryMap inner, std::size_t n) {
        Grid g = inner.grid();
        return {Power{std::make_shared<const ElementaryMap>(std::move(inner)), n}, g};
    }

    static ElementaryMap scaled(Complex c, ElementaryMap inner) {
        require_finite(c, "ElementaryMap::scaled");
        Grid g = inner.grid();
        return {Scaled{c, std::make_shared<const ElementaryMap>(std::move(inner))}, g};
    }

    static ElementaryMap sum(ElementaryMap left, ElementaryMap right) {
        detail::check_same_grid(left.grid(), right.grid());
        Grid g = left.grid();
        return {Sum{std::make_shared<const ElementaryMap>(std::move(left)),
                    std::make_shared<const ElementaryMap>(std::move(right))},
                g};
    }

    const Node& node() const noexcept { return node_; }
    Grid grid() const noexcept { return grid_; }

    template <class T>
    const T* as() const noexcept {
        return std::get_if<T>(&node_);
    }

private:
    ElementaryMap(Node node, Grid grid) : node_(std::move(node)), grid_(grid) {}

    Node node_;
    Grid grid_;
};

namespace detail {

inline Window empty_window(Grid grid) {
    Index o = grid == Grid::Unilateral ? 1 : 0;
    return {o, o, o, o};
}

inline Window left_window(const OperatorSpec& t, const Window& in) {
    if (in.empty()) return empty_window(t.grid());
    IndexRange rows = reach(t, {in.row_begin, in.row_end});
    if (rows.empty()) return empty_window(t.grid());
    return {rows.begin, rows.end, in.col_begin, in.col_end};
}

inline Window right_window(const OperatorSpec& t, const Window& in) {
    if (in.empty()) return empty_window(t.grid());
    IndexRange cols = reach(t, {in.col_begin, in.col_end}, true);
    if (cols.empty()) return empty_window(t.grid());
    return {in.row_begin, in.row_end, cols.begin, cols.end};
}

}  // namespace detail

/// Bounding window of m(A) for any A supported in `in`.
inline Window output_window(const ElementaryMap& m, const Window& in) {
    using M = ElementaryMap;
    return std::visit(
        [&](const auto& n) -> Window {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, M::Left>) {
                return detail::left_window(n.op, in);
            } else if constexpr (std::is_same_v<N, M::Right>) {
                return detail::right_window(n.op, in);
            } else if constexpr (std::is_same_v<N, M::Commutator>) {
                OperatorSpec t = strip_identity(n.op);
                if (is_zero(t)) return detail::empty_window(m.grid());
                Window l = detail::left_window(t, in);
                Window r = detail::right_window(t, in);
                return hull(l, r);
            } else if constexpr (std::is_same_v<N, M::Power>) {
                Window w = in;
                for (std::size_t k = 0; k < n.n && !w.empty(); ++k) w = output_window(*n.inner, w);
                return w;
            } else if constexpr (std::is_same_v<N, M::Scaled>) {
                return output_window(*n.inner, in);
            } else {
                return hull(output_window(*n.left, in), output_window(*n.right, in));
            }
        },
        m.node());
}

/// T A, exact.
inline WindowedMatrix left_multiply(const OperatorSpec& t, const WindowedMatrix& a) {
    if (t.grid() != a.grid()) fail(ErrorKind::BilateralMismatch, "operator and matrix grids differ");
    Window w = a.empty() ? detail::empty_window(a.grid()) : detail::left_window(t, a.window());
    WindowedMatrix out(w, a.grid());
    if (w.empty()) return out;
    for (Index j = a.col_offset(); j < a.col_end(); ++j) {
        Vec2 col = apply(t, a.column(j));
        for (Index i = col.offset(); i < col.end(); ++i)
            if (col[i] != Complex{}) out.set(i, j, col[i]);
    }
    return out;
}

/// A T, exact.
inline WindowedMatrix right_multiply(const OperatorSpec& t, const WindowedMatrix& a) {
    if (t.grid() != a.grid()) fail(ErrorKind::BilateralMismatch, "operator and matrix grids differ");
    Window w = a.empty() ? detail::empty_window(a.grid()) : detail::right_window(t, a.window());
    WindowedMatrix out(w, a.grid());
    if (w.empty()) return out;
    for (Index i = a.row_offset(); i < a.row_end(); ++i) {
        Vec2 row = apply_transpose(t, a.row(i));
        for (Index j = row.offset(); j < row.end(); ++j)
            if (row[j] != Complex{}) out.set(i, j, row[j]);
    }
    return out;
}

inline WindowedMatrix apply_map(const ElementaryMap& m, const WindowedMatrix& a) {
    if (m.grid() != a.grid()) fail(ErrorKind::BilateralMismatch, "map and matrix grids differ");
    using M = ElementaryMap;
    return std::visit(
        [&](const auto& n) -> WindowedMatrix {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, M::Left>) {
                return left_multiply(n.op, a);
            } else if constexpr (std::is_same_v<N, M::Right>) {
                return right_multiply(n.op, a);
            } else if constexpr (std::is_same_v<N, M::Commutator>) {
                OperatorSpec t = strip_identity(n.op);
                if (is_zero(t)) return WindowedMatrix(detail::empty_window(a.grid()), a.grid());
                return left_multiply(t, a) - right_multiply(t, a);
            } else if constexpr (std::is_same_v<N, M::Power>) {
                WindowedMatrix v = a;
                for (std::size_t k = 0; k < n.n; ++k) v = apply_map(*n.inner, v);
                return v;
            } else if constexpr (std::is_same_v<N, M::Scaled>) {
                return n.c * apply_map(*n.inner, a);
            } else {
                return apply_map(*n.left, a) + apply_map(*n.right, a);
            }
        },
        m.node());
}

struct OrbitTarget {
    std::string id;
    WindowedMatrix value;
};

struct OrbitRecord {
    std::size_t step = 0;
    WindowedMatrix value;
    std::map<std::string, double> distances;
};

struct OrbitOptions {
    NormKind norm = NormKind::Operator;
    std::size_t window_cap = 1024;
    unsigned threads = 0;
};

/// Window covering the orbit values for steps 0..n_max. Raises WindowOverflow
/// when it exceeds the cap.
inline Window orbit_window(const ElementaryMap& m, const Window& start, std::size_t n_max, std::size_t cap) {
    Window w = start;
    Window all = start;
    auto check = [&](const Window& x) {
        if (static_cast<std::size_t>(x.rows()) > cap || static_cast<std::size_t>(x.cols()) > cap)
            fail(ErrorKind::WindowOverflow, "orbit window exceeds the cap of " + std::to_string(cap));
    };
    check(all);
    for (std::size_t k = 0; k < n_max && !w.empty(); ++k) {
        w = output_window(m, w);
        all = hull(all, w);
        check(all);
    }
    return all;
}

/// Values m^n(A0) for n = 0..n_max together with their distances to each target.
inline std::vector<OrbitRecord> orbit(const ElementaryMap& m, const WindowedMatrix& a0, std::size_t n_max,
                                      const std::vector<OrbitTarget>& targets, const OrbitOptions& opts = {}) {
    if (m.grid() != a0.grid()) fail(ErrorKind::BilateralMismatch, "map and matrix grids differ");
    Window all = a0.empty() ? a0.window() : orbit_window(m, a0.window(), n_max, opts.window_cap);

    std::vector<OrbitRecord> records(n_max + 1);
    WindowedMatrix current = a0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (n > 0) current = apply_map(m, current);
        records[n].step = n;
        records[n].value = all.empty() ? current : current.rewindowed(all);
    }
    parallel_for(records.size(), opts.threads, [&](std::size_t n) {
        for (const auto& t : targets) records[n].distances[t.id] = norm(records[n].value - t.value, opts.norm);
    });
    return records;
}

/// Keeps only the entries (r + k, r); negative k selects a superdiagonal.
inline WindowedMatrix proj_subdiagonal(const WindowedMatrix& a, Index k) {
    WindowedMatrix out(a.window(), a.grid());
    for (Index i = a.row_offset(); i < a.row_end(); ++i) {
        Index j = i - k;
        if (a.in_window(i, j)) out.set(i, j, a(i, j));
    }
    return out;
}

/// Keeps the top-left k x k corner, indices 1..k.
inline WindowedMatrix proj_corner(const WindowedMatrix& a, Index k) {
    if (k < 0) fail(ErrorKind::DomainError, "corner size must be nonnegative");
    WindowedMatrix out(a.window(), a.grid());
    for (Index i = std::max<Index>(a.row_offset(), 1); i < std::min(a.row_end(), k + 1); ++i)
        for (Index j = std::max<Index>(a.col_offset(), 1); j < std::min(a.col_end(), k + 1); ++j)
            out.set(i, j, a(i, j));
    return out;
}

/// Matrix of m restricted to operators supported in w, in the basis of matrix
/// units E_{i,j} ordered row-major over w. Requires m to map that space into
/// itself; anything leaving w raises DomainError.
inline WindowedMatrix materialize_superoperator(const ElementaryMap& m, const Window& w) {
    const Index rows = w.rows();
    const Index cols = w.cols();
    const std::size_t dim = static_cast<std::size_t>(rows * cols);
    WindowedMatrix out(1, 1, dim, dim);
    auto label = [&](Index i, Index j) { return 1 + (i - w.row_begin) * cols + (j - w.col_begin); };
    for (Index i = w.row_begin; i < w.row_end; ++i) {
        for (Index j = w.col_begin; j < w.col_end; ++j) {
            WindowedMatrix img = apply_map(m, WindowedMatrix::unit(i, j, m.grid()));
            for (Index p = img.row_offset(); p < img.row_end(); ++p) {
                for (Index q = img.col_offset(); q < img.col_end(); ++q) {
                    Complex z = img(p, q);
                    if (z == Complex{}) continue;
                    if (!w.contains(p, q)) fail(ErrorKind::DomainError, "superoperator image leaves the window");
                    out.set(label(p, q), label(i, j), z);
                }
            }
        }
    }
    return out;
}

struct TraceAdjointReport {
    std::size_t samples = 0;
    double max_residual = 0.0;  // relative to the sample scale
    bool passed = false;
};

/// Checks tr((Delta_T S)* U) = tr(S* Delta_{T*} U) on random S, U supported in
/// the dim x dim window starting at the grid origin.
inline TraceAdjointReport trace_adjoint_check(const OperatorSpec& t, std::size_t samples, std::size_t dim,
                                              std::uint64_t seed = 1) {
    const Index o = t.grid() == Grid::Unilateral ? 1 : 0;
    const Window w{o, o + static_cast<Index>(dim), o, o + static_cast<Index>(dim)};
    const ElementaryMap delta = ElementaryMap::commutator(t);
    const ElementaryMap delta_adj = ElementaryMap::commutator(OperatorSpec::adjoint(t));
    const Index lo = t.grid() == Grid::Unilateral ? o : o - 2;
    const Index hi = o + static_cast<Index>(dim) + 2;
    const double t_scale = std::max(1.0, norm(materialize(t, {lo, hi, lo, hi}), NormKind::HilbertSchmidt));
    TraceAdjointReport report;
    report.samples = samples;
    for (std::size_t s = 0; s < samples; ++s) {
        Rng rng(derive_seed(seed, s));
        WindowedMatrix sm = random_dense(rng, w, t.grid());
        WindowedMatrix um = random_dense(rng, w, t.grid());
        Complex lhs = hs_inner(um, apply_map(delta, sm));      // tr((Delta_T S)* U)
        Complex rhs = hs_inner(apply_map(delta_adj, um), sm);  // tr(S* Delta_{T*} U)
        double scale = norm(sm, NormKind::HilbertSchmidt) * norm(um, NormKind::HilbertSchmidt) * t_scale;
        report.max_residual = std::max(report.max_residual, std::abs(lhs - rhs) / scale);
    }
    report.passed = report.max_residual <= 1e-10;
    return report;
}

}  // namespace commutant_lab
