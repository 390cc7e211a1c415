#pragma once

/**
 * @file io.hpp
 * @brief JSON reading and writing for matrices, operator specs, maps and
 * every report type. Complex numbers are [re, im]; a bare number is accepted
 * on input as a real.
 */

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "certificate.hpp"
#include "dynamics.hpp"
#include "spectral.hpp"

namespace commutant_lab {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& what) { fail(ErrorKind::ParseError, what); }

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline double number(const Json& j, const char* what) {
    if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) parse_fail(std::string(what) + " must be finite");
    return v;
}

inline Index integer(const Json& j, const char* what) {
    if (!j.is_number_integer()) parse_fail(std::string(what) + " must be an integer");
    return j.get<Index>();
}

inline Grid grid_of(const Json& j, Grid inherited) {
    if (j.is_object() && j.contains("bilateral")) {
        if (!j.at("bilateral").is_boolean()) parse_fail("\"bilateral\" must be a boolean");
        return j.at("bilateral").get<bool>() ? Grid::Bilateral : Grid::Unilateral;
    }
    return inherited;
}

}  // namespace detail

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {detail::number(j, "complex value"), 0.0};
    if (!j.is_array() || j.size() != 2) detail::parse_fail("complex values are [re, im]");
    return {detail::number(j[0], "real part"), detail::number(j[1], "imaginary part")};
}

inline std::vector<Complex> complex_list_from_json(const Json& j) {
    if (!j.is_array()) detail::parse_fail("expected a list of complex values");
    std::vector<Complex> out;
    for (const auto& e : j) out.push_back(complex_from_json(e));
    return out;
}

inline Json complex_list_to_json(const std::vector<Complex>& zs) {
    Json a = Json::array();
    for (Complex z : zs) a.push_back(complex_to_json(z));
    return a;
}

// ---- vectors and matrices -------------------------------------------------

inline Json to_json(const Vec2& v) {
    Json j;
    j["offset"] = v.offset();
    j["entries"] = complex_list_to_json({v.entries().begin(), v.entries().end()});
    if (v.grid() == Grid::Bilateral) j["bilateral"] = true;
    return j;
}

inline Json to_json(const WindowedMatrix& m) {
    Json j;
    j["row_offset"] = m.row_offset();
    j["col_offset"] = m.col_offset();
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    Json entries = Json::array();
    for (Index i = m.row_offset(); i < m.row_end(); ++i)
        for (Index k = m.col_offset(); k < m.col_end(); ++k) {
            Complex z = m(i, k);
            if (z != Complex{}) entries.push_back(Json::array({i, k, z.real(), z.imag()}));
        }
    j["entries"] = entries;
    if (m.grid() == Grid::Bilateral) j["bilateral"] = true;
    return j;
}

/// Sparse triplets [i, j, re, im] with absolute indices; the window starts at
/// the offsets and extends to "rows"/"cols" when given, else to the largest index.
inline WindowedMatrix matrix_from_json(const Json& j, Grid inherited = Grid::Unilateral) {
    const Grid grid = detail::grid_of(j, inherited);
    const Index r0 = detail::integer(detail::field(j, "row_offset"), "row_offset");
    const Index c0 = detail::integer(detail::field(j, "col_offset"), "col_offset");
    const Json& entries = detail::field(j, "entries");
    if (!entries.is_array()) detail::parse_fail("\"entries\" must be a list");

    struct Triplet { Index i, k; Complex z; };
    std::vector<Triplet> trips;
    std::set<std::pair<Index, Index>> seen;
    Index r1 = r0, c1 = c0;
    for (const auto& e : entries) {
        if (!e.is_array() || (e.size() != 4 && e.size() != 3)) detail::parse_fail("entries are [i, j, re, im]");
        Index i = detail::integer(e[0], "row index");
        Index k = detail::integer(e[1], "column index");
        double re = detail::number(e[2], "real part");
        double im = e.size() == 4 ? detail::number(e[3], "imaginary part") : 0.0;
        if (i < r0 || k < c0) detail::parse_fail("entry index lies before the window offset");
        if (!seen.insert({i, k}).second)
            detail::parse_fail("duplicate entry (" + std::to_string(i) + ", " + std::to_string(k) + ")");
        trips.push_back({i, k, {re, im}});
        r1 = std::max(r1, i + 1);
        c1 = std::max(c1, k + 1);
    }
    if (j.contains("rows")) r1 = std::max(r1, r0 + detail::integer(j.at("rows"), "rows"));
    if (j.contains("cols")) c1 = std::max(c1, c0 + detail::integer(j.at("cols"), "cols"));
    if (grid == Grid::Unilateral && (r0 < 1 || c0 < 1)) detail::parse_fail("unilateral offsets must be >= 1");
    WindowedMatrix m(Window{r0, r1, c0, c1}, grid);
    for (const auto& t : trips) m.set(t.i, t.k, t.z);
    return m;
}

// ---- operator specs -------------------------------------------------------

inline Json to_json(const SequenceRule& r) {
    Json j;
    switch (r.kind()) {
        case SequenceRule::Kind::Explicit:
            j["rule"] = "explicit";
            j["values"] = complex_list_to_json(r.values());
            j["tail"] = complex_to_json(r.tail());
            j["start"] = r.start();
            break;
        case SequenceRule::Kind::Periodic:
            j["rule"] = "periodic";
            j["values"] = complex_list_to_json(r.values());
            j["start"] = r.start();
            break;
        case SequenceRule::Kind::Reciprocal:
            j["rule"] = "reciprocal";
            j["scale"] = complex_to_json(r.scale());
            break;
        case SequenceRule::Kind::Geometric:
            j["rule"] = "geometric";
            j["scale"] = complex_to_json(r.scale());
            j["ratio"] = complex_to_json(r.ratio());
            break;
    }
    return j;
}

/// Reads a sequence rule from the fields of `j` ("values", "tail", "rule", ...).
inline SequenceRule sequence_from_json(const Json& j, const char* values_key) {
    std::string rule = "explicit";
    if (j.contains("rule")) {
        if (!j.at("rule").is_string()) detail::parse_fail("\"rule\" must be a string");
        rule = j.at("rule").get<std::string>();
    }
    Index start = j.contains("start") ? detail::integer(j.at("start"), "start") : 1;
    if (rule == "explicit") {
        Complex tail = j.contains("tail") ? complex_from_json(j.at("tail")) : Complex{};
        return SequenceRule::explicit_list(complex_list_from_json(detail::field(j, values_key)), tail, start);
    }
    if (rule == "periodic") return SequenceRule::periodic(complex_list_from_json(detail::field(j, values_key)), start);
    if (rule == "reciprocal") {
        return SequenceRule::reciprocal(j.contains("scale") ? complex_from_json(j.at("scale")) : Complex(1.0));
    }
    if (rule == "geometric") {
        return SequenceRule::geometric(complex_from_json(detail::field(j, "scale")),
                                       complex_from_json(detail::field(j, "ratio")));
    }
    detail::parse_fail("unknown sequence rule \"" + rule + "\"");
}

inline Json to_json(const OperatorSpec& spec) {
    using S = OperatorSpec;
    Json j;
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, S::BackwardShift>) {
                j["op"] = "backward_shift";
            } else if constexpr (std::is_same_v<N, S::ForwardShift>) {
                j["op"] = "forward_shift";
            } else if constexpr (std::is_same_v<N, S::WeightedBackwardShift>) {
                j["op"] = "weighted_backward_shift";
                Json r = to_json(n.weights);
                if (r.contains("values")) {
                    r["weights"] = r["values"];
                    r.erase("values");
                }
                j.update(r);
            } else if constexpr (std::is_same_v<N, S::Diagonal>) {
                j["op"] = "diag";
                j.update(to_json(n.alphas));
            } else if constexpr (std::is_same_v<N, S::PolynomialInB>) {
                j["op"] = "poly_b";
                j["coeffs"] = complex_list_to_json(n.coeffs);
            } else if constexpr (std::is_same_v<N, S::FiniteMatrix>) {
                j["op"] = "finite";
                j["matrix"] = to_json(n.matrix);
            } else if constexpr (std::is_same_v<N, S::Scaled>) {
                j["op"] = "scaled";
                j["c"] = complex_to_json(n.c);
                j["inner"] = to_json(*n.inner);
            } else if constexpr (std::is_same_v<N, S::Sum>) {
                j["op"] = "sum";
                j["left"] = to_json(*n.left);
                j["right"] = to_json(*n.right);
            } else {
                j["op"] = "adjoint";
                j["inner"] = to_json(*n.inner);
            }
        },
        spec.node());
    if (spec.bilateral()) j["bilateral"] = true;
    return j;
}

inline OperatorSpec spec_from_json(const Json& j, Grid inherited = Grid::Unilateral) {
    const Grid grid = detail::grid_of(j, inherited);
    const Json& opj = detail::field(j, "op");
    if (!opj.is_string()) detail::parse_fail("\"op\" must be a string");
    const std::string op = opj.get<std::string>();
    if (op == "backward_shift") return OperatorSpec::backward_shift(grid);
    if (op == "bilateral_backward_shift") return OperatorSpec::bilateral_backward_shift();
    if (op == "forward_shift") return OperatorSpec::forward_shift(grid);
    if (op == "identity") return OperatorSpec::identity(grid);
    if (op == "poly_b") return OperatorSpec::poly_b(complex_list_from_json(detail::field(j, "coeffs")), grid);
    if (op == "diag") return OperatorSpec::diagonal(sequence_from_json(j, "values"), grid);
    if (op == "weighted_backward_shift") return OperatorSpec::weighted_backward_shift(sequence_from_json(j, "weights"), grid);
    if (op == "finite") {
        WindowedMatrix m = matrix_from_json(detail::field(j, "matrix"), grid);
        if (m.grid() != grid) fail(ErrorKind::BilateralMismatch, "finite matrix grid differs from the spec grid");
        return OperatorSpec::finite(std::move(m));
    }
    if (op == "scaled")
        return OperatorSpec::scaled(complex_from_json(detail::field(j, "c")), spec_from_json(detail::field(j, "inner"), grid));
    if (op == "sum")
        return OperatorSpec::sum(spec_from_json(detail::field(j, "left"), grid),
                                 spec_from_json(detail::field(j, "right"), grid));
    if (op == "adjoint") return OperatorSpec::adjoint(spec_from_json(detail::field(j, "inner"), grid));
    detail::parse_fail("unknown op \"" + op + "\"");
}

// ---- elementary maps ------------------------------------------------------

inline Json to_json(const ElementaryMap& m) {
    using M = ElementaryMap;
    Json j;
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, M::Left>) {
                j["map"] = "left";
                j["op"] = to_json(n.op);
            } else if constexpr (std::is_same_v<N, M::Right>) {
                j["map"] = "right";
                j["op"] = to_json(n.op);
            } else if constexpr (std::is_same_v<N, M::Commutator>) {
                j["map"] = "commutator";
                j["op"] = to_json(n.op);
            } else if constexpr (std::is_same_v<N, M::Power>) {
                j["map"] = "power";
                j["n"] = n.n;
                j["inner"] = to_json(*n.inner);
            } else if constexpr (std::is_same_v<N, M::Scaled>) {
                j["map"] = "scaled";
                j["c"] = complex_to_json(n.c);
                j["inner"] = to_json(*n.inner);
            } else {
                j["map"] = "sum";
                j["left"] = to_json(*n.left);
                j["right"] = to_json(*n.right);
            }
        },
        m.node());
    return j;
}

inline ElementaryMap map_from_json(const Json& j) {
    const Json& mj = detail::field(j, "map");
    if (!mj.is_string()) detail::parse_fail("\"map\" must be a string");
    const std::string kind = mj.get<std::string>();
    if (kind == "left") return ElementaryMap::left(spec_from_json(detail::field(j, "op")));
    if (kind == "right") return ElementaryMap::right(spec_from_json(detail::field(j, "op")));
    if (kind == "commutator") return ElementaryMap::commutator(spec_from_json(detail::field(j, "op")));
    if (kind == "power") {
        Index n = detail::integer(detail::field(j, "n"), "n");
        if (n < 0) detail::parse_fail("power exponent must be nonnegative");
        return ElementaryMap::power(map_from_json(detail::field(j, "inner")), static_cast<std::size_t>(n));
    }
    if (kind == "scaled")
        return ElementaryMap::scaled(complex_from_json(detail::field(j, "c")), map_from_json(detail::field(j, "inner")));
    if (kind == "sum")
        return ElementaryMap::sum(map_from_json(detail::field(j, "left")), map_from_json(detail::field(j, "right")));
    detail::parse_fail("unknown map \"" + kind + "\"");
}

// ---- spectral sets and verdicts -------------------------------------------

inline Json to_json(const SpectralSet& s) {
    Json j;
    j["points"] = complex_list_to_json(s.points);
    Json disks = Json::array();
    for (const auto& d : s.disks) disks.push_back({{"center", complex_to_json(d.center)}, {"radius", d.radius}});
    j["disks"] = disks;
    Json circles = Json::array();
    for (const auto& c : s.circles) circles.push_back({{"center", complex_to_json(c.center)}, {"radius", c.radius}});
    j["circles"] = circles;
    Json annuli = Json::array();
    for (const auto& a : s.annuli)
        annuli.push_back(
            {{"center", complex_to_json(a.center)}, {"r_inner", a.r_inner}, {"r_outer", a.r_outer}});
    j["annuli"] = annuli;
    j["conservative"] = s.conservative;
    return j;
}

inline SpectralSet spectral_set_from_json(const Json& j) {
    SpectralSet s;
    auto list = [&](const char* key) -> Json {
        if (!j.contains(key)) return Json::array();
        if (!j.at(key).is_array()) detail::parse_fail(std::string("\"") + key + "\" must be a list");
        return j.at(key);
    };
    s.points = complex_list_from_json(list("points"));
    for (const auto& d : list("disks"))
        s.disks.push_back({complex_from_json(detail::field(d, "center")), detail::number(detail::field(d, "radius"), "radius")});
    for (const auto& c : list("circles"))
        s.circles.push_back({complex_from_json(detail::field(c, "center")), detail::number(detail::field(c, "radius"), "radius")});
    for (const auto& a : list("annuli"))
        s.annuli.push_back({complex_from_json(detail::field(a, "center")),
                            detail::number(detail::field(a, "r_inner"), "r_inner"),
                            detail::number(detail::field(a, "r_outer"), "r_outer")});
    if (j.contains("conservative")) {
        if (!j.at("conservative").is_boolean()) detail::parse_fail("\"conservative\" must be a boolean");
        s.conservative = j.at("conservative").get<bool>();
    }
    detail::validate(s);
    return s;
}

inline Json to_json(const KitaiResult& k) {
    Json j;
    j["passes"] = k.passes;
    j["components"] = k.components;
    j["failing_component"] = k.failing_component ? to_json(*k.failing_component) : Json(nullptr);
    return j;
}

inline Json to_json(const Verdict& v) {
    Json j;
    j["conclusion"] = std::string(to_string(v.conclusion));
    j["rule"] = v.rule ? Json(std::string(to_string(*v.rule))) : Json(nullptr);
    Json e;
    if (v.evidence.spectrum) e["spectrum"] = to_json(*v.evidence.spectrum);
    if (v.evidence.commutator_spectrum) e["commutator_spectrum"] = to_json(*v.evidence.commutator_spectrum);
    if (v.evidence.failing_component) e["failing_component"] = to_json(*v.evidence.failing_component);
    if (v.evidence.alpha) e["alpha"] = complex_to_json(*v.evidence.alpha);
    if (v.evidence.beta) e["beta"] = complex_to_json(*v.evidence.beta);
    if (v.evidence.alpha && v.evidence.beta) e["beta_minus_alpha"] = complex_to_json(*v.evidence.beta - *v.evidence.alpha);
    if (v.evidence.normality_defect) e["normality_defect"] = *v.evidence.normality_defect;
    e["note"] = v.evidence.note;
    j["evidence"] = e;
    return j;
}

// ---- certificates, orbits, property reports -------------------------------

inline Json to_json(const CertificateRow& r) {
    Json j;
    j["n"] = r.n;
    j["orbit_distance"] = r.orbit_distance;
    j["f_n_at_z0"] = complex_to_json(r.f_n_at_z0);
    j["g_n_at_z0_direct"] = complex_to_json(r.g_n_at_z0_direct);
    j["g_n_at_z0_formula"] = complex_to_json(r.g_n_at_z0_formula);
    j["bound_upper"] = r.bound_upper;
    j["bound_lower"] = r.bound_lower;
    j["consistent"] = r.consistent;
    return j;
}

inline Json to_json(const CertificateReport& r) {
    Json j;
    j["poly"] = complex_list_to_json(r.poly);
    j["c"] = complex_to_json(r.c);
    j["degree"] = r.degree;
    j["epsilon"] = r.epsilon;
    j["k_eps"] = r.k_eps;
    j["z0"] = complex_to_json(r.z0);
    j["n_max"] = r.n_max;
    j["exponent"] = std::string(to_string(r.exponent));
    j["tail_norms"] = r.tail_norms;
    Json rows = Json::array();
    for (const auto& row : r.per_n) rows.push_back(to_json(row));
    j["per_n"] = rows;
    j["verdict"] = std::string(to_string(r.verdict));
    j["note"] = r.note;
    return j;
}

inline Json to_json(const std::vector<OrbitRecord>& records, NormKind kind) {
    Json j;
    j["norm"] = std::string(to_string(kind));
    Json steps = Json::array();
    for (const auto& r : records) {
        Json s;
        s["step"] = r.step;
        Json d;
        for (const auto& [id, dist] : r.distances) d[id] = dist;
        s["distances"] = d;
        s["value_norm"] = norm(r.value, kind);
        steps.push_back(s);
    }
    j["steps"] = steps;
    return j;
}

inline Json to_json(const PropertyReport& p) {
    Json j;
    j["property"] = std::string(to_string(p.property));
    j["samples"] = p.samples;
    j["max_residual"] = p.max_residual;
    j["passed"] = p.passed;
    Json m = Json::object();
    for (const auto& [k, v] : p.metrics) m[k] = v;
    j["metrics"] = m;
    if (p.witness) {
        Json w;
        w["description"] = p.witness->description;
        if (p.witness->u) w["u"] = to_json(*p.witness->u);
        if (p.witness->v) w["v"] = to_json(*p.witness->v);
        Json vals = Json::object();
        for (const auto& [k, v] : p.witness->values) vals[k] = v;
        w["values"] = vals;
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

inline Json to_json(const HCReport& r) {
    auto cond = [](const HCCondition& c) {
        Json j;
        j["holds"] = c.holds;
        j["curve"] = c.curve;
        return j;
    };
    Json j;
    j["samples"] = r.samples;
    j["k_max"] = r.k_max;
    j["orbit_to_zero"] = cond(r.orbit_to_zero);
    j["right_to_zero"] = cond(r.right_to_zero);
    j["right_inverse"] = cond(r.right_inverse);
    j["exact_right_inverse"] = r.exact_right_inverse;
    j["holds"] = r.holds();
    return j;
}

// ---- files ----------------------------------------------------------------

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) detail::parse_fail("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        detail::parse_fail(path + ": " + e.what());
    }
}

/// Parses text, turning library exceptions into ParseError.
inline Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        detail::parse_fail(e.what());
    }
}

}  // namespace commutant_lab
