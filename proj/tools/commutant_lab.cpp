// Command-line frontend: spectra and verdicts, orbits, certificates, self-checks.
//
// Exit codes: 0 ok, 1 verify failure or internal error, 2 parse error or
// violated precondition, 3 unknown spectrum, 4 window overflow,
// 5 identity violation, 6 near approach observed.

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commutant_lab.hpp"

using namespace commutant_lab;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kUnknownSpectrum = 3, kOverflow = 4, kIdentity = 5, kNear = 6 };

std::string fmt(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e || !std::isfinite(v)) fail(ErrorKind::ParseError, "bad number in " + what + ": \"" + s + "\"");
    return v;
}

/// "re,im" or "re".
Complex parse_c(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() == 1) return {parse_double(parts[0], "--c"), 0.0};
    if (parts.size() == 2) return {parse_double(parts[0], "--c"), parse_double(parts[1], "--c")};
    fail(ErrorKind::ParseError, "--c expects re,im");
}

/// Comma-separated coefficients c0..cm, each "re" or "re:im".
std::vector<Complex> parse_poly(const std::string& s) {
    std::vector<Complex> out;
    for (const auto& tok : split(s, ',')) {
        auto ri = split(tok, ':');
        if (ri.size() == 1) out.emplace_back(parse_double(ri[0], "--poly"), 0.0);
        else if (ri.size() == 2) out.emplace_back(parse_double(ri[0], "--poly"), parse_double(ri[1], "--poly"));
        else fail(ErrorKind::ParseError, "--poly tokens are re or re:im");
    }
    if (out.empty()) fail(ErrorKind::ParseError, "--poly needs at least one coefficient");
    return out;
}

NormKind parse_norm(const std::string& s) {
    if (s == "op") return NormKind::Operator;
    if (s == "hs") return NormKind::HilbertSchmidt;
    if (s == "nuclear") return NormKind::Nuclear;
    fail(ErrorKind::ParseError, "unknown norm \"" + s + "\"");
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) fail(ErrorKind::ParseError, "cannot write " + out_path);
    out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct Common {
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "Write the report to this file instead of stdout");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv-summary"}))->capture_default_str();
}

// ---- spectrum ----

struct SpectrumArgs {
    Common common;
    std::string spec_file;
    std::string map = "commutator";
};

int run_spectrum(const SpectrumArgs& a) {
    OperatorSpec spec = spec_from_json(read_json_file(a.spec_file));
    auto sigma = known_spectrum(spec);
    Json j;
    j["spectrum"] = sigma ? to_json(*sigma) : Json(nullptr);
    std::optional<KitaiResult> kitai;
    if (a.map == "commutator") {
        if (sigma) {
            SpectralSet diff = minkowski_diff(*sigma);
            kitai = kitai_test(diff);
            j["commutator_spectrum"] = to_json(diff);
            j["kitai"] = to_json(*kitai);
        } else {
            j["commutator_spectrum"] = nullptr;
            j["kitai"] = nullptr;
        }
        Verdict v = verdict_commutator(spec);
        j["verdict"] = to_json(v);
        if (a.common.format == "csv-summary") {
            std::string csv = "spectrum_known,kitai_passes,conclusion,rule\n";
            csv += std::string(sigma ? "true" : "false") + "," + (kitai ? (kitai->passes ? "true" : "false") : "") + "," +
                   std::string(to_string(v.conclusion)) + "," + (v.rule ? std::string(to_string(*v.rule)) : "") + "\n";
            emit(csv, a.common.out);
        } else {
            emit(dump(j), a.common.out);
        }
    } else {
        if (a.common.format == "csv-summary") emit(std::string("spectrum_known\n") + (sigma ? "true\n" : "false\n"), a.common.out);
        else emit(dump(j), a.common.out);
    }
    if (!sigma) {
        std::cerr << "spectrum unknown: no closed form for this operator\n";
        return kUnknownSpectrum;
    }
    return kOk;
}

// ---- orbit ----

struct OrbitArgs {
    Common common;
    std::string map_file;
    std::string init_file;
    std::size_t steps = 24;
    std::string target = "e1e1";
    std::string norm = "op";
    std::size_t window_cap = 1024;
};

int run_orbit(const OrbitArgs& a) {
    ElementaryMap m = map_from_json(read_json_file(a.map_file));
    WindowedMatrix a0 = matrix_from_json(read_json_file(a.init_file), m.grid());
    WindowedMatrix target = a.target == "e1e1" ? WindowedMatrix::unit(1, 1, m.grid())
                                                : matrix_from_json(read_json_file(a.target), m.grid());
    OrbitOptions opts;
    opts.norm = parse_norm(a.norm);
    opts.window_cap = a.window_cap;
    auto records = orbit(m, a0, a.steps, {{"target", target}}, opts);
    if (a.common.format == "csv-summary") {
        std::string csv = "step,distance,value_norm\n";
        for (const auto& r : records)
            csv += std::to_string(r.step) + "," + fmt(r.distances.at("target")) + "," + fmt(norm(r.value, opts.norm)) + "\n";
        emit(csv, a.common.out);
    } else {
        Json j = to_json(records, opts.norm);
        j["target"] = a.target;
        emit(dump(j), a.common.out);
    }
    return kOk;
}

// ---- certify ----

struct CertifyArgs {
    Common common;
    std::string init_file;
    std::string random;
    std::string c;
    std::string poly;
    double eps = 0.2;
    std::size_t n_max = 24;
    std::string exponent = "per-iteration";
    std::size_t window_cap = 1024;
};

int run_certify(const CertifyArgs& a) {
    if (a.init_file.empty() == a.random.empty()) fail(ErrorKind::ParseError, "give exactly one of an input matrix file or --random");
    if (a.c.empty() == a.poly.empty()) fail(ErrorKind::ParseError, "give exactly one of --c or --poly");

    // Validate every numeric parameter before any computation.
    std::vector<Complex> coeffs = a.poly.empty() ? std::vector<Complex>{} : parse_poly(a.poly);
    Complex c = a.c.empty() ? Complex{} : parse_c(a.c);
    if (!(a.eps > 0.0) || !std::isfinite(a.eps)) fail(ErrorKind::PreconditionViolated, "--eps must be positive");
    Complex lead = a.c.empty() ? coeffs.back() : c;
    if (!a.poly.empty()) {
        while (coeffs.size() > 1 && coeffs.back() == Complex{}) coeffs.pop_back();
        lead = coeffs.size() == 1 ? Complex{} : coeffs.back();  // a constant gives the zero map
        if (coeffs.size() > 2 && !(3.0 * a.eps < 1.0))
            fail(ErrorKind::PreconditionViolated, "p(B) certificates need 3 eps < 1");
    }
    if (!(3.0 * std::abs(lead) * a.eps < 1.0)) fail(ErrorKind::PreconditionViolated, "3|c| eps < 1 is required");

    Json input;
    WindowedMatrix a0;
    if (!a.random.empty()) {
        auto parts = split(a.random, ',');
        if (parts.size() != 3) fail(ErrorKind::ParseError, "--random expects seed,size,decay");
        double seed_d = parse_double(parts[0], "--random seed");
        double size_d = parse_double(parts[1], "--random size");
        double decay = parse_double(parts[2], "--random decay");
        if (seed_d < 0 || seed_d != std::floor(seed_d) || size_d < 1 || size_d != std::floor(size_d))
            fail(ErrorKind::ParseError, "--random seed and size must be nonnegative integers");
        if (!(decay > 0.0 && decay < 1.0)) fail(ErrorKind::PreconditionViolated, "--random decay must lie in (0, 1)");
        auto seed = static_cast<std::uint64_t>(seed_d);
        auto size = static_cast<std::size_t>(size_d);
        a0 = random_compact(seed, size, decay);
        input["corpus"] = {{"seed", seed}, {"size", size}, {"decay", decay}};
    } else {
        a0 = matrix_from_json(read_json_file(a.init_file));
        input["matrix_file"] = a.init_file;
    }

    CertifyOptions opts;
    opts.window_cap = a.window_cap;
    opts.exponent = a.exponent == "as-printed" ? LeadingExponent::AsPrinted : LeadingExponent::PerIteration;
    CertificateReport rep = a.poly.empty() ? certify_cB(a0, c, a.eps, a.n_max, opts)
                                           : certify_pB(a0, coeffs, a.eps, a.n_max, opts);

    if (a.common.format == "csv-summary") {
        std::string csv =
            "n,orbit_distance,f_n_re,f_n_im,g_direct_re,g_direct_im,g_formula_re,g_formula_im,bound_upper,bound_lower,consistent\n";
        for (const auto& r : rep.per_n) {
            csv += std::to_string(r.n) + "," + fmt(r.orbit_distance) + "," + fmt(r.f_n_at_z0.real()) + "," +
                   fmt(r.f_n_at_z0.imag()) + "," + fmt(r.g_n_at_z0_direct.real()) + "," + fmt(r.g_n_at_z0_direct.imag()) +
                   "," + fmt(r.g_n_at_z0_formula.real()) + "," + fmt(r.g_n_at_z0_formula.imag()) + "," +
                   fmt(r.bound_upper) + "," + fmt(r.bound_lower) + "," + (r.consistent ? "true" : "false") + "\n";
        }
        emit(csv, a.common.out);
    } else {
        Json j = to_json(rep);
        j["input"] = input;
        emit(dump(j), a.common.out);
    }
    switch (rep.verdict) {
        case CertificateVerdict::NoNearApproachObserved: return kOk;
        case CertificateVerdict::IdentityViolation:
            std::cerr << "identity check failed: direct and closed-form g_n(z0) disagree\n";
            return kIdentity;
        case CertificateVerdict::NearApproachObserved:
            std::cerr << "orbit came within eps of E_11 for some n > k_eps\n";
            return kNear;
    }
    return kFailure;
}

// ---- verify ----

struct VerifyArgs {
    Common common;
    std::string suite = "all";
    std::size_t dim = 16;
};

int run_verify(const VerifyArgs& a) {
    std::vector<std::string> names = a.suite == "all" ? suite_names() : std::vector<std::string>{a.suite};
    std::vector<SuiteResult> results;
    for (const auto& n : names) results.push_back(run_suite(n, a.dim));
    bool ok = true;
    for (const auto& r : results) ok = ok && r.passed;
    for (const auto& r : results)
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << "  checks=" << r.checks
                  << "  max_residual=" << fmt(r.max_residual) << "  tol=" << fmt(r.tolerance) << "  " << r.detail << "\n";
    if (a.common.format == "csv-summary") {
        std::string csv = "suite,checks,max_residual,tolerance,passed\n";
        for (const auto& r : results)
            csv += r.name + "," + std::to_string(r.checks) + "," + fmt(r.max_residual) + "," + fmt(r.tolerance) + "," +
                   (r.passed ? "true" : "false") + "\n";
        emit(csv, a.common.out);
    } else {
        Json j = Json::array();
        for (const auto& r : results)
            j.push_back({{"suite", r.name},
                         {"checks", r.checks},
                         {"max_residual", r.max_residual},
                         {"tolerance", r.tolerance},
                         {"passed", r.passed},
                         {"detail", r.detail}});
        emit(dump(j), a.common.out);
    }
    return ok ? kOk : kFailure;
}

int exit_code_for(const LabError& e) {
    switch (e.kind()) {
        case ErrorKind::ParseError:
        case ErrorKind::PreconditionViolated:
        case ErrorKind::DomainError:
        case ErrorKind::BilateralMismatch:
        case ErrorKind::NonFinite:
        case ErrorKind::ZeroVector:
            return kUsage;
        case ErrorKind::WindowOverflow: return kOverflow;
        default: return kFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"commutant_lab: commutator maps Delta_T = L_T - R_T on windowed matrices"};
    app.require_subcommand(1);

    SpectrumArgs spectrum;
    auto* sp = app.add_subcommand("spectrum", "Spectrum of T, of Delta_T, the Kitai test and the verdict");
    sp->add_option("spec", spectrum.spec_file, "Operator spec JSON file")->required();
    sp->add_option("--map", spectrum.map, "Also analyse the commutator map")
        ->check(CLI::IsMember({"commutator", "none"}))
        ->capture_default_str();
    add_common(sp, spectrum.common);

    OrbitArgs orb;
    auto* op = app.add_subcommand("orbit", "Exact orbit of a map and its distances to a target");
    op->add_option("map", orb.map_file, "Elementary map JSON file")->required();
    op->add_option("init", orb.init_file, "Initial matrix JSON file")->required();
    op->add_option("--steps", orb.steps, "Number of steps")->capture_default_str();
    op->add_option("--target", orb.target, "e1e1 or a matrix JSON file")->capture_default_str();
    op->add_option("--norm", orb.norm, "Distance norm")->check(CLI::IsMember({"op", "hs", "nuclear"}))->capture_default_str();
    op->add_option("--window-cap", orb.window_cap, "Largest allowed window side")->capture_default_str();
    add_common(op, orb.common);

    CertifyArgs cert;
    auto* cp = app.add_subcommand("certify", "Non-hypercyclicity evidence for Delta_{cB} or Delta_{p(B)}");
    cp->add_option("init", cert.init_file, "Initial matrix JSON file");
    cp->add_option("--random", cert.random, "seed,size,decay for a random compact matrix");
    cp->add_option("--c", cert.c, "Scalar c as re,im (certifies Delta_{cB})");
    cp->add_option("--poly", cert.poly, "Coefficients c0,...,cm; each re or re:im (certifies Delta_{p(B)})");
    cp->add_option("--eps", cert.eps, "Epsilon")->capture_default_str();
    cp->add_option("--n-max", cert.n_max, "Largest orbit step")->capture_default_str();
    cp->add_option("--exponent", cert.exponent, "Leading-coefficient exponent in the p(B) closed form")
        ->check(CLI::IsMember({"per-iteration", "as-printed"}))
        ->capture_default_str();
    cp->add_option("--window-cap", cert.window_cap, "Largest allowed window side")->capture_default_str();
    add_common(cp, cert.common);

    VerifyArgs ver;
    auto* vp = app.add_subcommand("verify", "Run the self-check suites");
    std::vector<std::string> suites = suite_names();
    suites.insert(suites.begin(), "all");
    vp->add_option("--suite", ver.suite, "Suite to run")->check(CLI::IsMember(suites))->capture_default_str();
    vp->add_option("--dim", ver.dim, "Window size for the normal and paranormal suites")->capture_default_str();
    add_common(vp, ver.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*sp) return run_spectrum(spectrum);
        if (*op) return run_orbit(orb);
        if (*cp) return run_certify(cert);
        if (*vp) return run_verify(ver);
    } catch (const LabError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: ParseError: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
