#include "support.hpp"

using namespace commutant_lab;
using namespace testing_support;

namespace {

CoeffSeries series(std::vector<Complex> c) { return CoeffSeries{std::move(c)}; }

/// (1 - z^j)^n * f by repeated polynomial multiplication, no binomials involved.
std::vector<Complex> multiply_out(const std::vector<Complex>& f, std::size_t j, std::size_t n) {
    std::vector<Complex> p = f;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Complex> q(p.size() + j);
        for (std::size_t r = 0; r < p.size(); ++r) {
            q[r] += p[r];
            q[r + j] -= p[r];
        }
        p = q;
    }
    return p;
}

}  // namespace

TEST(DiagSeries, Examples) {
    EXPECT_EQ(diag_series(WindowedMatrix::unit(1, 1), 0, 3), series({1.0, 0.0, 0.0}));
    EXPECT_EQ(diag_series(WindowedMatrix::unit(3, 1), 2, 2), series({1.0, 0.0}));
    WindowedMatrix a(1, 1, 8, 8);
    for (Index r = 1; r + 2 <= 8; ++r) a.set(r + 2, r, std::pow(2.0, -static_cast<double>(r)));
    CoeffSeries f = diag_series(a, 2, 3);
    EXPECT_EQ(f, series({0.5, 0.25, 0.125}));
    EXPECT_EQ(diag_series(a, 0, 2), series({0.0, 0.0}));
}

TEST(DiagSeries, ReadsZeroOutsideTheWindow) {
    CoeffSeries f = diag_series(WindowedMatrix::unit(2, 1), 1, 6);
    EXPECT_EQ(f.size(), 6u);
    EXPECT_EQ(f.coeff(1), Complex(1.0));
    for (Index r = 2; r <= 6; ++r) EXPECT_EQ(f.coeff(r), Complex{});
}

TEST(DiagSeries, Preconditions) {
    expect_error(ErrorKind::DomainError, [] { diag_series(WindowedMatrix::unit(1, 1), -1, 2); });
    expect_error(ErrorKind::DomainError, [] { diag_series(WindowedMatrix::unit(1, 1), 0, 0); });
}

TEST(Tau, Examples) {
    EXPECT_EQ(tau(series({1.0, 0.0, 0.0}), 1), series({1.0, -1.0, 0.0, 0.0}));
    EXPECT_EQ(tau(series({1.0, 1.0, 1.0}), 1), series({1.0, 0.0, 0.0, -1.0}));
    EXPECT_EQ(tau(series({1.0, 0.0, 0.0}), 2), series({1.0, 0.0, -1.0, 0.0, 0.0}));
    expect_error(ErrorKind::DomainError, [] { tau(series({1.0}), 0); });
}

TEST(TauPower, Examples) {
    EXPECT_EQ(tau_power(series({1.0}), 1, 2), series({1.0, -2.0, 1.0}));
    EXPECT_EQ(tau_power(series({1.0, 1.0}), 1, 1), series({1.0, 0.0, -1.0}));
    CoeffSeries f = series({Complex(1, 2), 3.0, Complex(0, -1)});
    EXPECT_EQ(tau_power(f, 3, 0), f);
}

TEST(TauPower, EqualsPolynomialProductOnIntegerSeries) {
    Gen g(139);
    for (std::size_t j = 1; j <= 4; ++j)
        for (std::size_t n = 0; n <= 8; ++n)
            for (int s = 0; s < 4; ++s) {
                std::vector<Complex> f(static_cast<std::size_t>(g.integer(1, 32)));
                for (auto& z : f) z = Complex(g.integer(-9, 9), g.integer(-9, 9));
                CoeffSeries got = tau_power(series(f), static_cast<Index>(j), n);
                EXPECT_EQ(got.coeffs, multiply_out(f, j, n)) << "j=" << j << " n=" << n;
            }
}

TEST(TauPower, FloatSeriesWithinTolerance) {
    Gen g(149);
    for (int s = 0; s < 40; ++s) {
        std::vector<Complex> f(static_cast<std::size_t>(g.integer(1, 32)));
        for (auto& z : f) z = g.complex();
        std::size_t j = static_cast<std::size_t>(g.integer(1, 4));
        std::size_t n = static_cast<std::size_t>(g.integer(0, 8));
        auto ref = multiply_out(f, j, n);
        auto got = tau_power(series(f), static_cast<Index>(j), n);
        ASSERT_EQ(got.size(), ref.size());
        for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_LE(std::abs(got.coeffs[k] - ref[k]), 1e-12 * (1 << n));
    }
}

TEST(Eval, Examples) {
    EXPECT_DOUBLE_EQ(eval(series({1.0, 1.0, 1.0}), 0.5).real(), 1.75);
    EXPECT_NEAR(std::abs(eval(series({1.0, -1.0}), 0.4) - Complex(0.6)), 0.0, 1e-15);
    EXPECT_EQ(eval(series({}), 0.3), Complex{});
    expect_error(ErrorKind::DomainError, [] { eval(series({1.0}), 1.0); });
    expect_error(ErrorKind::DomainError, [] { eval(series({1.0}), Complex(0.8, 0.8)); });
}

TEST(Eval, AgreesWithPowerSum) {
    Gen g(151);
    for (int s = 0; s < 30; ++s) {
        std::vector<Complex> f(20);
        for (auto& z : f) z = g.complex();
        Complex z = 0.9 * g.complex() / std::sqrt(2.0);
        Complex direct{};
        for (std::size_t r = 0; r < f.size(); ++r) direct += f[r] * std::pow(z, static_cast<double>(r));
        EXPECT_LE(std::abs(eval(series(f), z) - direct), 1e-12);
    }
}

TEST(Eval, TailBoundHolds) {
    Gen g(157);
    for (int s = 0; s < 200; ++s) {
        double eps = g.real(0.01, 0.3);
        std::vector<Complex> f(static_cast<std::size_t>(g.integer(1, 64)));
        for (auto& c : f) {
            Complex u = g.complex();
            c = eps * u / std::max(1.0, std::abs(u));
        }
        Complex z = std::polar(g.real(0.0, 0.99), g.real(0.0, 6.28));
        EXPECT_LE(std::abs(eval(series(f), z)), eps / (1.0 - std::abs(z)) + 1e-12);
    }
}

TEST(Encoding, MainDiagonalOfIteratesIsScaledTau) {
    Gen g(163);
    const Complex cs[] = {1.0, 1.5, Complex(0, 1)};
    for (Complex c : cs) {
        ElementaryMap d = ElementaryMap::commutator(OperatorSpec::scaled(c, OperatorSpec::backward_shift()));
        for (int s = 0; s < 3; ++s) {
            WindowedMatrix a = g.square(12);
            WindowedMatrix v = a;
            Complex cn(1.0);
            for (std::size_t n = 1; n <= 8; ++n) {
                v = apply_map(d, v);
                cn *= c;
                CoeffSeries lhs = diag_series(v, 0, 12 + n);
                CoeffSeries rhs = tau_power(diag_series(a, static_cast<Index>(n), 12), 1, n);
                ASSERT_EQ(lhs.size(), rhs.size());
                for (std::size_t r = 0; r < lhs.size(); ++r)
                    EXPECT_LE(std::abs(lhs.coeffs[r] - cn * rhs.coeffs[r]), 1e-12 * (1 << n));
            }
        }
    }
}
