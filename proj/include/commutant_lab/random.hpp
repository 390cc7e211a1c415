#pragma once

/**
 * @file random.hpp
 * @brief Reproducible sampling for corpora and property checks.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the C++
 * standard. Doubles are formed from the top 53 bits and complex samples in the
 * unit disk by rejection, so no library distribution or transcendental call is
 * involved and streams are bit-identical across toolchains.
 */

#include <cstdint>
#include <random>

#include "linalg.hpp"

namespace commutant_lab {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1, 1).
    double symmetric() { return 2.0 * uniform() - 1.0; }

    /// Uniform in the open unit disk.
    Complex unit_disk() {
        for (;;) {
            double re = symmetric();
            double im = symmetric();
            if (re * re + im * im < 1.0) return {re, im};
        }
    }

    std::uint64_t next() { return engine_(); }

    /// Integer uniform on [lo, hi] (inclusive) by rejection.
    Index range(Index lo, Index hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return lo + static_cast<Index>(v % span);
    }

private:
    std::mt19937_64 engine_;
};

/// Per-sample stream seed, so sample i never depends on how many draws sample i-1 made.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Dense matrix over the window with entries uniform in the unit disk.
inline WindowedMatrix random_dense(Rng& rng, const Window& w, Grid grid = Grid::Unilateral) {
    WindowedMatrix m(w, grid);
    for (Index i = w.row_begin; i < w.row_end; ++i)
        for (Index j = w.col_begin; j < w.col_end; ++j) m.set(i, j, rng.unit_disk());
    return m;
}

/// Dense matrix with small-integer entries in [-k, k] (real and imaginary parts).
inline WindowedMatrix random_integer(Rng& rng, const Window& w, Index k, Grid grid = Grid::Unilateral) {
    WindowedMatrix m(w, grid);
    for (Index i = w.row_begin; i < w.row_end; ++i)
        for (Index j = w.col_begin; j < w.col_end; ++j)
            m.set(i, j, Complex(static_cast<double>(rng.range(-k, k)), static_cast<double>(rng.range(-k, k))));
    return m;
}

inline Vec2 random_vector(Rng& rng, Index offset, std::size_t size, Grid grid = Grid::Unilateral) {
    std::vector<Complex> e(size);
    for (Complex& z : e) z = rng.unit_disk();
    return Vec2(offset, std::move(e), grid);
}

}  // namespace commutant_lab
