#pragma once

// Slow, independent reference computations used by the unit tests.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "l2w/fourier.hpp"

namespace oracle {

using l2w::Complex;
using l2w::CoeffVector;

// Direct O(N^2) convolution over the index range.
inline CoeffVector convolve(const CoeffVector& f, const CoeffVector& g) {
    const long Nf = static_cast<long>(f.degree()), Ng = static_cast<long>(g.degree());
    CoeffVector out(static_cast<std::size_t>(Nf + Ng));
    for (long n = -(Nf + Ng); n <= Nf + Ng; ++n) {
        Complex s = 0;
        for (long m = -Nf; m <= Nf; ++m) s += f[m] * g[n - m];
        out.at(n) = s;
    }
    return out;
}

// Direct evaluation of sum c_n e^{i n theta}.
inline Complex eval(const CoeffVector& c, double theta) {
    const long N = static_cast<long>(c.degree());
    Complex s = 0;
    for (long n = -N; n <= N; ++n) s += c[n] * std::polar(1.0, static_cast<double>(n) * theta);
    return s;
}

// Quadrature integral of g(theta) e^{-i n theta} with weight 1/G.
inline Complex coefficient(const std::vector<Complex>& samples, long n) {
    const std::size_t G = samples.size();
    Complex s = 0;
    for (std::size_t k = 0; k < G; ++k)
        s += samples[k] * std::polar(1.0, -static_cast<double>(n) * 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(G));
    return s / static_cast<double>(G);
}

inline CoeffVector random_coeffs(std::size_t N, std::mt19937_64& rng, bool real = false) {
    std::normal_distribution<double> g;
    CoeffVector c(N);
    const long Nl = static_cast<long>(N);
    for (long n = -Nl; n <= Nl; ++n) c.at(n) = Complex{g(rng), g(rng)};
    if (real) c.symmetrize();
    return c;
}

inline double max_diff(const CoeffVector& a, const CoeffVector& b) {
    const long N = static_cast<long>(std::max(a.degree(), b.degree()));
    double m = 0;
    for (long n = -N; n <= N; ++n) m = std::max(m, std::abs(a[n] - b[n]));
    return m;
}

}  // namespace oracle
