#include "l2w/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace l2w {

namespace {
std::atomic<Exec> g_exec{Exec::parallel};
}

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec e) { g_exec.store(e); }

namespace kernels {

namespace {

void bit_reverse(std::span<Complex> a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

// Twiddles from exact angles rather than a recurrence, so error stays at ulp level.
std::vector<Complex> twiddles(std::size_t n, int sign) {
    std::vector<Complex> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = sign * kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        w[k] = {std::cos(ang), std::sin(ang)};
    }
    return w;
}

void check_size(std::span<Complex> a) {
    if (!is_pow2(a.size())) throw std::invalid_argument("fft size must be a power of two");
}

}  // namespace

void fft_serial(std::span<Complex> a, int sign) {
    check_size(a);
    const std::size_t n = a.size();
    if (n == 1) return;
    bit_reverse(a);
    const auto w = twiddles(n, sign);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2, step = n / len;
        for (std::size_t s = 0; s < n; s += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const Complex t = w[k * step] * a[s + k + half];
                a[s + k + half] = a[s + k] - t;
                a[s + k] += t;
            }
        }
    }
}

void fft_parallel(std::span<Complex> a, int sign) {
    check_size(a);
    const std::size_t n = a.size();
    if (n == 1) return;
    bit_reverse(a);
    const auto w = twiddles(n, sign);
    Complex* p = a.data();
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2, step = n / len;
        const long long nb = static_cast<long long>(n / 2);
        // One iteration per butterfly; independent within a stage.
#pragma omp parallel for schedule(static) if (n >= 4096)
        for (long long b = 0; b < nb; ++b) {
            const std::size_t s = (static_cast<std::size_t>(b) / half) * len;
            const std::size_t k = static_cast<std::size_t>(b) % half;
            const Complex t = w[k * step] * p[s + k + half];
            p[s + k + half] = p[s + k] - t;
            p[s + k] += t;
        }
    }
}

void fft(std::span<Complex> a, int sign, Exec e) {
    if (e == Exec::parallel)
        fft_parallel(a, sign);
    else
        fft_serial(a, sign);
}

namespace {

inline Complex conv_entry(std::span<const Complex> a, std::span<const Complex> b, std::size_t k) {
    const std::size_t lo = k >= b.size() - 1 ? k - (b.size() - 1) : 0;
    const std::size_t hi = std::min(k, a.size() - 1);
    Complex s = 0;
    for (std::size_t i = lo; i <= hi; ++i) s += a[i] * b[k - i];
    return s;
}

void check_conv(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
    if (a.empty() || b.empty() || out.size() != a.size() + b.size() - 1)
        throw std::invalid_argument("convolve: output size must be |a| + |b| - 1");
}

}  // namespace

void convolve_serial(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
    check_conv(a, b, out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = conv_entry(a, b, k);
}

void convolve_parallel(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
    check_conv(a, b, out);
    const long long n = static_cast<long long>(out.size());
#pragma omp parallel for schedule(dynamic, 64) if (n >= 512)
    for (long long k = 0; k < n; ++k) out[k] = conv_entry(a, b, static_cast<std::size_t>(k));
}

void convolve(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out, Exec e) {
    if (e == Exec::parallel)
        convolve_parallel(a, b, out);
    else
        convolve_serial(a, b, out);
}

}  // namespace kernels
}  // namespace l2w
