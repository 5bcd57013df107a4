#include "l2w/fourier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "l2w/io.hpp"
#include "l2w/kernels.hpp"
#include "l2w/weights.hpp"

namespace l2w {

CoeffVector::CoeffVector(std::size_t degree, std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
    if (c_.size() != 2 * degree + 1)
        throw std::invalid_argument("CoeffVector: expected " + std::to_string(2 * degree + 1) + " coefficients, got " +
                                    std::to_string(c_.size()));
}

CoeffVector CoeffVector::constant(double v) {
    CoeffVector c;
    c.c_[0] = v;
    return c;
}

CoeffVector CoeffVector::monomial(long n, Complex v) {
    CoeffVector c(static_cast<std::size_t>(std::labs(n)));
    c.at(n) = v;
    return c;
}

Complex& CoeffVector::at(long n) {
    const long N = static_cast<long>(degree());
    if (n < -N || n > N) throw std::out_of_range("coefficient index " + std::to_string(n) + " outside degree " + std::to_string(N));
    return c_[static_cast<std::size_t>(n + N)];
}

bool CoeffVector::is_conjugate_symmetric(double tol) const {
    const long N = static_cast<long>(degree());
    for (long n = 0; n <= N; ++n)
        if (std::abs((*this)[n] - std::conj((*this)[-n])) > tol) return false;
    return true;
}

void CoeffVector::symmetrize() {
    const long N = static_cast<long>(degree());
    for (long n = 0; n <= N; ++n) {
        const Complex v = 0.5 * ((*this)[n] + std::conj((*this)[-n]));
        at(n) = v;
        at(-n) = std::conj(v);
    }
}

CoeffVector CoeffVector::resized(std::size_t degree) const {
    CoeffVector out(degree);
    const long M = static_cast<long>(std::min(degree, this->degree()));
    for (long n = -M; n <= M; ++n) out.at(n) = (*this)[n];
    return out;
}

std::size_t CoeffVector::effective_degree(double tol) const {
    double mx = 0;
    for (auto v : c_) mx = std::max(mx, std::abs(v));
    if (mx == 0) return 0;
    const long N = static_cast<long>(degree());
    for (long n = N; n > 0; --n)
        if (std::abs((*this)[n]) > tol * mx || std::abs((*this)[-n]) > tol * mx) return static_cast<std::size_t>(n);
    return 0;
}

CoeffVector& CoeffVector::operator+=(const CoeffVector& o) {
    if (o.degree() > degree()) *this = resized(o.degree());
    const long N = static_cast<long>(o.degree());
    for (long n = -N; n <= N; ++n) at(n) += o[n];
    return *this;
}

CoeffVector& CoeffVector::operator-=(const CoeffVector& o) {
    if (o.degree() > degree()) *this = resized(o.degree());
    const long N = static_cast<long>(o.degree());
    for (long n = -N; n <= N; ++n) at(n) -= o[n];
    return *this;
}

CoeffVector& CoeffVector::operator*=(Complex s) {
    for (auto& v : c_) v *= s;
    return *this;
}

CoeffVector operator+(CoeffVector a, const CoeffVector& b) { return a += b; }
CoeffVector operator-(CoeffVector a, const CoeffVector& b) { return a -= b; }
CoeffVector operator*(Complex s, CoeffVector a) { return a *= s; }

GridFunction::GridFunction(std::vector<Complex> samples) : s_(std::move(samples)) {
    if (!is_pow2(s_.size())) throw std::invalid_argument("grid size " + std::to_string(s_.size()) + " is not a power of two");
}

double GridFunction::sup_abs() const {
    double m = 0;
    for (auto v : s_) m = std::max(m, std::abs(v));
    return m;
}

double GridFunction::min_real() const {
    double m = s_[0].real();
    for (auto v : s_) m = std::min(m, v.real());
    return m;
}

double GridFunction::max_real() const {
    double m = s_[0].real();
    for (auto v : s_) m = std::max(m, v.real());
    return m;
}

double GridFunction::l2_norm() const {
    double s = 0;
    for (auto v : s_) s += std::norm(v);
    return std::sqrt(s / static_cast<double>(s_.size()));
}

CoeffVector dft(const GridFunction& g, std::optional<std::size_t> degree) {
    const std::size_t G = g.size();
    const std::size_t N = degree.value_or(G / 2 >= 1 ? G / 2 - 1 : 0);
    if (2 * N + 1 > G)
        throw std::invalid_argument("dft: degree " + std::to_string(N) + " exceeds the Nyquist bound for grid " + std::to_string(G));
    std::vector<Complex> a = g.samples();
    kernels::fft(a, -1, default_exec());
    CoeffVector c(N);
    const double inv = 1.0 / static_cast<double>(G);
    const long Nl = static_cast<long>(N);
    for (long n = -Nl; n <= Nl; ++n) c.at(n) = a[static_cast<std::size_t>((n % static_cast<long>(G) + static_cast<long>(G)) % static_cast<long>(G))] * inv;
    return c;
}

GridFunction idft(const CoeffVector& c, std::size_t G) {
    const std::size_t N = c.degree();
    if (!is_pow2(G)) throw std::invalid_argument("idft: grid size " + std::to_string(G) + " is not a power of two");
    if (G < 2 * N + 2)
        throw std::invalid_argument("idft: grid " + std::to_string(G) + " too small for degree " + std::to_string(N) + " (need >= 2N+2)");
    std::vector<Complex> a(G, Complex{0.0});
    const long Nl = static_cast<long>(N), Gl = static_cast<long>(G);
    for (long n = -Nl; n <= Nl; ++n) a[static_cast<std::size_t>((n % Gl + Gl) % Gl)] = c[n];
    kernels::fft(a, +1, default_exec());
    return GridFunction(std::move(a));
}

CoeffVector pointwise_product(const CoeffVector& f, const CoeffVector& g) { return pointwise_product(f, g, default_exec()); }

CoeffVector pointwise_product(const CoeffVector& f, const CoeffVector& g, Exec e) {
    CoeffVector out(f.degree() + g.degree());
    kernels::convolve(f.data(), g.data(), out.data(), e);
    return out;
}

CoeffVector grid_product(const CoeffVector& f, const CoeffVector& g) {
    const std::size_t N = f.degree() + g.degree();
    const std::size_t G = grid_for_degree(N);
    const auto a = idft(f, G), b = idft(g, G);
    std::vector<Complex> s(G);
    for (std::size_t k = 0; k < G; ++k) s[k] = a[k] * b[k];
    return dft(GridFunction(std::move(s)), N);
}

CoeffVector fejer_mean(const CoeffVector& f, std::size_t K) {
    const std::size_t N = std::min(K, f.degree());
    CoeffVector out(N);
    const long Nl = static_cast<long>(N);
    for (long n = -Nl; n <= Nl; ++n) {
        const double fac = std::max(0.0, 1.0 - static_cast<double>(std::labs(n)) / static_cast<double>(K + 1));
        out.at(n) = f[n] * fac;
    }
    return out;
}

CoeffVector rotate(const CoeffVector& f, double turns) {
    CoeffVector out = f;
    const long N = static_cast<long>(f.degree());
    for (long n = -N; n <= N; ++n) out.at(n) = f[n] * std::polar(1.0, -kTwoPi * static_cast<double>(n) * turns);
    return out;
}

CoeffVector rotate_grid(const CoeffVector& f, std::size_t point, std::size_t G) {
    CoeffVector out = f;
    const long N = static_cast<long>(f.degree()), Gl = static_cast<long>(G), p = static_cast<long>(point % G);
    for (long n = -N; n <= N; ++n) {
        const long r = ((n % Gl) * p % Gl + Gl) % Gl;
        out.at(n) = f[n] * std::polar(1.0, -kTwoPi * static_cast<double>(r) / static_cast<double>(G));
    }
    return out;
}

namespace {

WeightedNormReport weighted_norm_impl(const CoeffVector& f, const WeightSequence& w, bool skip_zero) {
    const std::size_t N = f.degree();
    const auto lam = w.values(N);
    WeightedNormReport r;
    r.partial_sums.resize(N + 1);
    double s = skip_zero ? 0.0 : std::norm(f[0]) * lam[0];
    r.partial_sums[0] = s;
    for (std::size_t n = 1; n <= N; ++n) {
        const long k = static_cast<long>(n);
        s += (std::norm(f[k]) + std::norm(f[-k])) * lam[n];
        r.partial_sums[n] = s;
    }
    r.value = std::sqrt(s);
    return r;
}

}  // namespace

WeightedNormReport weighted_norm(const CoeffVector& f, const WeightSequence& w) { return weighted_norm_impl(f, w, false); }
WeightedNormReport weighted_norm_nonzero(const CoeffVector& f, const WeightSequence& w) { return weighted_norm_impl(f, w, true); }

double wiener_bound(const CoeffVector& f, const WeightSequence& w) {
    const std::size_t N = f.degree();
    const auto lam = w.values(N);
    double inv = 1.0 / lam[0];
    for (std::size_t n = 1; n <= N; ++n) inv += 2.0 / lam[n];
    return weighted_norm(f, w).value * std::sqrt(inv);
}

double l1_norm(const CoeffVector& f) {
    double s = 0;
    for (auto v : f.data()) s += std::abs(v);
    return s;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t g = 1;
    while (g < n) g <<= 1;
    return g;
}

std::size_t grid_for_degree(std::size_t N) { return next_pow2(2 * N + 2); }

void write_coeff_csv(const std::filesystem::path& p, const CoeffVector& c) {
    std::string s = "n,re,im\n";
    const long N = static_cast<long>(c.degree());
    for (long n = -N; n <= N; ++n) {
        s += std::to_string(n);
        s += ',';
        s += io::format_double(c[n].real());
        s += ',';
        s += io::format_double(c[n].imag());
        s += '\n';
    }
    io::write_atomic(p, s);
}

CoeffVector read_coeff_csv(const std::filesystem::path& p) {
    std::istringstream in(io::read_text(p));
    std::string line;
    if (!std::getline(in, line) || line.rfind("n,re,im", 0) != 0)
        throw std::runtime_error(p.string() + ": expected header n,re,im");
    std::vector<std::pair<long, Complex>> rows;
    long maxabs = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
            throw std::runtime_error(p.string() + ":" + std::to_string(lineno) + ": expected 3 fields");
        try {
            const long n = std::stol(a);
            rows.emplace_back(n, Complex{std::stod(b), std::stod(c)});
            maxabs = std::max(maxabs, std::labs(n));
        } catch (const std::exception&) {
            throw std::runtime_error(p.string() + ":" + std::to_string(lineno) + ": malformed number");
        }
    }
    CoeffVector out(static_cast<std::size_t>(maxabs));
    for (auto& [n, v] : rows) out.at(n) = v;
    return out;
}

std::string norm_report_json(const WeightedNormReport& r) {
    std::string s = "{\"value\": " + io::format_double(r.value) + ", \"partial_sums\": [";
    for (std::size_t i = 0; i < r.partial_sums.size(); ++i) {
        if (i) s += ", ";
        s += io::format_double(r.partial_sums[i]);
    }
    return s + "]}";
}

}  // namespace l2w
