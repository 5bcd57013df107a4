#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "l2w/common.hpp"

namespace l2w {

class WeightSequence;

// Trigonometric polynomial sum_{|n|<=N} c_n e^{in theta}, stored as c_{-N..N}.
class CoeffVector {
public:
    CoeffVector() : c_(1, Complex{0.0}) {}
    explicit CoeffVector(std::size_t degree) : c_(2 * degree + 1, Complex{0.0}) {}
    CoeffVector(std::size_t degree, std::vector<Complex> coeffs);

    static CoeffVector constant(double v);
    static CoeffVector monomial(long n, Complex v = 1.0);

    std::size_t degree() const { return (c_.size() - 1) / 2; }
    std::size_t size() const { return c_.size(); }

    // Coefficient access; out-of-range reads return 0.
    Complex operator[](long n) const {
        const long N = static_cast<long>(degree());
        return (n < -N || n > N) ? Complex{0.0} : c_[static_cast<std::size_t>(n + N)];
    }
    Complex& at(long n);

    std::span<const Complex> data() const { return c_; }
    std::span<Complex> data() { return c_; }

    bool is_conjugate_symmetric(double tol = 1e-12) const;
    // Replace by the conjugate-symmetric part (c_n + conj(c_{-n}))/2.
    void symmetrize();

    CoeffVector resized(std::size_t degree) const;  // pad with zeros or truncate
    // Largest |n| with |c_n| > tol * max|c|; 0 for the zero vector.
    std::size_t effective_degree(double tol = 0.0) const;

    CoeffVector& operator+=(const CoeffVector& o);
    CoeffVector& operator-=(const CoeffVector& o);
    CoeffVector& operator*=(Complex s);

private:
    std::vector<Complex> c_;
};

CoeffVector operator+(CoeffVector a, const CoeffVector& b);
CoeffVector operator-(CoeffVector a, const CoeffVector& b);
CoeffVector operator*(Complex s, CoeffVector a);

// Samples at theta_k = 2 pi k / G.
class GridFunction {
public:
    explicit GridFunction(std::vector<Complex> samples);
    static GridFunction from_function(std::size_t G, const auto& fn) {
        std::vector<Complex> s(G);
        for (std::size_t k = 0; k < G; ++k) s[k] = fn(kTwoPi * static_cast<double>(k) / static_cast<double>(G));
        return GridFunction(std::move(s));
    }

    std::size_t size() const { return s_.size(); }
    const std::vector<Complex>& samples() const { return s_; }
    Complex operator[](std::size_t k) const { return s_[k]; }

    double sup_abs() const;
    double min_real() const;
    double max_real() const;
    double l2_norm() const;  // quadrature with weight 1/G

private:
    std::vector<Complex> s_;
};

struct WeightedNormReport {
    double value = 0.0;
    std::vector<double> partial_sums;  // partial_sums[k] = sum over |n| <= k
};

// c_n = (1/G) sum_k g_k e^{-i n theta_k}; default degree G/2 - 1.
CoeffVector dft(const GridFunction& g, std::optional<std::size_t> degree = std::nullopt);
GridFunction idft(const CoeffVector& c, std::size_t G);

// Coefficient convolution (the product of the two functions).
CoeffVector pointwise_product(const CoeffVector& f, const CoeffVector& g);
CoeffVector pointwise_product(const CoeffVector& f, const CoeffVector& g, Exec e);
// Same product computed by sampling on a grid of size >= 2(N_f+N_g)+2.
CoeffVector grid_product(const CoeffVector& f, const CoeffVector& g);

CoeffVector fejer_mean(const CoeffVector& f, std::size_t K);

// psi(theta - 2 pi t): multiplies c_n by e^{-2 pi i n t}; t in turns.
CoeffVector rotate(const CoeffVector& f, double turns);
// Rotation by a whole number of grid steps, computed with exact index arithmetic.
CoeffVector rotate_grid(const CoeffVector& f, std::size_t point, std::size_t G);

WeightedNormReport weighted_norm(const CoeffVector& f, const WeightSequence& w);
// Same, skipping n = 0.
WeightedNormReport weighted_norm_nonzero(const CoeffVector& f, const WeightSequence& w);
double wiener_bound(const CoeffVector& f, const WeightSequence& w);
double l1_norm(const CoeffVector& f);

// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);
// Smallest power-of-two grid that represents degree N exactly (>= 2N+2).
std::size_t grid_for_degree(std::size_t N);

// I/O. CSV header `n,re,im`, rows ascending in n.
void write_coeff_csv(const std::filesystem::path& p, const CoeffVector& c);
CoeffVector read_coeff_csv(const std::filesystem::path& p);
std::string norm_report_json(const WeightedNormReport& r);

}  // namespace l2w
