#include "l2w/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace l2w {

namespace {

constexpr double kRhoLimit = 0.98 * kPi;

double kernel_coeff(double n, double rho, double edge) {
    const double x = n * rho;
    const double sinc = x == 0 ? 1.0 : std::sin(x) / x;
    const double s = rho / edge;
    return sinc * std::exp(-0.5 * s * s * n * n);
}

// f with prod_{i<L} (1 - 1/(f r^i)) = S/(S+1).
double balance_factor(unsigned S, unsigned L, double r) {
    const double target = static_cast<double>(S) / (S + 1.0);
    auto prod = [&](double f) {
        double p = 1;
        for (unsigned i = 0; i < L; ++i) p *= 1.0 - 1.0 / (f * std::pow(r, i));
        return p;
    };
    double lo = 1.0, hi = 2.0;
    while (prod(hi) < target) hi *= 2;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (prod(mid) < target ? lo : hi) = mid;
    }
    return hi;
}

double peak_coeff(const Block& b, std::size_t n, std::size_t m) {
    const double nd = static_cast<double>(n);
    if (b.shape.profile == BlockProfile::plateau)
        return std::sin(nd * b.a) / (kPi * nd) * std::exp(-0.5 * b.sigma * b.sigma * nd * nd);
    const double mp = static_cast<double>(m) + 1.0;
    return n > m ? 0.0 : (1.0 - nd / mp) / mp;
}

void fill_coefficients(Block& b, std::size_t D, std::size_t m) {
    std::vector<double> c(D + 1, 0.0);
    for (std::size_t n = 1; n <= D; ++n) {
        double v = peak_coeff(b, n, m);
        for (double rho : b.rho) v *= 1.0 - kernel_coeff(static_cast<double>(n), rho, b.shape.kernel_edge);
        c[n] = v;
    }
    // g(0) = sum over n != 0, summed from the small tail.
    double h = 0;
    for (std::size_t n = D; n >= 1; --n) h += 2.0 * c[n];
    b.height = h;
    b.poly = CoeffVector(D);
    for (std::size_t n = 1; n <= D; ++n) {
        const long k = static_cast<long>(n);
        b.poly.at(k) = c[n] / h;
        b.poly.at(-k) = c[n] / h;
    }
    b.poly.at(0) = 0.0;
}

}  // namespace

long flat_half_width(const GridFunction& g, double target, double tol) {
    const std::size_t G = g.size();
    if (std::abs(g[0] - target) > tol) return -1;
    long k = 0;
    while (static_cast<std::size_t>(2 * (k + 1)) < G && std::abs(g[k + 1] - target) <= tol &&
           std::abs(g[G - 1 - k] - target) <= tol)
        ++k;
    return k;
}

Block make_block(double eta, unsigned M, unsigned S, std::size_t max_degree, const BlockShape& shape) {
    if (!(eta > 0 && eta <= 0.5)) throw std::invalid_argument("block: eta must lie in (0, 1/2]");
    if (M < 1 || S < 1) throw std::invalid_argument("block: M and S must be >= 1");
    Block b;
    b.eta = eta;
    b.M = M;
    b.S = S;
    b.shape = shape;
    const unsigned L = (M + 1) / 2;
    const double r = shape.kernel_ratio, edge = shape.kernel_edge;
    const double f = balance_factor(S, L, r);
    const double span = std::pow(r, L - 1) * (1.0 + 6.0 / edge);
    const double a_max = kRhoLimit * shape.floor_margin / (f * span);

    std::size_t D = 0, m = 0;
    if (shape.profile == BlockProfile::plateau) {
        b.a = std::max(shape.width_ratio * eta, shape.min_width);
        if (b.a > a_max) b.a = a_max;
        if (b.a < shape.min_width)
            throw std::domain_error("block: kernels at scale " + std::to_string(shape.min_width) + " do not fit on the circle");
        b.sigma = b.a / shape.edge_ratio;
        D = static_cast<std::size_t>(std::ceil(7.5 / b.sigma));
        if (D > max_degree)
            throw std::domain_error("block: plateau edge needs degree " + std::to_string(D) + " > " + std::to_string(max_degree));
    } else {
        m = static_cast<std::size_t>(std::ceil(shape.peak_degree_ratio / eta));
        m = std::min(m, max_degree);
        D = m;
        b.a = kPi / (static_cast<double>(m) + 1.0);
        if (b.a > a_max) throw std::domain_error("block: peak degree " + std::to_string(m) + " too low for S=" + std::to_string(S));
    }

    double rho1 = b.a * f / shape.floor_margin;
    const std::size_t Gf = std::min<std::size_t>(4 * grid_for_degree(D), std::max<std::size_t>(grid_for_degree(D), 1u << 17));
    for (int it = 0; it < 40; ++it) {
        if (rho1 * span > kRhoLimit)
            throw std::domain_error("block: cannot push the floor above -1/S with kernels inside the circle");
        b.rho.clear();
        for (unsigned i = 0; i < L; ++i) b.rho.push_back(rho1 * std::pow(r, i));
        fill_coefficients(b, D, m);
        const double floor = idft(b.poly, Gf).min_real();
        if (floor >= -1.0 / S) return b;
        rho1 *= 1.1;
    }
    throw std::domain_error("block: floor adjustment did not converge");
}

BlockReport verify_block(const Block& b, double tau_flat, double tau_floor, double delta_min) {
    BlockReport r;
    r.tau_flat = tau_flat;
    r.tau_floor = tau_floor;
    r.delta_min = delta_min;
    const std::size_t D = b.poly.degree();
    r.grid = std::max(b.grid, grid_for_degree(D));
    const auto g = idft(b.poly, r.grid);
    r.floor_meas = g.min_real();
    r.top_meas = g.max_real();
    const long k = flat_half_width(g, 1.0, tau_flat);
    r.flat_radius_meas = k < 0 ? 0.0 : kTwoPi * static_cast<double>(k) / static_cast<double>(r.grid);
    r.mean_zero = b.poly[0] == Complex{0.0};

    double A = 0;
    for (std::size_t n = 1; n <= D; ++n) {
        const double x = b.eta * static_cast<double>(n);
        const double env = b.eta * std::min(std::pow(x, b.M), std::pow(x, -static_cast<double>(b.M)));
        const long kn = static_cast<long>(n);
        const double c = std::max(std::abs(b.poly[kn]), std::abs(b.poly[-kn]));
        A = std::max(A, c / env);
    }
    r.A_meas = A;

    const double S = b.S;
    if (!r.mean_zero) r.reasons.push_back("mean: coefficient at 0 is not exactly 0");
    if (!(r.flat_radius_meas > 0) || r.flat_radius_meas < delta_min * b.eta)
        r.reasons.push_back("flatness (i): flat radius below delta_min * eta");
    if (r.floor_meas < -1.0 / S - tau_floor) r.reasons.push_back("lower bound (ii): floor below -1/S - tau_floor");
    if (r.top_meas > 1.0 + tau_flat) r.reasons.push_back("upper bound (ii): max above 1 + tau_flat");
    if (!std::isfinite(A)) r.reasons.push_back("envelope (iv): A not finite");
    r.accepted = r.reasons.empty();
    return r;
}

Block build_block(double eta, unsigned M, unsigned S, std::size_t G, const BlockShape& shape, const Tolerances& tol,
                  double delta_min) {
    if (!(eta > 0 && eta < 0.5)) throw std::invalid_argument("block: eta must lie in (0, 1/2)");
    if (!is_pow2(G)) throw std::invalid_argument("block: grid size must be a power of two");
    if (static_cast<double>(G) < 64.0 / eta) throw std::invalid_argument("block: grid must satisfy G >= 64/eta");
    BlockReport last;
    std::string why;
    for (int attempt = 0; attempt <= 3; ++attempt, G *= 2) {
        Block b;
        try {
            b = make_block(eta, M, S, G / 2 - 1, shape);
        } catch (const std::domain_error& e) {
            why = e.what();
            continue;
        }
        b.grid = G;
        last = verify_block(b, tol.flat, tol.floor, delta_min);
        if (last.accepted) return b;
        why = last.reasons.front();
    }
    throw BlockConstructionError("block rejected after grid retries: " + why, last);
}

}  // namespace l2w
