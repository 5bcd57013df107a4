#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "l2w/common.hpp"
#include "l2w/fourier.hpp"
#include "l2w/tolerances.hpp"

namespace l2w {

// Peak profile p of a block. The block is g = p * prod_i (delta - B_i) / g(0),
// B_i Gaussian-smoothed boxes at scales rho_i = rho_1 r^i, i < ceil(M/2).
enum class BlockProfile {
    plateau,     // Gaussian-smoothed indicator of [-a, a]; flat around 0
    fejer_peak,  // Fejer kernel of degree m, normalized to p(0) = 1; exact polynomial
};

struct BlockShape {
    BlockProfile profile = BlockProfile::plateau;
    double width_ratio = 0.85;       // plateau: a = width_ratio * eta
    double edge_ratio = 7.0;         // plateau: sigma = a / edge_ratio
    double min_width = 0.0;          // plateau: a >= min_width (radians)
    double peak_degree_ratio = 30;   // fejer: m = ceil(ratio / eta)
    double kernel_ratio = 1.5;       // rho_{i+1} / rho_i
    double kernel_edge = 24;         // box half-width over its smoothing width
    double floor_margin = 0.99;
};

struct Block {
    double eta = 0;
    unsigned M = 1;
    unsigned S = 1;
    CoeffVector poly;  // real, even, c_0 = 0 exactly
    std::size_t grid = 0;
    BlockShape shape;
    double a = 0;       // plateau half-width, or pi/(m+1) for a Fejer peak
    double sigma = 0;   // plateau edge width; 0 for a Fejer peak
    std::vector<double> rho;
    double height = 0;  // g(0) before normalization
};

struct BlockReport {
    double flat_radius_meas = 0;  // radians
    double floor_meas = 0;
    double top_meas = 0;
    double A_meas = 0;
    double tau_flat = 0, tau_floor = 0, delta_min = 0;
    std::size_t grid = 0;
    bool mean_zero = false;
    bool accepted = false;
    std::vector<std::string> reasons;
};

class BlockConstructionError : public VerificationError {
public:
    BlockConstructionError(const std::string& what, BlockReport r) : VerificationError(what), report(std::move(r)) {}
    BlockReport report;
};

// Builds the polynomial only (degree <= max_degree) and adjusts kernel scales until
// the floor measured on a fine grid clears -margin/S. Throws std::domain_error when
// the shape cannot be realized at this degree.
Block make_block(double eta, unsigned M, unsigned S, std::size_t max_degree, const BlockShape& shape = {});

// make_block + verify_block on grid G, doubling G up to 3 times on failure.
Block build_block(double eta, unsigned M, unsigned S, std::size_t G, const BlockShape& shape = {},
                  const Tolerances& tol = {}, double delta_min = 0.05);

BlockReport verify_block(const Block& b, double tau_flat, double tau_floor, double delta_min = 0.05);

// Largest k with |g(theta_i) - target| <= tol for all |i| <= k; -1 if it fails at 0.
long flat_half_width(const GridFunction& g, double target, double tol);

}  // namespace l2w
