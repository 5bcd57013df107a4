#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "l2w/blocks.hpp"
#include "l2w/fourier.hpp"
#include "l2w/tolerances.hpp"
#include "l2w/weights.hpp"

namespace l2w {

struct LocalizerParams {
    double epsilon = 0;
    unsigned M = 0;
    std::size_t S = 0;
    double L_value = 0;
    std::size_t j_first = 0, j_last = 0;
};

// Smallest S > 2/eps with sum_{ceil(1/eps) <= j <= S} 1/lambda_j >= 1/eps.
// M = estimate_M(w) + 2 unless overridden.
LocalizerParams choose_S(const WeightSequence& w, double epsilon, std::size_t scan_cap = 2'000'000,
                         std::optional<unsigned> M = std::nullopt);

struct LocalizerReport {
    double epsilon = 0;  // requested epsilon the properties are judged against
    double grid_min = 0, grid_max = 0;
    long arc_half_points = -1;  // deleted arc is grid points [-k, k]; -1 if none
    double arc_length = 0;      // open arc between the nearest kept points, in turns
    double arc_residual = 0;
    double mean = 0;
    double coeff_sup = 0;
    double decay_slope = 0;
    std::size_t decay_top = 0;
    double weighted_tail = 0;
    bool pass_range = false, pass_arc = false, pass_mean = false, pass_coeff = false, pass_decay = false,
         pass_tail = false;
    bool all_pass() const { return pass_range && pass_arc && pass_mean && pass_coeff && pass_decay && pass_tail; }
    std::vector<std::string> failures() const;
};

struct Localizer {
    LocalizerParams params;     // at the working epsilon
    double requested_eps = 0;
    unsigned halvings = 0;
    std::size_t ladder_level = 0;
    BlockShape shape;
    std::size_t grid = 0;
    CoeffVector psi;
    LocalizerReport report;
};

struct LocalizerOptions {
    std::optional<std::size_t> max_degree;  // default G/2 - 1
    unsigned max_halvings = 8;
    std::vector<BlockShape> ladder;         // empty: default_ladder()
    Tolerances tol;
    std::size_t scan_cap = 2'000'000;
    std::optional<unsigned> M;
};

// Block shapes tried at each working epsilon, flattest first.
std::vector<BlockShape> default_ladder();

class LocalizerError : public VerificationError {
public:
    LocalizerError(const std::string& what, std::optional<LocalizerReport> best)
        : VerificationError(what), best_report(std::move(best)) {}
    std::optional<LocalizerReport> best_report;
};

// 1/sum_{0<|n|<=D} 1/lambda_n: no degree-D psi with psi(0)=0 and mean 1 has smaller weighted tail.
double tail_energy_lower_bound(const WeightSequence& w, std::size_t D);

CoeffVector assemble_localizer(const WeightSequence& w, const LocalizerParams& p, const BlockShape& shape,
                               std::size_t max_degree);

Localizer build_localizer(const WeightSequence& w, double epsilon, std::size_t G, const LocalizerOptions& opts = {});

LocalizerReport verify_localizer(const CoeffVector& psi, double epsilon, unsigned M, std::size_t G,
                                 const WeightSequence& w, const Tolerances& tol = {});
LocalizerReport verify_localizer(const Localizer& l, const WeightSequence& w, const Tolerances& tol = {});

}  // namespace l2w
