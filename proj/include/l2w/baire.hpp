#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "l2w/compact_set.hpp"
#include "l2w/fourier.hpp"
#include "l2w/localizer.hpp"
#include "l2w/tolerances.hpp"
#include "l2w/weights.hpp"

namespace l2w {

struct PairState {
    CoeffVector f;                // real-valued
    CompactSet E;
    double budget_spent = 0;
    std::vector<double> samples;  // f on the run grid

    void refresh(std::size_t G);
};

PairState make_pair_state(CoeffVector f, CompactSet E, std::size_t G);

// d_C(E, K) + ||f - g||_{l2(lambda)}.
double pair_metric(const PairState& p, const PairState& q, const WeightSequence& w);

// (1 - delta/2) * fejer_mean(f_raw, K).
CoeffVector prepare(const CoeffVector& f_raw, double delta, std::size_t K_fejer);

// Grid points with |f| > tau, as canonical arcs; is_empty() when none.
CompactSet numerical_support(const CoeffVector& f, std::size_t G, double tau);

struct StepRecord {
    std::size_t point = 0;
    double epsilon = 0;
    double d_increment = 0;
    double hausdorff_increment = 0;
    double norm_increment = 0;
    double truncation_energy = 0;
    Arc deleted;
    std::size_t psi_degree = 0;
    std::size_t f_degree = 0;
    std::size_t ladder_level = 0;
    double mean_before = 0, mean_after = 0;
    double f_min = 0, f_max = 0;
    bool support_ok = false;
};

struct DeletionOptions {
    std::size_t N_work = 0;  // 0: G/4
    Tolerances tol;
    LocalizerOptions loc;
};

// f -> trunc(f * psi(. - a)), E -> E minus the arc around a where f*psi is negligible.
std::pair<PairState, StepRecord> apply_localizer(const PairState& p, std::size_t a, const Localizer& loc,
                                                 const WeightSequence& w, std::size_t G, const DeletionOptions& opts = {});
std::pair<PairState, StepRecord> deletion_step(const PairState& p, std::size_t a, double epsilon, const WeightSequence& w,
                                               std::size_t G, const DeletionOptions& opts = {});

struct DeletionTrace {
    std::vector<StepRecord> steps;
    std::vector<PairState> snapshots;  // state before step 0, then after each step
};

// Increments recomputed from consecutive snapshots.
std::vector<double> recompute_increments(const DeletionTrace& t, const WeightSequence& w);

struct BaireOptions {
    double eps_init = 0.2;
    unsigned max_halvings = 12;
    std::size_t N_work = 0;       // 0: G/4
    std::size_t min_degree = 256;
    double delta = 0.0;
    std::size_t K_fejer = 64;
    bool keep_snapshots = true;
    Tolerances tol;
};

struct BaireFailure {
    std::size_t step = 0;
    std::string reason;
    std::vector<std::string> attempts;
};

struct BaireResult {
    PairState state;
    DeletionTrace trace;
    std::optional<BaireFailure> failure;
};

BaireResult run_baire(const CoeffVector& f0, const CompactSet& E0, const std::vector<std::size_t>& points,
                      const std::vector<double>& budgets, const WeightSequence& w, std::size_t G,
                      const BaireOptions& opts = {});

std::vector<std::size_t> equally_spaced_points(std::size_t K, std::size_t G);

// Finite-stage properties of a run, judged against the planned points and budgets.
struct BaireChecks {
    std::size_t steps_planned = 0, steps_done = 0;
    bool complete = false;
    bool support_avoids_arcs = false;  // final numerical support misses every deleted arc
    double mean_drift = 0;             // |f_K(0) - f_0(0)|, f_0 after prepare()
    bool mean_ok = false;
    double total_distance = 0;
    double budget_sum = 0;
    bool within_budget = false;
    bool nested = false;               // E_k decreasing and supp f_k inside E_k at every step
    bool all_pass() const { return complete && support_avoids_arcs && mean_ok && within_budget && nested; }
};

BaireChecks check_baire(const BaireResult& r, double initial_mean, std::size_t steps_planned,
                        const std::vector<double>& budgets, std::size_t G, const Tolerances& tol = {});

}  // namespace l2w
