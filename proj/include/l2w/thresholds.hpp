#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "l2w/fourier.hpp"
#include "l2w/weights.hpp"

namespace l2w {

struct T0Result {
    CoeffVector T0;
    std::size_t N0 = 0;
    std::size_t grid = 0;
    double sup = 0;  // grid sup after rescaling
    double l2 = 0;   // grid L2 norm after rescaling
    double scale = 1;
    unsigned retries = 0;
};

// Real part of the degree-K Fejer mean of exp(i cos theta), scaled so sup <= 1.
T0Result build_T0(std::size_t K, std::size_t G = 4096);

// n_j = smallest n > max(n_{j-1} + 2 N0, 2 N0) with lambda_n >= (j+1)^4.
std::vector<std::size_t> select_gaps(const WeightSequence& w, std::size_t J, std::size_t N0, std::size_t cap = 10'000'000);

struct ThresholdWitness {
    T0Result t0;
    std::vector<std::size_t> gaps;
    CoeffVector partial_f;
    std::vector<double> weighted_partial_sums;  // entry J'-1 covers blocks 1..J'
    std::vector<double> mtest_partial_sums;     // sum_{j<=J'} lambda_{n_j}^{-1/2}
    double mtest_last_quarter = 0;              // spread of the M-test sums over the last quarter of blocks
    std::size_t grid = 0;
    double sup_f = 0;
    bool disjoint = false;
};

ThresholdWitness build_divergent_continuous(const WeightSequence& w, std::size_t J, std::size_t K, bool evaluate_sup = true);

struct PhiFunction {
    std::string name;
    std::function<double(double)> f;
    double operator()(double x) const;  // throws on results below 1e-300
};

// "identity", "power:<p>", "xlog" (x / log(e + 1/x)).
PhiFunction phi_builtin(const std::string& spec);
// Piecewise-linear in log-log through (x, Phi(x)) rows of a CSV `x,phi`.
PhiFunction phi_from_table(const std::filesystem::path& p);

struct IiStrongSpec {
    PhiFunction phi;
    std::vector<double> eps;     // eps_1 .. eps_{K+1}
    std::vector<std::size_t> N;  // N_1 .. N_{K+1}
    std::size_t stretch = 1;
    WeightSequence lambda;
    std::vector<double> stage_block_sums;  // sum_{N_k <= n <= (N_k+N_{k+1})/2} Phi(1/lambda_n)
    double max_second_difference = 0;      // of 1/lambda_n inside stages
    bool increasing = false;
    bool knots_exact = false;
    bool gap_condition = false;
};

double iistrong_inverse_lambda(const std::vector<double>& eps, const std::vector<std::size_t>& N, std::size_t n);
// lambda_n itself; knots (and the constant ends) use 4^k / eps_k^2 directly.
double iistrong_lambda(const std::vector<double>& eps, const std::vector<std::size_t>& N, std::size_t n);

IiStrongSpec build_iistrong_weights(const PhiFunction& phi, const std::vector<double>& eps_schedule, std::size_t K_stages,
                                    std::size_t stretch = 1);
std::vector<double> default_eps_schedule(std::size_t K_stages);

// Random sparse vectors S in the unit ball of l2(lambda): for every stage boundary N_{k+1}
// checks |S(n)|^2 lambda_{N_{k+1}} <= ||S||^2 for all |n| > N_{k+1}.
struct TailSupReport {
    std::size_t samples = 0;
    std::size_t checks = 0;
    std::size_t violations = 0;
    double max_ratio = 0;  // max of |S(n)| sqrt(lambda_{N_{k+1}}) / ||S||
    bool passes = false;
};
TailSupReport iistrong_tail_sup_check(const IiStrongSpec& s, std::size_t samples, std::uint64_t seed,
                                      std::size_t support = 64);

struct KMTestResult {
    std::size_t N = 0;
    double gamma = 0, eps = 0;
    double cond1_value = 0;
    double cond2_value = 0;
    bool cond2_vacuous = false;
    double support_gap = 0;  // turns
    bool support_empty = false;
    bool pass1 = false, pass2 = false;
};

KMTestResult km_hypothesis_test(const CoeffVector& S, std::size_t N, double gamma, double eps, std::size_t G, double tau_supp);

}  // namespace l2w
