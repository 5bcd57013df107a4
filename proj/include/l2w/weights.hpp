#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace l2w {

// Positive sequence lambda_n, n >= 0, evaluated lazily and cached.
// Copies share one cache; access is synchronized.
class WeightSequence {
public:
    using Generator = std::function<double(std::size_t)>;

    WeightSequence(std::string name, Generator gen, std::optional<std::size_t> last_index = std::nullopt);

    double operator()(std::size_t n) const;
    // lambda_0 .. lambda_last (one lock for the whole range).
    std::vector<double> values(std::size_t last) const;
    const std::string& name() const;
    std::optional<std::size_t> last_index() const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

WeightSequence power_weight(double gamma);
WeightSequence constant_weight(double c = 1.0);
WeightSequence table_weight(std::string name, std::vector<double> values);
WeightSequence load_weights_csv(const std::filesystem::path& p);  // header `n,value`
// max(lambda_n, 1).
WeightSequence clamp_below_one(const WeightSequence& w);

struct DivergenceWitness {
    double target = 0;
    std::optional<std::size_t> N_hit;
    double partial_sum_at_cap = 0;
    std::size_t cap = 0;
};

// Scans n = 1..cap accumulating 1/lambda_n.
DivergenceWitness check_divergence(const WeightSequence& w, double target, std::size_t cap);

struct MRejection {
    unsigned M;
    std::size_t first_violation;
};

struct RegularityReport {
    double C_est = 1.0;
    std::optional<unsigned> M_est;
    std::size_t range_checked = 0;
    std::vector<std::pair<std::size_t, std::size_t>> violations;  // (n, k) with ratio above threshold
    double violation_threshold = 0;
    std::vector<MRejection> rejected;
    std::string diagnostic;
};

// C_est = max over 1 <= n <= cap/2, n <= k <= 2n of max(l_k/l_n, l_n/l_k).
RegularityReport doubling_constant(const WeightSequence& w, std::size_t cap, double threshold = 8.0,
                                   std::size_t max_witnesses = 32);
// Smallest M >= 1 with (1+n)^-M l_n non-increasing on n < cap; M <= M_max.
RegularityReport estimate_M(const WeightSequence& w, std::size_t cap, unsigned M_max = 64);

struct LemmaDoubleTerms {
    double lhs_b = 0;    // sum_{j<=n} j^{M-1}/l_j
    double frame_b = 0;  // n^M / l_n
    double lhs_c = 0;    // sum_{n<j<=tail_end} 1/(l_j j^{M+1})
    double frame_c = 0;  // 1/(n^M l_n)
    bool c_vacuous = false;
};

LemmaDoubleTerms lemma_double_terms(const WeightSequence& w, unsigned M, std::size_t n, std::size_t tail_end);

struct LemmaDoubleReport {
    unsigned M = 0;
    std::size_t cap = 0;
    std::size_t tail_end = 0;
    double K_b = 0;
    std::size_t argmax_b = 0;
    double K_c = 0;
    std::size_t argmax_c = 0;
    double tail_truncation_bound = 0;  // integral-test bound on the dropped tail, relative to frame_c at n = cap
    std::vector<std::size_t> counterexamples_b;  // n with ratio_b > 10 M
    std::vector<std::size_t> counterexamples_c;  // n with ratio_c > M
    bool passes = false;
};

// Requires M > M_est(w, cap).
LemmaDoubleReport verify_lemma_double(const WeightSequence& w, unsigned M, std::size_t cap);

}  // namespace l2w
