#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "l2w/common.hpp"

namespace l2w {

inline constexpr std::size_t kSidonEnumerationCap = 16;
inline constexpr std::size_t kSidonMeetInMiddleCap = 28;

struct RepCount {
    long long n = 0;
    std::vector<long long> Gamma;
    std::uint64_t count = 0;
    double gamma = 0;
    double bound = 0;  // 3^(gamma |Gamma|)
};

// Throws invalid_argument unless every element is positive and distinct.
void validate_gamma_set(const std::vector<long long>& Gamma);
std::uint64_t pow3(std::size_t k);

// Number of sign patterns eps in {-1,0,1}^|Gamma| with sum eps_j lambda_j = n.
std::uint64_t count_by_enumeration(long long n, const std::vector<long long>& Gamma, Exec ex = default_exec());
std::uint64_t count_by_meet_in_middle(long long n, const std::vector<long long>& Gamma);
RepCount count_representations(long long n, const std::vector<long long>& Gamma, double gamma = 0);

// (n, R(n)) for every n with R(n) > 0, ascending in n.
std::vector<std::pair<long long, std::uint64_t>> representation_distribution(const std::vector<long long>& Gamma);

struct PisierProfile {
    std::size_t size = 0;
    std::uint64_t sup_count = 0;
    long long argmax = 0;  // smallest n >= 0 attaining the sup
    double gamma = 0;
    double bound = 0;
    bool passes = false;
    std::uint64_t total_mass = 0;
    bool total_exact = false;  // total_mass == 3^|Gamma|
    bool symmetric = false;    // R(n) == R(-n) for all n
};

PisierProfile pisier_profile(const std::vector<long long>& Gamma, double gamma);

}  // namespace l2w
