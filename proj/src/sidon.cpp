#include "l2w/sidon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace l2w {

void validate_gamma_set(const std::vector<long long>& Gamma) {
    if (Gamma.empty()) throw std::invalid_argument("Gamma must be nonempty");
    auto s = Gamma;
    std::sort(s.begin(), s.end());
    if (s.front() <= 0) throw std::invalid_argument("Gamma must contain positive integers only");
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw std::invalid_argument("Gamma elements must be distinct");
    if (s.back() > (1LL << 56) / static_cast<long long>(s.size())) throw std::invalid_argument("Gamma elements too large");
}

std::uint64_t pow3(std::size_t k) {
    if (k > 40) throw std::overflow_error("3^k exceeds 64 bits for k > 40");
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < k; ++i) r *= 3;
    return r;
}

namespace {

void check_cap(std::size_t size, std::size_t cap, const char* method) {
    if (size > cap)
        throw std::length_error(std::string(method) + ": |Gamma| = " + std::to_string(size) + " exceeds the cap " +
                                std::to_string(cap) + " (3^" + std::to_string(size) + " patterns)");
}

// Patterns over Gamma[i..] hitting target.
std::uint64_t dfs(const std::vector<long long>& g, std::size_t i, long long target, const std::vector<long long>& reach) {
    if (i == g.size()) return target == 0;
    if (target > reach[i] || target < -reach[i]) return 0;
    return dfs(g, i + 1, target, reach) + dfs(g, i + 1, target - g[i], reach) + dfs(g, i + 1, target + g[i], reach);
}

std::vector<long long> suffix_reach(const std::vector<long long>& g) {
    std::vector<long long> r(g.size() + 1, 0);
    for (std::size_t i = g.size(); i-- > 0;) r[i] = r[i + 1] + g[i];
    return r;
}

// All 3^k signed sums of g.
std::vector<long long> all_sums(const std::vector<long long>& g) {
    std::vector<long long> s{0};
    s.reserve(pow3(g.size()));
    for (long long x : g) {
        const std::size_t m = s.size();
        for (std::size_t i = 0; i < m; ++i) {
            s.push_back(s[i] + x);
            s.push_back(s[i] - x);
        }
    }
    return s;
}

}  // namespace

std::uint64_t count_by_enumeration(long long n, const std::vector<long long>& Gamma, Exec ex) {
    validate_gamma_set(Gamma);
    check_cap(Gamma.size(), kSidonEnumerationCap, "enumeration");
    auto g = Gamma;
    std::sort(g.rbegin(), g.rend());  // large elements first prune best
    const auto reach = suffix_reach(g);
    const std::size_t p = std::min<std::size_t>(g.size(), 4);
    const long long prefixes = static_cast<long long>(pow3(p));
    std::uint64_t total = 0;
    auto branch = [&](long long code) {
        long long t = n;
        for (std::size_t i = 0; i < p; ++i, code /= 3) t -= (code % 3 - 1) * g[i];
        return dfs(g, p, t, reach);
    };
    if (ex == Exec::parallel) {
#pragma omp parallel for reduction(+ : total) schedule(dynamic)
        for (long long c = 0; c < prefixes; ++c) total += branch(c);
    } else {
        for (long long c = 0; c < prefixes; ++c) total += branch(c);
    }
    return total;
}

std::uint64_t count_by_meet_in_middle(long long n, const std::vector<long long>& Gamma) {
    validate_gamma_set(Gamma);
    check_cap(Gamma.size(), kSidonMeetInMiddleCap, "meet-in-the-middle");
    const std::size_t h = Gamma.size() / 2;
    auto left = all_sums({Gamma.begin(), Gamma.begin() + static_cast<std::ptrdiff_t>(h)});
    const auto right = all_sums({Gamma.begin() + static_cast<std::ptrdiff_t>(h), Gamma.end()});
    std::sort(left.begin(), left.end());
    std::uint64_t total = 0;
    for (long long s : right) {
        const auto [lo, hi] = std::equal_range(left.begin(), left.end(), n - s);
        total += static_cast<std::uint64_t>(hi - lo);
    }
    return total;
}

RepCount count_representations(long long n, const std::vector<long long>& Gamma, double gamma) {
    validate_gamma_set(Gamma);
    RepCount r;
    r.n = n;
    r.Gamma = Gamma;
    r.gamma = gamma;
    r.bound = std::pow(3.0, gamma * static_cast<double>(Gamma.size()));
    r.count = Gamma.size() <= kSidonEnumerationCap ? count_by_enumeration(n, Gamma) : count_by_meet_in_middle(n, Gamma);
    return r;
}

std::vector<std::pair<long long, std::uint64_t>> representation_distribution(const std::vector<long long>& Gamma) {
    validate_gamma_set(Gamma);
    const long long total = std::accumulate(Gamma.begin(), Gamma.end(), 0LL);
    std::vector<std::pair<long long, std::uint64_t>> out;
    if (total <= (1LL << 24) && Gamma.size() <= 40) {
        // Dense convolution of the (1,1,1) masks at +-lambda_j.
        std::vector<std::uint64_t> dp(static_cast<std::size_t>(2 * total + 1), 0), nx(dp.size());
        dp[static_cast<std::size_t>(total)] = 1;
        long long span = 0;
        for (long long x : Gamma) {
            std::fill(nx.begin(), nx.end(), 0);
            for (long long s = -span; s <= span; ++s) {
                const std::uint64_t v = dp[static_cast<std::size_t>(s + total)];
                if (!v) continue;
                nx[static_cast<std::size_t>(s + total)] += v;
                nx[static_cast<std::size_t>(s + x + total)] += v;
                nx[static_cast<std::size_t>(s - x + total)] += v;
            }
            span += x;
            dp.swap(nx);
        }
        for (long long s = -total; s <= total; ++s)
            if (dp[static_cast<std::size_t>(s + total)]) out.emplace_back(s, dp[static_cast<std::size_t>(s + total)]);
        return out;
    }
    check_cap(Gamma.size(), kSidonEnumerationCap, "representation distribution");
    auto sums = all_sums(Gamma);
    std::sort(sums.begin(), sums.end());
    for (std::size_t i = 0; i < sums.size();) {
        std::size_t j = i;
        while (j < sums.size() && sums[j] == sums[i]) ++j;
        out.emplace_back(sums[i], j - i);
        i = j;
    }
    return out;
}

PisierProfile pisier_profile(const std::vector<long long>& Gamma, double gamma) {
    const auto dist = representation_distribution(Gamma);
    PisierProfile p;
    p.size = Gamma.size();
    p.gamma = gamma;
    p.bound = std::pow(3.0, gamma * static_cast<double>(p.size));
    p.symmetric = true;
    std::size_t lo = 0, hi = dist.size();
    while (lo < hi) {
        if (dist[lo].first != -dist[hi - 1].first || dist[lo].second != dist[hi - 1].second) p.symmetric = false;
        ++lo;
        --hi;
    }
    for (const auto& [n, c] : dist) {
        p.total_mass += c;
        if (n >= 0 && c > p.sup_count) {
            p.sup_count = c;
            p.argmax = n;
        }
    }
    p.total_exact = p.total_mass == pow3(p.size);
    p.passes = static_cast<double>(p.sup_count) <= p.bound;
    return p;
}

}  // namespace l2w
