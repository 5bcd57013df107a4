#include "l2w/weights.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "l2w/common.hpp"
#include "l2w/io.hpp"

namespace l2w {

struct WeightSequence::Impl {
    std::string name;
    Generator gen;
    std::optional<std::size_t> last;
    std::mutex mu;
    std::vector<double> cache;

    void extend(std::size_t n) {
        if (last && n > *last)
            throw std::out_of_range("weight '" + name + "' is only defined up to n=" + std::to_string(*last) +
                                    ", requested n=" + std::to_string(n));
        while (cache.size() <= n) {
            const std::size_t i = cache.size();
            const double v = gen(i);
            if (!(v > 0) || !std::isfinite(v))
                throw std::domain_error("weight '" + name + "' is not a positive finite number at n=" + std::to_string(i));
            cache.push_back(v);
        }
    }
};

WeightSequence::WeightSequence(std::string name, Generator gen, std::optional<std::size_t> last_index)
    : impl_(std::make_shared<Impl>()) {
    impl_->name = std::move(name);
    impl_->gen = std::move(gen);
    impl_->last = last_index;
}

double WeightSequence::operator()(std::size_t n) const {
    std::lock_guard lk(impl_->mu);
    if (n >= impl_->cache.size()) impl_->extend(n);
    return impl_->cache[n];
}

std::vector<double> WeightSequence::values(std::size_t last) const {
    std::lock_guard lk(impl_->mu);
    if (last >= impl_->cache.size()) impl_->extend(last);
    return {impl_->cache.begin(), impl_->cache.begin() + static_cast<std::ptrdiff_t>(last + 1)};
}

const std::string& WeightSequence::name() const { return impl_->name; }
std::optional<std::size_t> WeightSequence::last_index() const { return impl_->last; }

WeightSequence power_weight(double gamma) {
    std::ostringstream nm;
    nm << "(1+n)^" << gamma;
    if (gamma == 0.5) return WeightSequence(nm.str(), [](std::size_t n) { return std::sqrt(1.0 + static_cast<double>(n)); });
    return WeightSequence(nm.str(), [gamma](std::size_t n) { return std::pow(1.0 + static_cast<double>(n), gamma); });
}

WeightSequence constant_weight(double c) {
    return WeightSequence("constant " + io::format_double(c), [c](std::size_t) { return c; });
}

WeightSequence table_weight(std::string name, std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("weight table '" + name + "' is empty");
    const std::size_t last = values.size() - 1;
    auto data = std::make_shared<std::vector<double>>(std::move(values));
    return WeightSequence(std::move(name), [data](std::size_t n) { return (*data)[n]; }, last);
}

WeightSequence load_weights_csv(const std::filesystem::path& p) {
    std::istringstream in(io::read_text(p));
    std::string line;
    if (!std::getline(in, line) || line.rfind("n,value", 0) != 0)
        throw std::runtime_error(p.string() + ": expected header n,value");
    std::vector<double> vals;
    std::vector<bool> seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error(p.string() + ":" + std::to_string(lineno) + ": expected n,value");
        long n;
        double v;
        try {
            n = std::stol(line.substr(0, comma));
            v = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw std::runtime_error(p.string() + ":" + std::to_string(lineno) + ": malformed number");
        }
        if (n < 0) throw std::runtime_error(p.string() + ":" + std::to_string(lineno) + ": negative index");
        const auto i = static_cast<std::size_t>(n);
        if (i >= vals.size()) {
            vals.resize(i + 1, 0.0);
            seen.resize(i + 1, false);
        }
        vals[i] = v;
        seen[i] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) throw std::runtime_error(p.string() + ": missing weight for n=" + std::to_string(i));
    return table_weight(p.filename().string(), std::move(vals));
}

WeightSequence clamp_below_one(const WeightSequence& w) {
    return WeightSequence("max(" + w.name() + ",1)", [w](std::size_t n) { return std::max(w(n), 1.0); }, w.last_index());
}

DivergenceWitness check_divergence(const WeightSequence& w, double target, std::size_t cap) {
    if (!(target > 0)) throw std::invalid_argument("check_divergence: target must be positive");
    if (cap < 1) throw std::invalid_argument("check_divergence: cap must be >= 1");
    DivergenceWitness r;
    r.target = target;
    r.cap = cap;
    const auto lam = w.values(cap);
    double s = 0;
    for (std::size_t n = 1; n <= cap; ++n) {
        s += 1.0 / lam[n];
        if (!r.N_hit && s >= target) r.N_hit = n;
    }
    r.partial_sum_at_cap = s;
    return r;
}

RegularityReport doubling_constant(const WeightSequence& w, std::size_t cap, double threshold, std::size_t max_witnesses) {
    if (cap < 2) throw std::invalid_argument("doubling_constant: cap must be >= 2");
    RegularityReport r;
    r.range_checked = cap;
    r.violation_threshold = threshold;
    const std::size_t nmax = cap / 2;
    const auto lam = w.values(2 * nmax);
    // Window [n, 2n] slides right as n grows: monotone deques give its max and min.
    std::deque<std::size_t> qmax, qmin;
    std::size_t hi = 0;
    double C = 1.0;
    for (std::size_t n = 1; n <= nmax; ++n) {
        while (hi < 2 * n) {
            ++hi;
            while (!qmax.empty() && lam[qmax.back()] <= lam[hi]) qmax.pop_back();
            qmax.push_back(hi);
            while (!qmin.empty() && lam[qmin.back()] >= lam[hi]) qmin.pop_back();
            qmin.push_back(hi);
        }
        while (qmax.front() < n) qmax.pop_front();
        while (qmin.front() < n) qmin.pop_front();
        const double up = lam[qmax.front()] / lam[n];
        const double down = lam[n] / lam[qmin.front()];
        const double c = std::max(up, down);
        C = std::max(C, c);
        if (c > threshold && r.violations.size() < max_witnesses)
            r.violations.emplace_back(n, up >= down ? qmax.front() : qmin.front());
    }
    r.C_est = C;
    return r;
}

RegularityReport estimate_M(const WeightSequence& w, std::size_t cap, unsigned M_max) {
    if (cap < 2) throw std::invalid_argument("estimate_M: cap must be >= 2");
    RegularityReport r;
    r.range_checked = cap;
    const auto lam = w.values(cap);
    for (unsigned M = 1; M <= M_max; ++M) {
        std::optional<std::size_t> bad;
        for (std::size_t n = 0; n + 1 < cap; ++n) {
            const double allowed = std::pow((2.0 + n) / (1.0 + n), static_cast<double>(M)) * (1.0 + 1e-12);
            if (lam[n + 1] / lam[n] > allowed) {
                bad = n;
                break;
            }
        }
        if (!bad) {
            r.M_est = M;
            return r;
        }
        r.rejected.push_back({M, *bad});
    }
    r.diagnostic = "no M <= " + std::to_string(M_max) +
                   " makes (1+n)^-M lambda_n non-increasing: weight grows faster than any polynomial on the checked range";
    return r;
}

LemmaDoubleTerms lemma_double_terms(const WeightSequence& w, unsigned M, std::size_t n, std::size_t tail_end) {
    LemmaDoubleTerms t;
    const double Md = M;
    for (std::size_t j = 1; j <= n; ++j) t.lhs_b += std::pow(static_cast<double>(j), Md - 1) / w(j);
    t.frame_b = std::pow(static_cast<double>(n), Md) / w(n);
    t.frame_c = 1.0 / (std::pow(static_cast<double>(n), Md) * w(n));
    t.c_vacuous = n >= tail_end;
    for (std::size_t j = tail_end; j > n; --j) t.lhs_c += 1.0 / (w(j) * std::pow(static_cast<double>(j), Md + 1));
    return t;
}

LemmaDoubleReport verify_lemma_double(const WeightSequence& w, unsigned M, std::size_t cap) {
    if (cap < 2) throw std::invalid_argument("verify_lemma_double: cap must be >= 2");
    const auto reg = estimate_M(w, cap);
    if (!reg.M_est) throw PremiseError("polynomial growth", reg.diagnostic);
    if (M <= *reg.M_est)
        throw std::invalid_argument("verify_lemma_double: need M > M_est = " + std::to_string(*reg.M_est) + ", got M = " + std::to_string(M));

    LemmaDoubleReport r;
    r.M = M;
    r.cap = cap;
    r.tail_end = 8 * cap;
    const auto lam = w.values(r.tail_end);
    const double Md = M;

    // Suffix sums for (c), accumulated from the small end.
    std::vector<double> tail(cap + 1, 0.0);
    double s = 0;
    for (std::size_t j = r.tail_end; j > cap; --j) s += 1.0 / (lam[j] * std::pow(static_cast<double>(j), Md + 1));
    tail[cap] = s;
    for (std::size_t n = cap; n-- > 1;) tail[n] = tail[n + 1] + 1.0 / (lam[n + 1] * std::pow(static_cast<double>(n + 1), Md + 1));

    double pre = 0;
    for (std::size_t n = 1; n <= cap; ++n) {
        const double nM = std::pow(static_cast<double>(n), Md);
        pre += std::pow(static_cast<double>(n), Md - 1) / lam[n];
        const double rb = pre / (nM / lam[n]);
        const double rc = tail[n] * nM * lam[n];
        if (rb > r.K_b) {
            r.K_b = rb;
            r.argmax_b = n;
        }
        if (rc > r.K_c) {
            r.K_c = rc;
            r.argmax_c = n;
        }
        if (rb > 10.0 * Md) r.counterexamples_b.push_back(n);
        if (rc > Md) r.counterexamples_c.push_back(n);
    }
    const double te = static_cast<double>(r.tail_end);
    const double dropped = 1.0 / (lam[r.tail_end] * Md * std::pow(te, Md));
    r.tail_truncation_bound = dropped * std::pow(static_cast<double>(cap), Md) * lam[cap];
    r.passes = std::isfinite(r.K_b) && std::isfinite(r.K_c) && r.counterexamples_b.empty() && r.counterexamples_c.empty();
    return r;
}

}  // namespace l2w
