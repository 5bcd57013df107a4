#include "l2w/baire.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace l2w {

void PairState::refresh(std::size_t G) {
    const auto g = idft(f, G);
    samples.resize(G);
    for (std::size_t i = 0; i < G; ++i) samples[i] = g[i].real();
}

PairState make_pair_state(CoeffVector f, CompactSet E, std::size_t G) {
    PairState p;
    p.f = std::move(f);
    p.E = std::move(E);
    p.refresh(G);
    return p;
}

double pair_metric(const PairState& p, const PairState& q, const WeightSequence& w) {
    return hausdorff_distance(p.E, q.E) + weighted_norm(p.f - q.f, w).value;
}

CoeffVector prepare(const CoeffVector& f_raw, double delta, std::size_t K_fejer) {
    return Complex{1.0 - delta / 2.0} * fejer_mean(f_raw, K_fejer);
}

CompactSet numerical_support(const CoeffVector& f, std::size_t G, double tau) {
    const auto g = idft(f, G);
    std::vector<std::uint8_t> m(G);
    for (std::size_t i = 0; i < G; ++i) m[i] = std::abs(g[i]) > tau;
    return CompactSet::from_mask(m);
}

std::pair<PairState, StepRecord> apply_localizer(const PairState& p, std::size_t a, const Localizer& loc,
                                                 const WeightSequence& w, std::size_t G, const DeletionOptions& opts) {
    const std::size_t N_work = opts.N_work ? opts.N_work : G / 4;
    const double tau = opts.tol.support;
    StepRecord r;
    r.point = a % G;
    r.epsilon = loc.requested_eps;
    r.psi_degree = loc.psi.degree();
    r.ladder_level = loc.ladder_level;
    r.mean_before = p.f[0].real();

    CoeffVector prod = pointwise_product(p.f, rotate_grid(loc.psi, r.point, G));
    // Drop numerically empty top modes and anything past the working degree; both count as truncation.
    const std::size_t keep = std::min(N_work, prod.effective_degree(1e-17));
    const auto lam = w.values(prod.degree());
    for (std::size_t n = keep + 1; n <= prod.degree(); ++n) {
        const long k = static_cast<long>(n);
        r.truncation_energy += (std::norm(prod[k]) + std::norm(prod[-k])) * lam[n];
    }
    PairState q;
    q.f = prod.resized(keep);
    q.f.symmetrize();
    q.refresh(G);
    r.f_degree = keep;
    r.mean_after = q.f[0].real();
    r.f_min = *std::min_element(q.samples.begin(), q.samples.end());
    r.f_max = *std::max_element(q.samples.begin(), q.samples.end());
    if (r.f_max > 2.0 * (1.0 + loc.requested_eps) + tau || r.f_min < -tau)
        throw std::logic_error("deletion step: product left the admissible range [" + std::to_string(r.f_min) + ", " +
                               std::to_string(r.f_max) + "], localizer defect");

    // Arc removed from E: where psi is small enough that f*psi stays below tau/4.
    double fsup = 1.0;
    for (double v : p.samples) fsup = std::max(fsup, std::abs(v));
    const auto psi_g = idft(loc.psi, G);
    const long k = flat_half_width(psi_g, 0.0, tau / (4.0 * fsup));
    if (k < 0) throw VerificationError("deletion step: localizer has no deleted arc at this f scale");
    r.deleted = Arc{(r.point + G - static_cast<std::size_t>(k)) % G, static_cast<std::size_t>(2 * k + 1)};
    q.E = p.E.minus(CompactSet::from_arcs(G, {r.deleted}));
    if (q.E.is_empty()) throw VerificationError("deletion step: removing the arc empties E");

    r.support_ok = true;
    for (std::size_t i = 0; i < G; ++i)
        if (std::abs(q.samples[i]) > tau && !q.E.contains(i)) {
            r.support_ok = false;
            break;
        }

    r.hausdorff_increment = hausdorff_distance(p.E, q.E);
    r.norm_increment = weighted_norm(q.f - p.f, w).value;
    r.d_increment = r.hausdorff_increment + r.norm_increment + std::sqrt(r.truncation_energy);
    q.budget_spent = p.budget_spent + r.d_increment;
    return {std::move(q), r};
}

std::pair<PairState, StepRecord> deletion_step(const PairState& p, std::size_t a, double epsilon, const WeightSequence& w,
                                               std::size_t G, const DeletionOptions& opts) {
    const std::size_t N_work = opts.N_work ? opts.N_work : G / 4;
    LocalizerOptions lo = opts.loc;
    const std::size_t fd = p.f.degree();
    if (fd >= N_work) throw VerificationError("deletion step: no working degree left for the localizer");
    lo.max_degree = std::min(lo.max_degree.value_or(N_work - fd), N_work - fd);
    const auto loc = build_localizer(w, epsilon, G, lo);
    return apply_localizer(p, a, loc, w, G, opts);
}

std::vector<double> recompute_increments(const DeletionTrace& t, const WeightSequence& w) {
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < t.snapshots.size() && k < t.steps.size(); ++k)
        out.push_back(pair_metric(t.snapshots[k], t.snapshots[k + 1], w) + std::sqrt(t.steps[k].truncation_energy));
    return out;
}

std::vector<std::size_t> equally_spaced_points(std::size_t K, std::size_t G) {
    std::vector<std::size_t> pts;
    for (std::size_t k = 0; k < K; ++k) pts.push_back((k * G + K / 2) / K % G);
    return pts;
}

BaireResult run_baire(const CoeffVector& f0, const CompactSet& E0, const std::vector<std::size_t>& points,
                      const std::vector<double>& budgets, const WeightSequence& w, std::size_t G, const BaireOptions& opts) {
    if (budgets.size() < points.size()) throw std::invalid_argument("run_baire: need one budget per point");
    for (double b : budgets)
        if (!(b > 0)) throw std::invalid_argument("run_baire: budgets must be positive");
    if (E0.is_empty() || E0.grid() != G) throw std::invalid_argument("run_baire: E0 must be a nonempty set on the run grid");

    // Premises of the weight are checked once, at the coarsest epsilon.
    choose_S(w, opts.eps_init);

    BaireResult res;
    res.state = make_pair_state(prepare(f0, opts.delta, opts.K_fejer), E0, G);
    if (opts.keep_snapshots) res.trace.snapshots.push_back(res.state);

    DeletionOptions dopt;
    dopt.N_work = opts.N_work ? opts.N_work : G / 4;
    dopt.tol = opts.tol;
    dopt.loc.tol = opts.tol;

    for (std::size_t k = 0; k < points.size(); ++k) {
        const PairState& cur = res.state;
        const std::size_t remaining = dopt.N_work > cur.f.degree() ? dopt.N_work - cur.f.degree() : 0;
        std::vector<std::size_t> degrees;
        for (std::size_t d = opts.min_degree; d < remaining; d *= 2) degrees.push_back(d);
        if (remaining > 0) degrees.push_back(remaining);

        std::optional<std::pair<PairState, StepRecord>> accepted;
        std::vector<std::string> attempts;
        double eps = opts.eps_init;
        const double floor = remaining > 0 ? tail_energy_lower_bound(w, remaining) : 1.0;
        for (unsigned h = 0; h <= opts.max_halvings && !accepted; ++h, eps /= 2) {
            if (eps * eps < floor) {
                std::ostringstream tag;
                tag << "eps=" << eps << ": below the weighted tail floor " << floor << " at degree " << remaining;
                attempts.push_back(tag.str());
                break;
            }
            for (std::size_t D : degrees) {
                std::ostringstream tag;
                tag << "eps=" << eps << " degree=" << D << ": ";
                Localizer loc;
                try {
                    LocalizerOptions lo = dopt.loc;
                    lo.max_degree = D;
                    loc = build_localizer(w, eps, G, lo);
                } catch (const PremiseError&) {
                    throw;
                } catch (const std::exception& e) {
                    attempts.push_back(tag.str() + e.what());
                    continue;
                }
                std::pair<PairState, StepRecord> out;
                try {
                    out = apply_localizer(cur, points[k], loc, w, G, dopt);
                } catch (const VerificationError& e) {
                    attempts.push_back(tag.str() + e.what());
                    continue;
                }
                const auto& rec = out.second;
                if (!rec.support_ok) {
                    attempts.push_back(tag.str() + "support containment: earlier deleted arcs resurfaced above tau_supp");
                    continue;
                }
                if (rec.d_increment > budgets[k]) {
                    attempts.push_back(tag.str() + "increment " + std::to_string(rec.d_increment) + " > budget " +
                                       std::to_string(budgets[k]));
                    break;  // larger degrees give the same flattest-passing shape; try a smaller eps
                }
                accepted = std::move(out);
                break;
            }
        }
        if (!accepted) {
            res.failure = BaireFailure{k, "epsilon search exhausted at step " + std::to_string(k + 1) + " (point " +
                                              std::to_string(points[k]) + ", budget " + std::to_string(budgets[k]) + ")",
                                       std::move(attempts)};
            return res;
        }
        res.state = std::move(accepted->first);
        res.trace.steps.push_back(accepted->second);
        if (opts.keep_snapshots) res.trace.snapshots.push_back(res.state);
    }
    return res;
}

BaireChecks check_baire(const BaireResult& r, double initial_mean, std::size_t steps_planned,
                        const std::vector<double>& budgets, std::size_t G, const Tolerances& tol) {
    BaireChecks c;
    c.steps_planned = steps_planned;
    c.steps_done = r.trace.steps.size();
    c.complete = !r.failure && c.steps_done == steps_planned;

    const auto supp = numerical_support(r.state.f, G, tol.support);
    c.support_avoids_arcs = true;
    for (const auto& st : r.trace.steps)
        for (std::size_t i = 0; i < st.deleted.count; ++i)
            if (supp.contains((st.deleted.start + i) % G)) c.support_avoids_arcs = false;

    c.mean_drift = std::abs(r.state.f[0].real() - initial_mean);
    c.mean_ok = c.mean_drift <= tol.mean;

    for (const auto& st : r.trace.steps) c.total_distance += st.d_increment;
    for (std::size_t k = 0; k < steps_planned && k < budgets.size(); ++k) c.budget_sum += budgets[k];
    c.within_budget = c.total_distance <= c.budget_sum + tol.budget;

    c.nested = true;
    for (const auto& st : r.trace.steps) c.nested = c.nested && st.support_ok;
    for (std::size_t k = 0; k + 1 < r.trace.snapshots.size(); ++k)
        if (!r.trace.snapshots[k + 1].E.subset_of(r.trace.snapshots[k].E)) c.nested = false;
    return c;
}

}  // namespace l2w
