#include "l2w/compact_set.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace l2w {

CompactSet CompactSet::full(std::size_t G) {
    CompactSet s;
    s.G_ = G;
    s.arcs_.push_back({0, G});
    return s;
}

CompactSet CompactSet::empty(std::size_t G) {
    CompactSet s;
    s.G_ = G;
    return s;
}

CompactSet CompactSet::from_mask(const std::vector<std::uint8_t>& mask) {
    const std::size_t G = mask.size();
    if (G == 0) throw std::invalid_argument("CompactSet: empty grid");
    CompactSet s;
    s.G_ = G;
    const auto zero = std::find(mask.begin(), mask.end(), 0);
    if (zero == mask.end()) return full(G);
    const std::size_t z = static_cast<std::size_t>(zero - mask.begin());
    std::size_t i = 1;
    while (i <= G) {
        const std::size_t idx = (z + i) % G;
        if (!mask[idx]) {
            ++i;
            continue;
        }
        Arc a{idx, 0};
        while (i <= G && mask[(z + i) % G]) {
            ++a.count;
            ++i;
        }
        s.arcs_.push_back(a);
    }
    std::sort(s.arcs_.begin(), s.arcs_.end(), [](const Arc& a, const Arc& b) { return a.start < b.start; });
    return s;
}

CompactSet CompactSet::from_arcs(std::size_t G, const std::vector<Arc>& arcs) {
    std::vector<std::uint8_t> m(G, 0);
    for (const auto& a : arcs) {
        if (a.count == 0 || a.count > G || a.start >= G) throw std::invalid_argument("CompactSet: malformed arc");
        for (std::size_t k = 0; k < a.count; ++k) m[(a.start + k) % G] = 1;
    }
    return from_mask(m);
}

bool CompactSet::contains(std::size_t i) const {
    for (const auto& a : arcs_)
        if ((i + G_ - a.start) % G_ < a.count) return true;
    return false;
}

std::size_t CompactSet::point_count() const {
    std::size_t n = 0;
    for (const auto& a : arcs_) n += a.count;
    return n;
}

std::vector<std::uint8_t> CompactSet::mask() const {
    std::vector<std::uint8_t> m(G_, 0);
    for (const auto& a : arcs_)
        for (std::size_t k = 0; k < a.count; ++k) m[(a.start + k) % G_] = 1;
    return m;
}

CompactSet CompactSet::minus(const CompactSet& o) const {
    if (o.G_ != G_) throw std::invalid_argument("CompactSet: grid mismatch");
    auto m = mask();
    const auto r = o.mask();
    for (std::size_t i = 0; i < G_; ++i)
        if (r[i]) m[i] = 0;
    return from_mask(m);
}

bool CompactSet::subset_of(const CompactSet& o) const {
    if (o.G_ != G_) return false;
    const auto a = mask(), b = o.mask();
    for (std::size_t i = 0; i < G_; ++i)
        if (a[i] && !b[i]) return false;
    return true;
}

std::vector<std::pair<std::size_t, std::size_t>> CompactSet::index_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& a : arcs_) out.emplace_back(a.start, a.end(G_));
    return out;
}

namespace {

// Membership on the half-grid: node 2i is grid point i, node 2i+1 the midpoint
// of (i, i+1), which lies in the set iff both neighbours do.
std::vector<std::uint8_t> half_grid(const CompactSet& s) {
    const auto m = s.mask();
    const std::size_t G = m.size();
    std::vector<std::uint8_t> h(2 * G, 0);
    for (std::size_t i = 0; i < G; ++i) {
        h[2 * i] = m[i];
        h[2 * i + 1] = m[i] && m[(i + 1) % G];
    }
    return h;
}

// Circular distance (in half-grid steps) from every node to the nearest member.
std::vector<std::size_t> distance_to(const std::vector<std::uint8_t>& member) {
    const std::size_t n = member.size();
    const std::size_t inf = std::numeric_limits<std::size_t>::max() / 4;
    std::vector<std::size_t> d(n, inf);
    for (std::size_t i = 0; i < n; ++i)
        if (member[i]) d[i] = 0;
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t i = k % n, prev = (k + n - 1) % n;
            d[i] = std::min(d[i], d[prev] + 1);
        }
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = n; k-- > 0;) {
            const std::size_t i = k, next = (k + 1) % n;
            d[i] = std::min(d[i], d[next] + 1);
        }
    return d;
}

void check_pair(const CompactSet& E, const CompactSet& K) {
    if (E.is_empty() || K.is_empty()) throw std::invalid_argument("hausdorff distance: sets must be nonempty");
    if (E.grid() != K.grid()) throw std::invalid_argument("hausdorff distance: grid mismatch");
}

}  // namespace

double excess(const CompactSet& E, const CompactSet& K) {
    check_pair(E, K);
    const auto he = half_grid(E), hk = half_grid(K);
    const auto d = distance_to(hk);
    std::size_t mx = 0;
    for (std::size_t i = 0; i < he.size(); ++i)
        if (he[i]) mx = std::max(mx, d[i]);
    return static_cast<double>(mx) / static_cast<double>(he.size());
}

double hausdorff_distance(const CompactSet& E, const CompactSet& K) { return excess(E, K) + excess(K, E); }

}  // namespace l2w
