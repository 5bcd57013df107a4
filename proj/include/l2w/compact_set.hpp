#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace l2w {

// Closed grid arc {start, start+1, ..., start+count-1} mod G.
struct Arc {
    std::size_t start = 0;
    std::size_t count = 0;
    std::size_t end(std::size_t G) const { return (start + count - 1) % G; }
    bool operator==(const Arc&) const = default;
};

// Union of closed grid arcs on the G-grid. Canonical form: maximal arcs, sorted by
// start, an arc crossing index 0 is stored with start > end; the full circle is {0, G}.
class CompactSet {
public:
    CompactSet() = default;
    static CompactSet full(std::size_t G);
    static CompactSet empty(std::size_t G);
    static CompactSet from_mask(const std::vector<std::uint8_t>& mask);
    static CompactSet from_arcs(std::size_t G, const std::vector<Arc>& arcs);

    std::size_t grid() const { return G_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    bool is_empty() const { return arcs_.empty(); }
    bool is_full() const { return arcs_.size() == 1 && arcs_[0].count == G_; }
    bool contains(std::size_t i) const;
    std::size_t point_count() const;
    std::vector<std::uint8_t> mask() const;

    CompactSet minus(const CompactSet& o) const;
    bool subset_of(const CompactSet& o) const;
    bool operator==(const CompactSet& o) const { return G_ == o.G_ && arcs_ == o.arcs_; }

    // [start_index, end_index] pairs.
    std::vector<std::pair<std::size_t, std::size_t>> index_pairs() const;

private:
    std::size_t G_ = 0;
    std::vector<Arc> arcs_;
};

// sup_{x in E} dist(x, K) + sup_{y in K} dist(y, E), arc-length distance with
// circumference 1. Sets are unions of closed arcs with grid endpoints; distances
// are evaluated on the half-grid, which is exact for such sets.
double hausdorff_distance(const CompactSet& E, const CompactSet& K);
// One-sided part sup_{x in E} dist(x, K).
double excess(const CompactSet& E, const CompactSet& K);

}  // namespace l2w
