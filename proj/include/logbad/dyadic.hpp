#pragma once

#include <map>
#include <optional>
#include <vector>

#include "logbad/numeric.hpp"

namespace logbad {

// [a/2^l, (a+1)/2^l], 0 <= a < 2^l.
struct DyadicInterval {
    Int a;
    int l = 0;

    Rat lo() const { return Rat(a) * pow2(-l); }
    Rat hi() const { return Rat(a + 1) * pow2(-l); }
    Rat measure() const { return pow2(-l); }

    bool operator==(const DyadicInterval& o) const { return l == o.l && a == o.a; }
};

// Closed rational interval [lo, hi].
struct RatInterval {
    Rat lo, hi;
};

// A set of level-l blocks given as half-open runs [begin, end) of a-values.
// Runs are sorted, disjoint, non-adjacent. This is the wire format between
// danger-set covers and union subtraction.
struct CoverRuns {
    int level = 0;
    std::vector<std::pair<Int, Int>> runs;

    Int block_count() const;
    Rat measure() const { return Rat(block_count()) * pow2(-level); }
    std::vector<DyadicInterval> intervals() const;
    bool empty() const { return runs.empty(); }
};

CoverRuns coalesce(const std::vector<DyadicInterval>& blocks);

// Minimal set of level-l dyadic intervals covering I (clipped to [0,1]).
std::vector<DyadicInterval> dyadic_cover(const RatInterval& I, int l);

// Sorted, disjoint, maximal union of dyadic intervals in [0,1].
class DyadicUnion {
public:
    DyadicUnion() = default;
    static DyadicUnion full();  // [0,1]
    static DyadicUnion from_intervals(std::vector<DyadicInterval> blocks);

    bool is_empty() const { return members_.size() == 0; }
    const DyadicInterval& leftmost() const;
    size_t size() const { return members_.size(); }
    const std::vector<DyadicInterval>& members() const { return members_; }

    Rat measure() const;

    // Exact set difference; removed (if non-null) accrues the measure that
    // was actually taken out.
    DyadicUnion subtract(const CoverRuns& cover, Rat* removed = nullptr) const;
    DyadicUnion subtract(const std::vector<DyadicInterval>& blocks, Rat* removed = nullptr) const;

    bool contains_point(const Rat& t) const;
    bool contains(const DyadicInterval& b) const;
    bool is_subset_of(const DyadicUnion& other) const;

    int max_level() const;

private:
    friend class RunLedger;
    std::vector<DyadicInterval> members_;
};

// Mutable carrier of the survivor set for long ledger runs. Holds connected
// components as half-open grid runs at a single working level, so subtracting
// a cover costs O(tau log n) instead of a full sweep of the union. Converts
// to a maximal DyadicUnion on demand.
class RunLedger {
public:
    static RunLedger full();  // [0,1]

    // Removes the cover; returns the measure actually taken out.
    Rat subtract(const CoverRuns& cover);

    bool is_empty() const { return runs_.empty(); }
    size_t component_count() const { return runs_.size(); }
    const Rat& measure() const { return measure_; }
    int level() const { return level_; }

    // Leftmost maximal dyadic block of the leftmost component.
    DyadicInterval leftmost_block() const;

    bool contains_point(const Rat& t) const;

    DyadicUnion to_union() const;

private:
    void ensure_level(int L);

    int level_ = 0;
    std::map<Int, Int> runs_;  // start -> end, half-open, at level_
    Rat measure_ = 0;
};

}  // namespace logbad
