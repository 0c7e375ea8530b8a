#pragma once

#include <optional>

#include "logbad/alpha.hpp"
#include "logbad/dyadic.hpp"

namespace logbad {

struct DangerParams {
    QuadraticReal alpha;
    long epsilon_log2 = -6;  // epsilon = 2^epsilon_log2, a power of two in (0,1)
    long q0 = 16;
    int log_precision_bits = 30;

    Rat epsilon() const { return pow2(epsilon_log2); }
    void validate() const;
};

// For one x: protected radius, cover level, segments and the dyadic cover A(x).
struct DangerSet {
    Int x;
    Rat radius;                        // certified r(x) >= eps/(||alpha x|| x^2 log2^2 x)
    int level = 0;                     // l_x
    std::vector<RatInterval> segments; // E(x,y) clipped to [0,1], y = 0..x
    CoverRuns cover;                   // A(x), level-l_x blocks
    Int complement_count;              // tau_x: components of [0,1] \ A(x)
};

class DangerBuilder {
public:
    explicit DangerBuilder(const DangerParams& params);

    // r(x): directional rounding never shrinks the protected radius.
    Rat radius(const Int& x) const;
    // l_x; 0 for x = 0 by definition.
    int level(const Int& x) const;

    DangerSet build(const Int& x, bool keep_segments = true) const;

    // Cover restricted to segments meeting [window.lo, window.hi]; used by the
    // greedy chain so a step costs O(local y range) instead of O(x).
    CoverRuns cover_in(const Int& x, const RatInterval& window) const;

    const DangerParams& params() const { return params_; }
    const AlphaScanner& scanner() const { return scanner_; }

    // exact dyadic lower bound on ||alpha x|| used by radius/level
    Rat dist_lower(const Int& x) const;
    // exact dyadic lower bound on log2^2 x
    Rat log_sq_lower(const Int& x) const;

private:
    CoverRuns cover_for_range(const Int& x, const Rat& r, int l,
                              const Int& y_first, const Int& y_last) const;

    DangerParams params_;
    AlphaScanner scanner_;
};

}  // namespace logbad
