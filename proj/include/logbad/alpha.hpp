#pragma once

#include <optional>
#include <vector>

#include "logbad/surd.hpp"

namespace logbad {

// A badly approximable alpha in (0,1): a real quadratic irrational a + b*sqrt(d).
class QuadraticReal {
public:
    QuadraticReal(Rat a, Rat b, long d);

    static QuadraticReal golden();      // (sqrt5 - 1)/2
    static QuadraticReal sqrt2_minus_1();
    static QuadraticReal sqrt3_half();  // (sqrt3 - 1)/2

    const Surd& value() const { return v_; }
    long d() const { return v_.d(); }
    const Rat& a() const { return v_.a(); }
    const Rat& b() const { return v_.b(); }

private:
    Surd v_;
};

struct CfExpansion {
    std::vector<Int> quotients;  // a_1..a_n of the fractional expansion
    long preperiod = 0;          // index where the period starts (0-based)
    long period = 0;             // 0 if not detected within n terms
    Int a_max;                   // max partial quotient over preperiod + one period
};

struct Convergent {
    Int p, q;
    long index;
};

struct BadnessCertificate {
    Rat delta;       // certified lower bound on q*||alpha q|| for all q >= 1
    long scan_limit; // exhaustive scan range
    Rat tail_bound;  // 1/(a_max + 2), valid for all q
    Int a_max;
};

CfExpansion cf_expand(const QuadraticReal& alpha, long n);

std::vector<Convergent> convergents(const CfExpansion& cf, long count);

// ||alpha * q||, exact, in (0, 1/2].
Surd unit_distance(const QuadraticReal& alpha, const Int& q);

BadnessCertificate badness_delta(const QuadraticReal& alpha, long scan_limit);

// Fixed-point accelerator for scans: certified brackets of ||alpha x|| without
// per-x surd work. K fractional bits; bracket width is x * 2^-K.
class AlphaScanner {
public:
    explicit AlphaScanner(const QuadraticReal& alpha, int frac_bits = 160);

    // lo <= ||alpha x|| <= hi, dyadic rationals
    std::pair<Rat, Rat> dist_bracket(const Int& x) const;

    // integer brackets at scale 2^-K (avoids mpq churn in hot loops)
    void dist_bracket_scaled(const Int& x, Int& lo, Int& hi) const;
    int frac_bits() const { return k_; }

    // nearest integer to alpha*x (the y with |alpha x - y| = ||alpha x||)
    Int nearest(const Int& x) const;

    const QuadraticReal& alpha() const { return alpha_; }

    // exact fallback
    Surd exact_dist(const Int& x) const { return unit_distance(alpha_, x); }

private:
    QuadraticReal alpha_;
    Int mant_;  // floor(alpha * 2^K)
    int k_;
};

}  // namespace logbad
