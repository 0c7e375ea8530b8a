#pragma once

#include <utility>

#include "logbad/numeric.hpp"

namespace logbad {

// Exact value a + b*sqrt(d) with rational a, b and squarefree d >= 2.
// b == 0 degenerates to a plain rational, which several operations return.
// All comparisons are exact (sign tests after squaring).
class Surd {
public:
    Surd() : d_(2) {}
    Surd(Rat a, Rat b, long d);

    static Surd from_rational(Rat a) { return Surd(std::move(a), Rat(0), 2); }

    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    long d() const { return d_; }
    bool is_rational() const { return sgn(b_) == 0; }

    int sign() const;
    int cmp(const Surd& other) const;  // requires same d (or either rational)
    int cmp(const Rat& r) const;

    Surd operator-() const { return Surd(-a_, -b_, d_); }
    Surd operator+(const Rat& r) const { return Surd(a_ + r, b_, d_); }
    Surd operator-(const Rat& r) const { return Surd(a_ - r, b_, d_); }
    Surd operator*(const Rat& r) const { return Surd(a_ * r, b_ * r, d_); }
    friend Surd operator-(const Rat& r, const Surd& s) { return Surd(r - s.a_, -s.b_, s.d_); }

    // Exact floor, decided by adaptive bracketing plus exact verification.
    Int floor() const;

    // Dyadic bracket lo <= value <= hi with hi - lo <= 2^(-abs_bits).
    std::pair<Rat, Rat> bracket(int abs_bits) const;

    // Largest m/2^k <= value with ~sig_bits significant bits; requires value > 0.
    // dyadic_upper is the matching upper rounding.
    Rat dyadic_lower(int sig_bits) const;
    Rat dyadic_upper(int sig_bits) const;

    double approx() const;

private:
    Rat a_, b_;
    long d_;
};

// Bracket of sqrt(d) at frac_bits fixed-point bits: [s, s+1]/2^frac_bits.
std::pair<Rat, Rat> sqrt_bracket(long d, int frac_bits);

}  // namespace logbad
