#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace logbad {

using Int = mpz_class;
using Rat = mpq_class;

// 2^e as an exact rational, e may be negative.
Rat pow2(long e);

// Exact n with 2^n <= v < 2^(n+1). Requires v > 0.
long floor_log2(const Rat& v);

// Exact ceil(log2 v). Requires v > 0.
long ceil_log2(const Rat& v);

bool is_power_of_two(const Rat& v);

// Dyadic bracket [lo, hi] of log2(v) with frac_bits fractional bits.
// lo <= log2 v <= hi, hi - lo <= 2^(1-frac_bits). Exact (lo == hi) when v
// is a power of two.
std::pair<Rat, Rat> log2_bracket(const Rat& v, int frac_bits);

// Canonical directed roundings of log2: floor(2^frac_bits * log2 v)/2^frac_bits
// and the matching ceiling. Independent of internal working precision.
Rat log2_lower(const Rat& v, int frac_bits);
Rat log2_upper(const Rat& v, int frac_bits);

// floor(sqrt(n)) for n >= 0.
Int isqrt(const Int& n);

bool is_squarefree(const Int& d);

Rat parse_rational(const std::string& s);  // "num", "num/den"
std::string rational_string(const Rat& v); // "num/den" canonical

}  // namespace logbad
