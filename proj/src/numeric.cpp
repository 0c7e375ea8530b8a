#include "logbad/numeric.hpp"

#include <stdexcept>

namespace logbad {

Rat pow2(long e) {
    Rat r;
    if (e >= 0) {
        mpz_mul_2exp(r.get_num_mpz_t(), Int(1).get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    } else {
        r.get_num() = 1;
        mpz_mul_2exp(r.get_den_mpz_t(), Int(1).get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    }
    return r;
}

long floor_log2(const Rat& v) {
    if (sgn(v) <= 0) throw std::invalid_argument("floor_log2: v <= 0");
    long bn = static_cast<long>(mpz_sizeinbase(v.get_num_mpz_t(), 2));
    long bd = static_cast<long>(mpz_sizeinbase(v.get_den_mpz_t(), 2));
    long n = bn - bd;  // candidate, off by at most one
    while (cmp(v, pow2(n)) < 0) --n;
    while (cmp(v, pow2(n + 1)) >= 0) ++n;
    return n;
}

long ceil_log2(const Rat& v) {
    long n = floor_log2(v);
    return cmp(v, pow2(n)) == 0 ? n : n + 1;
}

bool is_power_of_two(const Rat& v) {
    if (sgn(v) <= 0) return false;
    return cmp(v, pow2(floor_log2(v))) == 0;
}

namespace {

// Fixed-point log2 by repeated squaring of the mantissa. round_up selects
// the direction of every rounding step.
Rat log2_directed(const Rat& v, int frac_bits, bool round_up) {
    long n = floor_log2(v);
    if (cmp(v, pow2(n)) == 0) return Rat(n);
    const int K = frac_bits + 32;
    // mantissa m ~ v * 2^(K-n), in [2^K, 2^(K+1))
    Int num = v.get_num(), den = v.get_den();
    long sh = K - n;
    if (sh >= 0)
        mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(sh));
    else
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-sh));
    Int m;
    if (round_up)
        mpz_cdiv_q(m.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    else
        mpz_fdiv_q(m.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());

    Int one_K;
    mpz_mul_2exp(one_K.get_mpz_t(), Int(1).get_mpz_t(), static_cast<mp_bitcnt_t>(K));
    Int two_K = one_K * 2;

    Int bits = 0;
    for (int i = 0; i < frac_bits; ++i) {
        bits <<= 1;
        Int sq = m * m;
        if (round_up)
            mpz_cdiv_q_2exp(m.get_mpz_t(), sq.get_mpz_t(), static_cast<mp_bitcnt_t>(K));
        else
            mpz_fdiv_q_2exp(m.get_mpz_t(), sq.get_mpz_t(), static_cast<mp_bitcnt_t>(K));
        if (m >= two_K) {
            if (round_up)
                mpz_cdiv_q_2exp(m.get_mpz_t(), m.get_mpz_t(), 1);
            else
                mpz_fdiv_q_2exp(m.get_mpz_t(), m.get_mpz_t(), 1);
            bits += 1;
        }
    }
    if (round_up) bits += 1;  // one ulp of slack covers accumulated rounding
    return Rat(n) + Rat(bits) / pow2(frac_bits);
}

}  // namespace

std::pair<Rat, Rat> log2_bracket(const Rat& v, int frac_bits) {
    if (sgn(v) <= 0) throw std::invalid_argument("log2_bracket: v <= 0");
    long n = floor_log2(v);
    if (cmp(v, pow2(n)) == 0) return {Rat(n), Rat(n)};
    return {log2_directed(v, frac_bits, false), log2_directed(v, frac_bits, true)};
}

Rat log2_lower(const Rat& v, int frac_bits) {
    // canonical floor(2^fb * log2 v) / 2^fb, found by refining a bracket
    for (int guard = 64;; guard *= 2) {
        auto [lo, hi] = log2_bracket(v, frac_bits + guard);
        Rat s = pow2(frac_bits);
        Int flo, fhi;
        Rat t = lo * s;
        mpz_fdiv_q(flo.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
        t = hi * s;
        mpz_fdiv_q(fhi.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
        if (flo == fhi) return Rat(flo) / s;
        if (guard > 4096) throw std::runtime_error("log2_lower: cannot settle floor");
    }
}

Rat log2_upper(const Rat& v, int frac_bits) {
    long n = floor_log2(v);
    if (cmp(v, pow2(n)) == 0) return Rat(n);  // only exact case: log2 v irrational otherwise
    return log2_lower(v, frac_bits) + pow2(-frac_bits);
}

Int isqrt(const Int& n) {
    if (sgn(n) < 0) throw std::invalid_argument("isqrt: negative");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_squarefree(const Int& d) {
    if (d <= 0) return false;
    Int n = d;
    for (Int p = 2; p * p * p <= n + 1; ++p) {
        if (n % (p * p) == 0) return false;
        while (n % p == 0) n /= p;
    }
    // remaining n is 1, prime, or a product of two primes; a square remainder
    // must be p^2
    Int r = isqrt(n);
    if (n > 1 && r * r == n) return false;
    return true;
}

Rat parse_rational(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

std::string rational_string(const Rat& v) {
    return v.get_str();
}

}  // namespace logbad
