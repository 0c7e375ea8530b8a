#include "logbad/alpha.hpp"

#include <map>
#include <stdexcept>

namespace logbad {

QuadraticReal::QuadraticReal(Rat a, Rat b, long d) : v_(std::move(a), std::move(b), d) {
    if (v_.is_rational()) throw std::invalid_argument("QuadraticReal: b == 0 (rational input)");
    if (v_.sign() <= 0 || v_.cmp(Rat(1)) >= 0)
        throw std::invalid_argument("QuadraticReal: value must lie in (0,1)");
}

QuadraticReal QuadraticReal::golden() { return QuadraticReal(Rat(-1, 2), Rat(1, 2), 5); }
QuadraticReal QuadraticReal::sqrt2_minus_1() { return QuadraticReal(Rat(-1), Rat(1), 2); }
QuadraticReal QuadraticReal::sqrt3_half() { return QuadraticReal(Rat(-1, 2), Rat(1, 2), 3); }

namespace {

Surd inverse(const Surd& s) {
    // 1/(a + b sqrt d) = (a - b sqrt d) / (a^2 - b^2 d)
    Rat norm = s.a() * s.a() - s.b() * s.b() * s.d();
    if (sgn(norm) == 0) throw std::logic_error("Surd inverse: zero norm");
    return Surd(s.a() / norm, -s.b() / norm, s.d());
}

}  // namespace

CfExpansion cf_expand(const QuadraticReal& alpha, long n) {
    CfExpansion out;
    Surd xi = alpha.value();  // fractional part, in (0,1)
    std::map<std::pair<Rat, Rat>, long> seen;
    seen[{xi.a(), xi.b()}] = 0;
    bool period_found = false;
    for (long i = 1; i <= n; ++i) {
        Surd inv = inverse(xi);
        Int q = inv.floor();
        out.quotients.push_back(q);
        xi = inv - Rat(q);
        if (!period_found) {
            auto key = std::make_pair(xi.a(), xi.b());
            auto it = seen.find(key);
            if (it != seen.end()) {
                out.preperiod = it->second;
                out.period = i - it->second;
                period_found = true;
            } else {
                seen[key] = i;
            }
        }
    }
    long scope = period_found ? out.preperiod + out.period
                              : static_cast<long>(out.quotients.size());
    out.a_max = 0;
    for (long i = 0; i < scope && i < static_cast<long>(out.quotients.size()); ++i)
        if (out.quotients[i] > out.a_max) out.a_max = out.quotients[i];
    return out;
}

std::vector<Convergent> convergents(const CfExpansion& cf, long count) {
    std::vector<Convergent> out;
    // alpha = [0; a1, a2, ...]
    Int pm1 = 1, qm1 = 0;  // p_{-1}, q_{-1} of the full expansion [0; ...]
    Int p0 = 0, q0 = 1;    // p_0 = 0, q_0 = 1
    for (long i = 0; i < count && i < static_cast<long>(cf.quotients.size()); ++i) {
        Int p = cf.quotients[i] * p0 + pm1;
        Int q = cf.quotients[i] * q0 + qm1;
        out.push_back({p, q, i + 1});
        pm1 = p0; qm1 = q0; p0 = p; q0 = q;
    }
    return out;
}

Surd unit_distance(const QuadraticReal& alpha, const Int& q) {
    if (q < 1) throw std::invalid_argument("unit_distance: q must be >= 1");
    Surd v = alpha.value() * Rat(q);
    Int n = v.floor();
    Surd frac = v - Rat(n);
    if (frac.cmp(Rat(1, 2)) < 0) return frac;
    return Rat(1) - frac;
}

BadnessCertificate badness_delta(const QuadraticReal& alpha, long scan_limit) {
    if (scan_limit < 1) throw std::invalid_argument("badness_delta: scan limit < 1");
    long terms = 64;
    CfExpansion cf = cf_expand(alpha, terms);
    while (cf.period == 0 && terms < (1 << 12)) {
        terms *= 2;
        cf = cf_expand(alpha, terms);
    }
    if (cf.period == 0) throw std::runtime_error("badness_delta: period not found");
    Rat tail = Rat(1) / Rat(cf.a_max + 2);

    AlphaScanner scan(alpha);
    Rat scan_min;  // lower bound on min q*||alpha q||
    bool first = true;
    for (Int q = 1; q <= scan_limit; ++q) {
        auto [lo, hi] = scan.dist_bracket(q);
        if (sgn(lo) <= 0) {
            Surd d = scan.exact_dist(q);
            lo = d.dyadic_lower(96);
        }
        Rat v = Rat(q) * lo;
        if (first || cmp(v, scan_min) < 0) {
            scan_min = v;
            first = false;
        }
    }
    BadnessCertificate cert;
    cert.delta = cmp(tail, scan_min) <= 0 ? tail : scan_min;
    cert.scan_limit = scan_limit;
    cert.tail_bound = tail;
    cert.a_max = cf.a_max;
    return cert;
}

AlphaScanner::AlphaScanner(const QuadraticReal& alpha, int frac_bits)
    : alpha_(alpha), k_(frac_bits) {
    mant_ = (alpha.value() * pow2(k_)).floor();
}

void AlphaScanner::dist_bracket_scaled(const Int& x, Int& lo, Int& hi) const {
    Int F = x * mant_;  // alpha*x*2^K is in [F, F+x]
    Int f;
    mpz_fdiv_r_2exp(f.get_mpz_t(), F.get_mpz_t(), static_cast<mp_bitcnt_t>(k_));
    Int one_K;
    mpz_mul_2exp(one_K.get_mpz_t(), Int(1).get_mpz_t(), static_cast<mp_bitcnt_t>(k_));
    Int half = one_K / 2;
    Int g = f + x;
    if (g >= one_K) {  // interval straddles an integer
        lo = 0;
        hi = half;
        return;
    }
    Int d1 = f <= half ? f : Int(one_K - f);
    Int d2 = g <= half ? g : Int(one_K - g);
    lo = d1 < d2 ? d1 : d2;
    hi = (f <= half && g >= half) ? half : (d1 > d2 ? d1 : d2);
}

std::pair<Rat, Rat> AlphaScanner::dist_bracket(const Int& x) const {
    Int lo, hi;
    dist_bracket_scaled(x, lo, hi);
    Rat s = pow2(-k_);
    return {Rat(lo) * s, Rat(hi) * s};
}

Int AlphaScanner::nearest(const Int& x) const {
    Int F = x * mant_;
    Int half;
    mpz_mul_2exp(half.get_mpz_t(), Int(1).get_mpz_t(), static_cast<mp_bitcnt_t>(k_ - 1));
    Int n1, n2;
    mpz_fdiv_q_2exp(n1.get_mpz_t(), Int(F + half).get_mpz_t(), static_cast<mp_bitcnt_t>(k_));
    mpz_fdiv_q_2exp(n2.get_mpz_t(), Int(F + x + half).get_mpz_t(), static_cast<mp_bitcnt_t>(k_));
    if (n1 == n2) return n1;
    // exact fallback
    Surd v = alpha_.value() * Rat(x);
    Int n = v.floor();
    Surd frac = v - Rat(n);
    return frac.cmp(Rat(1, 2)) < 0 ? n : Int(n + 1);
}

}  // namespace logbad
