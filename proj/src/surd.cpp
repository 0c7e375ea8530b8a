#include "logbad/surd.hpp"

#include <cmath>
#include <stdexcept>

namespace logbad {

std::pair<Rat, Rat> sqrt_bracket(long d, int frac_bits) {
    Int n(d);
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * frac_bits));
    Int s = isqrt(n);
    Rat scale = pow2(-frac_bits);
    return {Rat(s) * scale, Rat(s + 1) * scale};
}

Surd::Surd(Rat a, Rat b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (sgn(b_) != 0) {
        if (d_ < 2) throw std::invalid_argument("Surd: d must be >= 2");
        if (!is_squarefree(Int(d_))) throw std::invalid_argument("Surd: d not squarefree");
    }
}

int Surd::sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 against b^2 d
    Rat a2 = a_ * a_, b2d = b_ * b_ * d_;
    int c = ::cmp(a2, b2d);
    if (c == 0) throw std::logic_error("Surd: a^2 == b^2 d with b != 0 (d not squarefree?)");
    return c > 0 ? sa : sb;
}

int Surd::cmp(const Surd& other) const {
    if (!is_rational() && !other.is_rational() && d_ != other.d_)
        throw std::invalid_argument("Surd::cmp: mixed radicands");
    long d = is_rational() ? other.d_ : d_;
    return Surd(a_ - other.a_, b_ - other.b_, d).sign();
}

int Surd::cmp(const Rat& r) const {
    return Surd(a_ - r, b_, d_).sign();
}

std::pair<Rat, Rat> Surd::bracket(int abs_bits) const {
    if (is_rational()) return {a_, a_};
    // |b| * (width of sqrt bracket) <= 2^-abs_bits
    long bmag = floor_log2(Rat(abs(b_.get_num())) / Rat(b_.get_den()));
    int k = abs_bits + static_cast<int>(bmag) + 2;
    if (k < 8) k = 8;
    auto [slo, shi] = sqrt_bracket(d_, k);
    Rat lo, hi;
    if (sgn(b_) > 0) {
        lo = a_ + b_ * slo;
        hi = a_ + b_ * shi;
    } else {
        lo = a_ + b_ * shi;
        hi = a_ + b_ * slo;
    }
    return {lo, hi};
}

Int Surd::floor() const {
    if (is_rational()) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a_.get_num_mpz_t(), a_.get_den_mpz_t());
        return q;
    }
    for (int bits = 16; bits <= 1 << 14; bits *= 2) {
        auto [lo, hi] = bracket(bits);
        Int flo, fhi;
        mpz_fdiv_q(flo.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
        mpz_fdiv_q(fhi.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
        if (flo == fhi) {
            // exact verification: flo <= v < flo+1
            if (cmp(Rat(flo)) >= 0 && cmp(Rat(flo + 1)) < 0) return flo;
        }
    }
    throw std::runtime_error("Surd::floor: bracketing failed");
}

namespace {

// canonical grid: f = floor(v * 2^k), k = sig_bits - floor(log2 v)
struct DyadicRounding {
    Int f;
    long k;
};

}  // namespace

static DyadicRounding dyadic_floor_impl(const Surd& v, int sig_bits) {
    if (v.sign() <= 0) throw std::invalid_argument("dyadic rounding: value <= 0");
    Rat lo0;
    int bits = sig_bits + 8;
    for (;; bits *= 2) {
        lo0 = v.bracket(bits).first;
        if (sgn(lo0) > 0) break;
        if (bits > (1 << 14)) throw std::runtime_error("dyadic rounding: cannot bracket");
    }
    long e = floor_log2(lo0);
    while (v.cmp(pow2(e + 1)) >= 0) ++e;  // settle e = floor(log2 v) exactly
    while (v.cmp(pow2(e)) < 0) --e;
    long k = sig_bits - e;
    return {(v * pow2(k)).floor(), k};
}

Rat Surd::dyadic_lower(int sig_bits) const {
    auto [f, k] = dyadic_floor_impl(*this, sig_bits);
    return Rat(f) * pow2(-k);
}

Rat Surd::dyadic_upper(int sig_bits) const {
    auto [f, k] = dyadic_floor_impl(*this, sig_bits);
    Rat lo = Rat(f) * pow2(-k);
    if (cmp(lo) == 0) return lo;  // value lies on the grid exactly
    return Rat(f + 1) * pow2(-k);
}

double Surd::approx() const {
    return a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(d_));
}

}  // namespace logbad
