#include "logbad/danger.hpp"

#include <stdexcept>

namespace logbad {

void DangerParams::validate() const {
    if (epsilon_log2 >= 0) throw std::invalid_argument("epsilon must be a power of two in (0,1)");
    if (q0 < 2) throw std::invalid_argument("q0 must be >= 2");
    if (log_precision_bits < 8) throw std::invalid_argument("log_precision_bits too small");
}

DangerBuilder::DangerBuilder(const DangerParams& params)
    : params_(params), scanner_(params.alpha) {
    params_.validate();
}

Rat DangerBuilder::dist_lower(const Int& x) const {
    const int prec = params_.log_precision_bits;
    auto [lo, hi] = scanner_.dist_bracket(x);
    if (sgn(lo) > 0) {
        long e_lo = floor_log2(lo), e_hi = floor_log2(hi);
        if (e_lo == e_hi) {
            Rat s = pow2(prec - e_lo);
            Int f_lo, f_hi;
            Rat t = lo * s;
            mpz_fdiv_q(f_lo.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
            t = hi * s;
            mpz_fdiv_q(f_hi.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
            if (f_lo == f_hi) return Rat(f_lo) / s;
        }
    }
    return scanner_.exact_dist(x).dyadic_lower(prec);
}

Rat DangerBuilder::log_sq_lower(const Int& x) const {
    Rat lam = log2_lower(Rat(x), params_.log_precision_bits);
    return lam * lam;
}

Rat DangerBuilder::radius(const Int& x) const {
    if (x < 2) throw std::invalid_argument("radius: x must be >= 2");
    return params_.epsilon() / (dist_lower(x) * Rat(x) * Rat(x) * log_sq_lower(x));
}

int DangerBuilder::level(const Int& x) const {
    if (x == 0) return 0;  // l_0 = 0 by definition
    if (x < 2) throw std::invalid_argument("level: x must be 0 or >= 2");
    Rat arg = dist_lower(x) * Rat(x) * Rat(x) * log_sq_lower(x) / (Rat(2) * params_.epsilon());
    long l = floor_log2(arg);
    return l < 0 ? 0 : static_cast<int>(l);
}

CoverRuns DangerBuilder::cover_for_range(const Int& x, const Rat& r, int l,
                                         const Int& y_first, const Int& y_last) const {
    CoverRuns cover;
    cover.level = l;
    if (y_first > y_last) return cover;
    const Int& rn = r.get_num();
    const Int& rd = r.get_den();
    Int den = x * rd;
    Int step;  // rd << l, the per-y increment of the shifted base
    mpz_mul_2exp(step.get_mpz_t(), rd.get_mpz_t(), static_cast<mp_bitcnt_t>(l));
    Int radius_shifted;  // (x * rn) << l
    {
        Int c = x * rn;
        mpz_mul_2exp(radius_shifted.get_mpz_t(), c.get_mpz_t(), static_cast<mp_bitcnt_t>(l));
    }
    Int base = y_first * step;  // (y * rd) << l
    Int max_a;
    mpz_mul_2exp(max_a.get_mpz_t(), Int(1).get_mpz_t(), static_cast<mp_bitcnt_t>(l));
    max_a -= 1;

    Int cs, ce;  // current run [cs, ce)
    bool open = false;
    Int a_lo, a_hi, num, rem;
    for (Int y = y_first; y <= y_last; ++y, base += step) {
        num = base - radius_shifted;
        mpz_fdiv_q(a_lo.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        num = base + radius_shifted;
        mpz_fdiv_qr(a_hi.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (sgn(rem) == 0) a_hi -= 1;  // right endpoint on the grid: block a_hi-1 covers it
        if (a_hi < a_lo) a_hi = a_lo;
        if (a_lo < 0) a_lo = 0;
        if (a_hi > max_a) a_hi = max_a;
        if (a_lo > max_a || a_hi < 0) continue;
        if (open && a_lo <= ce) {
            if (a_hi + 1 > ce) ce = a_hi + 1;
        } else {
            if (open) cover.runs.emplace_back(cs, ce);
            cs = a_lo;
            ce = a_hi + 1;
            open = true;
        }
    }
    if (open) cover.runs.emplace_back(cs, ce);
    return cover;
}

DangerSet DangerBuilder::build(const Int& x, bool keep_segments) const {
    if (x < params_.q0) throw std::invalid_argument("danger build: x < q0");
    DangerSet ds;
    ds.x = x;
    ds.radius = radius(x);
    ds.level = level(x);
    ds.cover = cover_for_range(x, ds.radius, ds.level, Int(0), x);
    if (keep_segments) {
        for (Int y = 0; y <= x; ++y) {
            Rat c = Rat(y) / Rat(x);
            Rat lo = c - ds.radius, hi = c + ds.radius;
            if (lo < 0) lo = 0;
            if (hi > 1) hi = 1;
            ds.segments.push_back(RatInterval{lo, hi});
        }
    }
    // components of the complement at level l_x
    Int grid;
    mpz_mul_2exp(grid.get_mpz_t(), Int(1).get_mpz_t(), static_cast<mp_bitcnt_t>(ds.level));
    Int gaps = 0;
    const auto& runs = ds.cover.runs;
    if (runs.empty()) {
        gaps = 1;
    } else {
        if (runs.front().first > 0) ++gaps;
        for (size_t i = 1; i < runs.size(); ++i)
            if (runs[i].first > runs[i - 1].second) ++gaps;
        if (runs.back().second < grid) ++gaps;
    }
    ds.complement_count = gaps;
    return ds;
}

CoverRuns DangerBuilder::cover_in(const Int& x, const RatInterval& window) const {
    Rat r = radius(x);
    int l = level(x);
    // select y whose covering cells can reach the window: the cover rounds
    // each segment outward to level-l cells, so widen by one cell as well
    Rat slack = r + pow2(-l);
    Rat ylo = (window.lo - slack) * Rat(x);
    Rat yhi = (window.hi + slack) * Rat(x);
    Int y_first, y_last;
    mpz_cdiv_q(y_first.get_mpz_t(), ylo.get_num_mpz_t(), ylo.get_den_mpz_t());
    mpz_fdiv_q(y_last.get_mpz_t(), yhi.get_num_mpz_t(), yhi.get_den_mpz_t());
    if (y_first < 0) y_first = 0;
    if (y_last > x) y_last = x;
    return cover_for_range(x, r, l, y_first, y_last);
}

}  // namespace logbad
