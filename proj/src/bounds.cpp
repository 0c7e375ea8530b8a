#include "logbad/bounds.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace logbad {

namespace {

Int pow2_int(long e) {
    Int r;
    mpz_mul_2exp(r.get_mpz_t(), Int(1).get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return r;
}

long bitlen(const Int& v) { return static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)); }

// the unique mu >= 1 with 2^(-mu-1) < ||alpha x|| <= 2^-mu
long mu_of(const AlphaScanner& scan, const Int& x) {
    Int dlo, dhi;
    scan.dist_bracket_scaled(x, dlo, dhi);
    const int K = scan.frac_bits();
    if (sgn(dlo) > 0) {
        for (long mu = K - bitlen(dhi); mu <= K - bitlen(dlo) + 1; ++mu) {
            if (mu < 1) continue;
            if (dlo > pow2_int(K - mu - 1) && dhi <= pow2_int(K - mu)) return mu;
        }
    }
    // exact fallback
    Surd d = scan.exact_dist(x);
    long mu = 1;
    while (d.cmp(pow2(-mu - 1)) <= 0) ++mu;
    if (d.cmp(pow2(-mu)) > 0) throw std::logic_error("mu_of: bucket mismatch");
    return mu;
}

// certified comparison ||alpha x|| <= 2^-mu
bool dist_le(const AlphaScanner& scan, const Int& x, long mu) {
    Int dlo, dhi;
    scan.dist_bracket_scaled(x, dlo, dhi);
    const int K = scan.frac_bits();
    Int thr = pow2_int(K - mu);
    if (dhi <= thr) return true;
    if (dlo > thr) return false;
    return scan.exact_dist(x).cmp(pow2(-mu)) <= 0;
}

}  // namespace

SumBoundReport sigma(const QuadraticReal& alpha, const Int& q, const Int& Q) {
    if (q < 2 || Q < q) throw std::invalid_argument("sigma: need 2 <= q <= Q");
    SumBoundReport rep;
    rep.q = q;
    rep.Q = Q;
    AlphaScanner scan(alpha);
    const int K = scan.frac_bits();
    const int FB = 48;  // log2 bracket fractional bits
    const int S = 80;   // accumulator scale
    Int sum_lo = 0, sum_hi = 0;
    Int num = pow2_int(S + K + 2 * FB);
    Int dlo, dhi, t;
    for (Int x = q; x < Q; ++x) {
        scan.dist_bracket_scaled(x, dlo, dhi);
        if (sgn(dlo) <= 0) {
            Surd d = scan.exact_dist(x);
            Rat t2 = d.dyadic_lower(100) * pow2(K);
            mpz_fdiv_q(dlo.get_mpz_t(), t2.get_num_mpz_t(), t2.get_den_mpz_t());
            t2 = d.dyadic_upper(100) * pow2(K);
            mpz_cdiv_q(dhi.get_mpz_t(), t2.get_num_mpz_t(), t2.get_den_mpz_t());
        }
        auto [llo, lhi] = log2_bracket(Rat(x), FB);
        Rat sl = llo * pow2(FB), sh = lhi * pow2(FB);
        Int il = sl.get_num();
        Int ih = sh.get_num();
        Int l2lo = il * il, l2hi = ih * ih;  // scale 2^-2FB
        // term = 1/(dist * x * log2^2 x)
        Int den_hi = dlo * x * l2lo;
        Int den_lo = dhi * x * l2hi;
        mpz_cdiv_q(t.get_mpz_t(), num.get_mpz_t(), den_hi.get_mpz_t());
        sum_hi += t;
        mpz_fdiv_q(t.get_mpz_t(), num.get_mpz_t(), den_lo.get_mpz_t());
        sum_lo += t;
    }
    rep.sigma_lo = Rat(sum_lo) * pow2(-S);
    rep.sigma_hi = Rat(sum_hi) * pow2(-S);
    return rep;
}

Rat sigma_bound(const Rat& delta, const Int& q, const Int& Q) {
    if (Q <= q || q < 2) throw std::invalid_argument("sigma_bound: need Q > q >= 2");
    if (sgn(delta) <= 0 || cmp(delta, Rat(1)) >= 0)
        throw std::invalid_argument("sigma_bound: need 0 < delta < 1");
    const int FB = 40;
    Rat lQ_up = log2_upper(Rat(Q), FB);
    Rat lq_lo = log2_lower(Rat(q), FB);
    Rat ratio_up = lQ_up / lq_lo;
    Rat term = log2_upper(ratio_up, FB) + log2_upper(Rat(1) / delta, FB);
    return Rat(256) / delta * term;
}

SumBoundReport sigma_report(const QuadraticReal& alpha, const Rat& delta,
                            const Int& q, const Int& Q) {
    SumBoundReport rep = sigma(alpha, q, Q);
    rep.bound = sigma_bound(delta, q, Q);
    rep.ratio = rep.sigma_hi / rep.bound;
    rep.ok = cmp(rep.sigma_hi, rep.bound) <= 0;
    return rep;
}

Int count_A(const AlphaScanner& scan, long mu, long nu) {
    if (mu < 1 || nu < 0) throw std::invalid_argument("count_A: mu >= 1, nu >= 0");
    Int n = 0;
    for (Int x = pow2_int(nu); x < pow2_int(nu + 1); ++x)
        if (mu_of(scan, x) == mu) ++n;
    return n;
}

Int count_I(const AlphaScanner& scan, long mu, long nu) {
    if (mu < 1 || nu < 0) throw std::invalid_argument("count_I: mu >= 1, nu >= 0");
    Int n = 0;
    for (Int x = 1; x < pow2_int(nu + 1); ++x)
        if (dist_le(scan, x, mu)) ++n;
    return n;
}

CountReport count_report(const AlphaScanner& scan, const Rat& delta, long mu, long nu) {
    CountReport rep;
    rep.mu = mu;
    rep.nu = nu;
    rep.card_A = count_A(scan, mu, nu);
    rep.count_I = count_I(scan, mu, nu);
    rep.bound = pow2(nu - mu + 4) / delta;
    rep.ok = rep.card_A <= rep.count_I && cmp(Rat(rep.count_I), rep.bound) <= 0;
    return rep;
}

std::vector<CountReport> count_reports_for_nu(const AlphaScanner& scan, const Rat& delta,
                                              long nu, long mu_limit) {
    // one scan of x < 2^(nu+1), bucketed by mu
    std::map<long, Int> hist_all, hist_band;
    Int lo_band = pow2_int(nu);
    for (Int x = 1; x < pow2_int(nu + 1); ++x) {
        long mu = mu_of(scan, x);
        ++hist_all[mu];
        if (x >= lo_band) ++hist_band[mu];
    }
    std::vector<CountReport> out;
    for (long mu = 1; mu <= mu_limit; ++mu) {
        CountReport rep;
        rep.mu = mu;
        rep.nu = nu;
        auto itb = hist_band.find(mu);
        rep.card_A = itb == hist_band.end() ? Int(0) : itb->second;
        Int ci = 0;
        for (const auto& [m, c] : hist_all)
            if (m >= mu) ci += c;
        rep.count_I = ci;
        rep.bound = pow2(nu - mu + 4) / delta;
        rep.ok = rep.card_A <= rep.count_I && cmp(Rat(rep.count_I), rep.bound) <= 0;
        out.push_back(rep);
    }
    return out;
}

namespace {

Int cross(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const LatticePoint& p, const LatticePoint& q) {
        return p.x < q.x || (p.x == q.x && p.y < q.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const LatticePoint& p, const LatticePoint& q) {
                              return p.x == q.x && p.y == q.y;
                          }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<LatticePoint> h(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

Rat polygon_area(const std::vector<LatticePoint>& h) {
    if (h.size() < 3) return Rat(0);
    Int twice = 0;
    for (size_t i = 0; i < h.size(); ++i) {
        const auto& p = h[i];
        const auto& q = h[(i + 1) % h.size()];
        twice += p.x * q.y - q.x * p.y;
    }
    return Rat(abs(twice)) / 2;
}

}  // namespace

LatticeRegion pick_check(const AlphaScanner& scan, const Rat& delta, long mu, long nu) {
    if (mu < 1 || nu < 0) throw std::invalid_argument("pick_check: mu >= 1, nu >= 0");
    LatticeRegion reg;
    reg.mu = mu;
    reg.nu = nu;
    reg.points.push_back({Int(0), Int(0)});
    for (Int x = 1; x < pow2_int(nu + 1); ++x) {
        if (dist_le(scan, x, mu)) reg.points.push_back({x, scan.nearest(x)});
    }
    reg.count_I = static_cast<long>(reg.points.size()) - 1;
    reg.hull = convex_hull(reg.points);
    reg.hull_area = polygon_area(reg.hull);
    reg.omega_area = pow2(nu + 2 - mu);
    Int primitive = 0;
    for (const auto& p : reg.points) {
        Int g;
        mpz_gcd(g.get_mpz_t(), p.x.get_mpz_t(), p.y.get_mpz_t());
        if (g == 1) ++primitive;
    }
    reg.unique_primitive_case = (primitive <= 1) || sgn(reg.hull_area) == 0;
    reg.count_bound = pow2(nu - mu + 4) / delta;
    reg.count_ok = cmp(Rat(reg.count_I), reg.count_bound) <= 0;
    if (sgn(reg.hull_area) > 0)
        reg.pick_ratio = Rat(static_cast<long>(reg.points.size())) / reg.hull_area;
    return reg;
}

PartitionReport partition_check(const AlphaScanner& scan, const Rat& delta, long nu) {
    PartitionReport rep;
    rep.nu = nu;
    rep.mu_limit = nu + 1 + ceil_log2(Rat(1) / delta);
    rep.total = 0;
    bool ok = true;
    for (Int x = pow2_int(nu); x < pow2_int(nu + 1); ++x) {
        long mu = mu_of(scan, x);
        if (mu < 1 || mu > rep.mu_limit) ok = false;
        ++rep.total;
    }
    rep.disjoint_union_ok = ok && rep.total == pow2_int(nu);
    return rep;
}

}  // namespace logbad
