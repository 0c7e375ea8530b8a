#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logbad/alpha.hpp"

using namespace logbad;

namespace {

// Independent continued-fraction oracle: interval CF over 512-bit fixed-point
// brackets of alpha; emits quotients only while both endpoints agree, so every
// reported term is certain.
std::vector<Int> cf_oracle(const QuadraticReal& alpha, long max_terms) {
    const int K = 512;
    auto [slo, shi] = sqrt_bracket(alpha.d(), K);
    Rat lo_r = alpha.a() + alpha.b() * (sgn(alpha.b()) >= 0 ? slo : shi);
    Rat hi_r = alpha.a() + alpha.b() * (sgn(alpha.b()) >= 0 ? shi : slo);
    // scale to integers p/2^K
    auto scaled = [&](const Rat& v) {
        Rat t = v * pow2(K);
        Int f;
        mpz_fdiv_q(f.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
        return f;
    };
    Int nl = scaled(lo_r), nh = scaled(hi_r) + 1, dl = pow2(K).get_num(), dh = dl;
    // state: value in [nl/dl, nh/dh]
    std::vector<Int> out;
    for (long i = 0; i < max_terms; ++i) {
        if (sgn(nl) <= 0 || sgn(nh) <= 0) break;
        // a = floor(den/num) of the reciprocal
        Int al = dh / nh, ah = dl / nl;
        if (al != ah) break;  // endpoints disagree; stop with certainty intact
        out.push_back(al);
        // x -> 1/x - a: [dl/nh - a, dh/nl - a] -> numerators flip roles
        Int ndl = nh, ndh = nl;
        Int nnl = dl - al * nh, nnh = dh - al * nl;
        nl = nnl; nh = nnh; dl = ndl; dh = ndh;
    }
    return out;
}

// Brute-force ||alpha q|| via the exact surd path only.
Surd dist_oracle(const QuadraticReal& alpha, const Int& q) {
    return unit_distance(alpha, q);
}

}  // namespace

TEST_CASE("golden ratio continued fraction is all ones") {
    auto cf = cf_expand(QuadraticReal::golden(), 40);
    REQUIRE(cf.quotients.size() == 40);
    for (const auto& a : cf.quotients) CHECK(a == 1);
    CHECK(cf.period == 1);
    CHECK(cf.a_max == 1);
}

TEST_CASE("sqrt2 - 1 continued fraction is all twos") {
    auto cf = cf_expand(QuadraticReal::sqrt2_minus_1(), 30);
    for (const auto& a : cf.quotients) CHECK(a == 2);
    CHECK(cf.period == 1);
    CHECK(cf.a_max == 2);
}

TEST_CASE("(sqrt3 - 1)/2 continued fraction alternates 2,1") {
    auto cf = cf_expand(QuadraticReal::sqrt3_half(), 20);
    REQUIRE(cf.quotients.size() == 20);
    for (size_t i = 0; i < cf.quotients.size(); ++i)
        CHECK(cf.quotients[i] == (i % 2 == 0 ? 2 : 1));
    CHECK(cf.period == 2);
    CHECK(cf.a_max == 2);
}

TEST_CASE("continued fractions agree with the interval oracle") {
    for (const auto& alpha : {QuadraticReal::golden(), QuadraticReal::sqrt2_minus_1(),
                              QuadraticReal::sqrt3_half(),
                              QuadraticReal(Rat(-3), Rat(1), 11)}) {
        auto oracle = cf_oracle(alpha, 40);
        REQUIRE(oracle.size() >= 20);
        auto cf = cf_expand(alpha, static_cast<long>(oracle.size()));
        REQUIRE(cf.quotients.size() == oracle.size());
        for (size_t i = 0; i < oracle.size(); ++i) CHECK(cf.quotients[i] == oracle[i]);
    }
}

TEST_CASE("convergents: determinant identity and alpha sandwiched") {
    auto alpha = QuadraticReal::sqrt3_half();
    auto cf = cf_expand(alpha, 20);
    auto cs = convergents(cf, 20);
    REQUIRE(cs.size() == 20);
    for (size_t i = 1; i < cs.size(); ++i) {
        Int det = cs[i].p * cs[i - 1].q - cs[i - 1].p * cs[i].q;
        CHECK((det == 1 || det == -1));
        CHECK(cs[i].q > cs[i - 1].q);
        // alpha lies strictly between consecutive convergents
        int side_prev = alpha.value().cmp(Rat(cs[i - 1].p, cs[i - 1].q));
        int side_cur = alpha.value().cmp(Rat(cs[i].p, cs[i].q));
        CHECK(side_prev * side_cur == -1);
    }
}

TEST_CASE("convergent denominators are best approximations up to 10^4") {
    auto alpha = QuadraticReal::golden();
    auto cf = cf_expand(alpha, 30);
    auto cs = convergents(cf, 30);
    AlphaScanner scan(alpha);
    for (const auto& c : cs) {
        if (c.q > 10000 || c.q < 2) continue;
        Surd dn = dist_oracle(alpha, c.q);
        for (Int q = 1; q < c.q; ++q) {
            auto [lo, hi] = scan.dist_bracket(q);
            // fast reject: certified lower bound already beats ||alpha q_n||
            if (dn.cmp(lo) < 0) continue;
            CHECK(dist_oracle(alpha, q).cmp(dn) > 0);
        }
    }
}

TEST_CASE("unit_distance exact values at small q") {
    auto g = QuadraticReal::golden();
    // ||alpha * 1|| = 1 - alpha = (3 - sqrt5)/2
    CHECK(unit_distance(g, 1).cmp(Surd(Rat(3, 2), Rat(-1, 2), 5)) == 0);
    // ||alpha * 2|| = 2 alpha - 1 = sqrt5 - 2
    CHECK(unit_distance(g, 2).cmp(Surd(Rat(-2), Rat(1), 5)) == 0);
}

TEST_CASE("unit_distance lies in (0, 1/2] and scanner brackets are sound") {
    auto alpha = QuadraticReal::sqrt2_minus_1();
    AlphaScanner scan(alpha);
    for (Int q = 1; q <= 500; ++q) {
        Surd d = dist_oracle(alpha, q);
        CHECK(d.sign() > 0);
        CHECK(d.cmp(Rat(1, 2)) <= 0);
        auto [lo, hi] = scan.dist_bracket(q);
        CHECK(d.cmp(lo) >= 0);
        CHECK(d.cmp(hi) <= 0);
        CHECK(scan.nearest(q) == (Surd(alpha.a() * Rat(q), alpha.b() * Rat(q), alpha.d()) +
                                  Rat(1, 2)).floor());
    }
}

TEST_CASE("badness_delta certified values") {
    CHECK(badness_delta(QuadraticReal::golden(), 1000).delta == Rat(1, 3));
    CHECK(badness_delta(QuadraticReal::sqrt2_minus_1(), 1000).delta == Rat(1, 4));
    // tiny scan limit still yields the tail bound
    CHECK(badness_delta(QuadraticReal::golden(), 1).delta == Rat(1, 3));
    CHECK(badness_delta(QuadraticReal::sqrt3_half(), 500).delta == Rat(1, 4));
}

TEST_CASE("badness_delta is a true lower bound on q||alpha q|| up to 10^4") {
    for (const auto& alpha : {QuadraticReal::golden(), QuadraticReal::sqrt2_minus_1()}) {
        Rat delta = badness_delta(alpha, 1000).delta;
        AlphaScanner scan(alpha);
        for (Int q = 1; q <= 10000; ++q) {
            auto [lo, hi] = scan.dist_bracket(q);
            if (cmp(Rat(q) * lo, delta) >= 0) continue;  // certified already
            CHECK((dist_oracle(alpha, q) * Rat(q)).cmp(delta) >= 0);
        }
    }
}

TEST_CASE("alpha validation") {
    CHECK_THROWS(QuadraticReal(Rat(0), Rat(0), 5));       // rational
    CHECK_THROWS(QuadraticReal(Rat(1), Rat(1), 5));       // outside (0,1)
    CHECK_THROWS(QuadraticReal(Rat(-1, 2), Rat(1, 2), 4));  // not squarefree
}
