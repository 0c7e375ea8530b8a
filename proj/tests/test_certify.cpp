#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "logbad/certificate.hpp"

using namespace logbad;

namespace {

Certificate run_flagship_small(const RunConfig& cfg) {
    QuadraticReal alpha = cfg.make_alpha();
    BadnessCertificate delta = badness_delta(alpha, cfg.scan_limit);
    SurvivorEngine eng(cfg.danger_params(), cfg.mode, cfg.strategy, true);
    eng.init();
    REQUIRE(eng.run_to(cfg.Q));
    BetaWitness beta = eng.extract_beta(cfg.bits);
    VerifyOutcome v = verify_pair(alpha, beta.beta_lo, beta.beta_hi, cfg.q0, cfg.Q);
    Certificate cert = build_certificate(cfg, eng, delta, beta, v);
    cert.content_hash = certificate_content_hash(cert);
    return cert;
}

RunConfig small_config() {
    RunConfig cfg;
    cfg.Q = 256;
    cfg.bits = 32;
    return cfg;
}

}  // namespace

TEST_CASE("verify_pair flags a rational beta as degenerate") {
    auto out = verify_pair(QuadraticReal::golden(), Rat(1, 2), Rat(1, 2), 2, 50);
    CHECK(out.degenerate);
    CHECK(out.degenerate_q == 2);
    CHECK(out.min_value == 0);
}

TEST_CASE("verify_pair degenerate detection inside a wide interval") {
    // [1/3 - 1/100, 1/3 + 1/100] contains 1/3: q = 3 kills it
    auto out = verify_pair(QuadraticReal::golden(), Rat(1, 3) - Rat(1, 100),
                           Rat(1, 3) + Rat(1, 100), 2, 50);
    CHECK(out.degenerate);
    CHECK(out.degenerate_q <= 3);
}

TEST_CASE("verify_pair positive case against a brute-force oracle") {
    auto alpha = QuadraticReal::golden();
    // beta = golden ratio too: q log2^2 q ||alpha q||^2 stays well above 0
    Rat beta_lo = Rat(Int("11400714819323198485"), Int(1) << 64);  // floor(alpha 2^64)/2^64
    Rat beta_hi = beta_lo + pow2(-64);
    auto out = verify_pair(alpha, beta_lo, beta_hi, 4, 400);
    CHECK(!out.degenerate);
    CHECK(sgn(out.min_value) > 0);
    // oracle: recompute at the reported argmin with exact arithmetic
    Int q = out.argmin_q;
    Rat u = beta_lo * Rat(q), v = beta_hi * Rat(q);
    Int fu;
    mpz_fdiv_q(fu.get_mpz_t(), u.get_num_mpz_t(), u.get_den_mpz_t());
    Rat du = u - Rat(fu);
    if (cmp(du, Rat(1, 2)) > 0) du = Rat(1) - du;
    Rat dv = v - Rat(fu);
    if (cmp(dv, Rat(1, 2)) > 0) dv = Rat(fu + 1) - v;
    Rat bmin = cmp(du, dv) <= 0 ? du : dv;
    Rat llo = log2_lower(Rat(q), 48);
    Surd adist = unit_distance(alpha, q);
    // the verifier uses a certified lower bound on ||alpha q||, so its value
    // sits just below the exact product but within the bracket width q*2^-160
    Rat exact_rest = Rat(q) * llo * llo * bmin;
    Surd exact_min = adist * exact_rest;
    CHECK(exact_min.cmp(out.min_value) >= 0);
    CHECK((exact_min - exact_rest * Rat(q) * pow2(-160)).cmp(out.min_value) <= 0);
}

TEST_CASE("verify_pair is monotone under interval narrowing") {
    auto alpha = QuadraticReal::sqrt2_minus_1();
    // anchor the interval at a 30-bit truncation of sqrt2 - 1: every y/q with
    // q <= 300 stays at least 1/(169*408) - 2^-30 - 2^-20 > 0 away
    auto [slo, shi] = sqrt_bracket(2, 30);
    Rat lo = slo - Rat(1);
    auto wide = verify_pair(alpha, lo, lo + pow2(-20), 2, 300);
    auto narrow = verify_pair(alpha, lo, lo + pow2(-21), 2, 300);
    REQUIRE(!wide.degenerate);
    REQUIRE(!narrow.degenerate);
    CHECK(cmp(narrow.min_value, wide.min_value) >= 0);
}

TEST_CASE("verify_pair input validation") {
    auto alpha = QuadraticReal::golden();
    CHECK_THROWS(verify_pair(alpha, Rat(1, 2), Rat(1, 4), 2, 10));  // empty interval
    CHECK_THROWS(verify_pair(alpha, Rat(1, 4), Rat(1, 2), 10, 2)); // Q < q0
    CHECK_THROWS(verify_pair(alpha, Rat(1, 4), Rat(1, 2), 1, 10)); // q0 < 2
}

TEST_CASE("certificate JSON round-trip preserves every field") {
    Certificate cert = run_flagship_small(small_config());
    nlohmann::json j = certificate_to_json(cert);
    Certificate back = certificate_from_json(j);
    CHECK(back.schema_version == cert.schema_version);
    CHECK(back.tool_version == cert.tool_version);
    CHECK(back.config.alpha_d == cert.config.alpha_d);
    CHECK(back.config.alpha_a == cert.config.alpha_a);
    CHECK(back.config.alpha_b == cert.config.alpha_b);
    CHECK(back.config.epsilon_log2 == cert.config.epsilon_log2);
    CHECK(back.config.q0 == cert.config.q0);
    CHECK(back.config.Q == cert.config.Q);
    CHECK(back.config.bits == cert.config.bits);
    CHECK(back.delta_cert.delta == cert.delta_cert.delta);
    CHECK(back.measure_initial == cert.measure_initial);
    CHECK(back.measure_final == cert.measure_final);
    CHECK(back.trace_nonincreasing == cert.trace_nonincreasing);
    CHECK(back.beta.beta_lo == cert.beta.beta_lo);
    CHECK(back.beta.beta_hi == cert.beta.beta_hi);
    CHECK(back.beta.bits == cert.beta.bits);
    CHECK(back.verified_min == cert.verified_min);
    CHECK(back.verified_min_at == cert.verified_min_at);
    CHECK(back.content_hash == cert.content_hash);
    // serialization itself is deterministic
    CHECK(certificate_to_json(back).dump() == j.dump());
}

TEST_CASE("content hash is stable and tamper-sensitive") {
    Certificate cert = run_flagship_small(small_config());
    std::string h1 = certificate_content_hash(cert);
    CHECK(h1 == certificate_content_hash(cert));
    CHECK(h1.size() == 64);
    CHECK(h1 == cert.content_hash);
    Certificate mutated = cert;
    mutated.verified_min += pow2(-80);
    CHECK(certificate_content_hash(mutated) != h1);
    Certificate mutated2 = cert;
    mutated2.beta.beta_lo -= pow2(-70);
    CHECK(certificate_content_hash(mutated2) != h1);
    // the hash field itself does not feed the hash
    Certificate rehashed = cert;
    rehashed.content_hash = "0000";
    CHECK(certificate_content_hash(rehashed) == h1);
}

TEST_CASE("construction and verifier agree end to end") {
    RunConfig cfg = small_config();
    Certificate cert = run_flagship_small(cfg);
    CHECK(cert.trace_nonincreasing);
    CHECK(cmp(cert.measure_final, Rat(0)) > 0);
    CHECK(cmp(cert.verified_min, pow2(cfg.epsilon_log2) * (Rat(1) - pow2(-16))) >= 0);
    // identical reruns give byte-identical certificates
    Certificate again = run_flagship_small(cfg);
    CHECK(certificate_to_json(cert).dump() == certificate_to_json(again).dump());
}

TEST_CASE("trace CSV format") {
    std::vector<StepRecord> trace{{Int(16), 13, Rat(1, 256), Rat(255, 256), 2},
                                  {Int(17), 13, Rat(0), Rat(255, 256), 2}};
    std::ostringstream os;
    write_trace_csv(os, trace);
    CHECK(os.str() ==
          "x,measure_num,measure_den,intervals_in_B\n"
          "16,255,256,2\n"
          "17,255,256,2\n");
}

TEST_CASE("run config validation") {
    RunConfig cfg;
    cfg.q0 = 1;
    CHECK_THROWS(cfg.validate());
    cfg = RunConfig();
    cfg.Q = 8;
    cfg.q0 = 16;
    CHECK_THROWS(cfg.validate());
    cfg = RunConfig();
    cfg.bits = 8;
    CHECK_THROWS(cfg.validate());
    CHECK_NOTHROW(RunConfig().validate());
}
