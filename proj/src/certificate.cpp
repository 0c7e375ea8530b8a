#include "logbad/certificate.hpp"

#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "sha256.hpp"

namespace logbad {

using nlohmann::json;

DangerParams RunConfig::danger_params() const {
    DangerParams p{make_alpha(), epsilon_log2, q0.get_si(), log_precision_bits};
    return p;
}

void RunConfig::validate() const {
    if (q0 < 2 || Q < q0) throw std::invalid_argument("config: need Q >= q0 >= 2");
    if (bits < 16) throw std::invalid_argument("config: bits must be >= 16");
    if (epsilon_log2 >= 0) throw std::invalid_argument("config: epsilon must be < 1");
}

namespace {

struct RangeMin {
    Rat min_value;
    Int argmin;
    bool degenerate = false;
    Int degenerate_q;
    bool any = false;
};

RangeMin verify_range(const AlphaScanner& scan, const Rat& beta_lo, const Rat& beta_hi,
                      Int q, const Int& q_end, long stride) {
    RangeMin acc;
    const int K = scan.frac_bits();
    for (; q <= q_end; q += stride) {
        // ||beta q|| minimum over the closed interval [beta_lo q, beta_hi q]
        Rat u = beta_lo * Rat(q);
        Rat v = beta_hi * Rat(q);
        Int fu, cv;
        mpz_fdiv_q(fu.get_mpz_t(), u.get_num_mpz_t(), u.get_den_mpz_t());
        mpz_cdiv_q(cv.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
        if (cv - fu >= 2 || cmp(u, Rat(fu)) == 0 || cmp(v, Rat(cv)) == 0) {
            // an integer lies in [u, v]: some y/q is inside the beta interval
            if (!acc.degenerate) {
                acc.degenerate = true;
                acc.degenerate_q = q;
            }
            continue;
        }
        Rat du = u - Rat(fu);
        if (cmp(du, Rat(1, 2)) > 0) du = Rat(1) - du;
        Rat dv = v - Rat(fu);
        if (cmp(dv, Rat(1, 2)) > 0) dv = Rat(fu + 1) - v;
        Rat bmin = cmp(du, dv) <= 0 ? du : dv;

        // certified lower bound on ||alpha q||
        Rat alo = scan.dist_bracket(q).first;
        if (sgn(alo) <= 0) alo = scan.exact_dist(q).dyadic_lower(96);
        (void)K;

        Rat llo = log2_lower(Rat(q), 48);
        Rat value = Rat(q) * llo * llo * alo * bmin;
        if (!acc.any || cmp(value, acc.min_value) < 0 ||
            (cmp(value, acc.min_value) == 0 && q < acc.argmin)) {
            acc.any = true;
            acc.min_value = value;
            acc.argmin = q;
        }
    }
    return acc;
}

}  // namespace

VerifyOutcome verify_pair(const QuadraticReal& alpha, const Rat& beta_lo, const Rat& beta_hi,
                          const Int& q0, const Int& Q) {
    if (q0 < 2 || Q < q0) throw std::invalid_argument("verify_pair: need Q >= q0 >= 2");
    if (cmp(beta_lo, beta_hi) > 0) throw std::invalid_argument("verify_pair: empty beta interval");
    AlphaScanner scan(alpha);

    long threads = 1;
    if (const char* env = std::getenv("LOGBAD_THREADS")) {
        threads = std::max(1L, std::atol(env));
    }
    std::vector<RangeMin> parts(static_cast<size_t>(threads));
    if (threads == 1) {
        parts[0] = verify_range(scan, beta_lo, beta_hi, q0, Q, 1);
    } else {
        std::vector<std::thread> pool;
        for (long t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                parts[static_cast<size_t>(t)] =
                    verify_range(scan, beta_lo, beta_hi, Int(q0 + t), Q, threads);
            });
        }
        for (auto& th : pool) th.join();
    }
    VerifyOutcome out;
    bool any = false;
    for (const auto& p : parts) {
        if (p.degenerate && (!out.degenerate || p.degenerate_q < out.degenerate_q)) {
            out.degenerate = true;
            out.degenerate_q = p.degenerate_q;
        }
        if (p.any && (!any || cmp(p.min_value, out.min_value) < 0 ||
                      (cmp(p.min_value, out.min_value) == 0 && p.argmin < out.argmin_q))) {
            any = true;
            out.min_value = p.min_value;
            out.argmin_q = p.argmin;
        }
    }
    if (out.degenerate) {
        out.min_value = 0;
        out.argmin_q = out.degenerate_q;
    }
    return out;
}

namespace {

json rat_json(const Rat& v) { return v.get_str(); }
Rat rat_from(const json& j) { return parse_rational(j.get<std::string>()); }

json dyadic_json(const DyadicInterval& b) {
    return json{{"a", b.a.get_str()}, {"l", b.l}};
}

DyadicInterval dyadic_from(const json& j) {
    DyadicInterval b;
    b.a = Int(j.at("a").get<std::string>());
    b.l = j.at("l").get<int>();
    return b;
}

json epoch_json(const EpochReport& e) {
    json j{{"q1", e.q1.get_str()}, {"q2", e.q2.get_str()}, {"q3", e.q3.get_str()},
           {"measure_q1", rat_json(e.measure_q1)}, {"certified", e.certified}};
    if (e.ratio_21) {
        j["measure_q2"] = rat_json(e.measure_q2);
        j["ratio_21"] = rat_json(*e.ratio_21);
    }
    if (e.ratio_32) {
        j["measure_q3"] = rat_json(e.measure_q3);
        j["ratio_32"] = rat_json(*e.ratio_32);
    }
    return j;
}

EpochReport epoch_from(const json& j) {
    EpochReport e;
    e.q1 = Int(j.at("q1").get<std::string>());
    e.q2 = Int(j.at("q2").get<std::string>());
    e.q3 = Int(j.at("q3").get<std::string>());
    e.measure_q1 = rat_from(j.at("measure_q1"));
    e.certified = j.at("certified").get<bool>();
    if (j.contains("ratio_21")) {
        e.measure_q2 = rat_from(j.at("measure_q2"));
        e.ratio_21 = rat_from(j.at("ratio_21"));
    }
    if (j.contains("ratio_32")) {
        e.measure_q3 = rat_from(j.at("measure_q3"));
        e.ratio_32 = rat_from(j.at("ratio_32"));
    }
    return e;
}

}  // namespace

Certificate build_certificate(const RunConfig& config, const SurvivorEngine& engine,
                              const BadnessCertificate& delta_cert, const BetaWitness& beta,
                              const VerifyOutcome& verdict) {
    Certificate cert;
    cert.config = config;
    cert.delta_cert = delta_cert;
    const auto& trace = engine.trace();
    cert.trace_count = trace.size();
    if (!trace.empty()) {
        cert.measure_initial = trace.front().measure_after;
        cert.measure_final = trace.back().measure_after;
        cert.final_intervals = trace.back().intervals_after;
        cert.trace_nonincreasing = true;
        for (size_t i = 1; i < trace.size(); ++i)
            if (cmp(trace[i].measure_after, trace[i - 1].measure_after) > 0)
                cert.trace_nonincreasing = false;
    }
    cert.beta = beta;
    cert.verified_min = verdict.min_value;
    cert.verified_min_at = verdict.argmin_q;
    cert.content_hash = certificate_content_hash(cert);
    return cert;
}

json certificate_to_json(const Certificate& cert) {
    json j;
    j["schema_version"] = cert.schema_version;
    j["tool_version"] = cert.tool_version;
    const RunConfig& c = cert.config;
    j["config"] = {
        {"alpha", {{"d", c.alpha_d},
                   {"a_num", c.alpha_a.get_num().get_str()},
                   {"a_den", c.alpha_a.get_den().get_str()},
                   {"b_num", c.alpha_b.get_num().get_str()},
                   {"b_den", c.alpha_b.get_den().get_str()}}},
        {"epsilon_log2", c.epsilon_log2},
        {"q0", c.q0.get_str()},
        {"Q", c.Q.get_str()},
        {"mode", c.mode == RunMode::Ledger ? "ledger" : "greedy"},
        {"strategy", c.strategy == GreedyStrategy::Leftmost ? "leftmost" : "max-margin"},
        {"bits", c.bits},
        {"scan_limit", c.scan_limit},
        {"paper_constants", c.paper_constants},
        {"log_precision_bits", c.log_precision_bits}};
    j["delta"] = {{"delta", rat_json(cert.delta_cert.delta)},
                  {"scan_limit", cert.delta_cert.scan_limit},
                  {"tail_bound", rat_json(cert.delta_cert.tail_bound)},
                  {"a_max", cert.delta_cert.a_max.get_str()}};
    j["measure_trace"] = {{"count", cert.trace_count},
                          {"initial", rat_json(cert.measure_initial)},
                          {"final", rat_json(cert.measure_final)},
                          {"nonincreasing", cert.trace_nonincreasing},
                          {"final_intervals", cert.final_intervals}};
    j["epochs"] = json::array();
    for (const auto& e : cert.epochs) j["epochs"].push_back(epoch_json(e));
    json chain = json::array();
    for (const auto& b : cert.beta.chain) chain.push_back(dyadic_json(b));
    j["beta"] = {{"beta_lo", rat_json(cert.beta.beta_lo)},
                 {"beta_hi", rat_json(cert.beta.beta_hi)},
                 {"bits", cert.beta.bits},
                 {"unconstrained_tail", cert.beta.unconstrained_tail},
                 {"chain", chain}};
    j["verified_min"] = rat_json(cert.verified_min);
    j["verified_min_at_q"] = cert.verified_min_at.get_str();
    j["content_hash"] = cert.content_hash;
    return j;
}

Certificate certificate_from_json(const json& j) {
    Certificate cert;
    cert.schema_version = j.at("schema_version").get<int>();
    cert.tool_version = j.at("tool_version").get<std::string>();
    const json& c = j.at("config");
    const json& a = c.at("alpha");
    cert.config.alpha_d = a.at("d").get<long>();
    cert.config.alpha_a = Rat(Int(a.at("a_num").get<std::string>()),
                              Int(a.at("a_den").get<std::string>()));
    cert.config.alpha_a.canonicalize();
    cert.config.alpha_b = Rat(Int(a.at("b_num").get<std::string>()),
                              Int(a.at("b_den").get<std::string>()));
    cert.config.alpha_b.canonicalize();
    cert.config.epsilon_log2 = c.at("epsilon_log2").get<long>();
    cert.config.q0 = Int(c.at("q0").get<std::string>());
    cert.config.Q = Int(c.at("Q").get<std::string>());
    cert.config.mode = c.at("mode").get<std::string>() == "ledger" ? RunMode::Ledger
                                                                   : RunMode::Greedy;
    cert.config.strategy = c.at("strategy").get<std::string>() == "leftmost"
                               ? GreedyStrategy::Leftmost
                               : GreedyStrategy::MaxMargin;
    cert.config.bits = c.at("bits").get<int>();
    cert.config.scan_limit = c.at("scan_limit").get<long>();
    cert.config.paper_constants = c.at("paper_constants").get<bool>();
    cert.config.log_precision_bits = c.at("log_precision_bits").get<int>();
    const json& d = j.at("delta");
    cert.delta_cert.delta = rat_from(d.at("delta"));
    cert.delta_cert.scan_limit = d.at("scan_limit").get<long>();
    cert.delta_cert.tail_bound = rat_from(d.at("tail_bound"));
    cert.delta_cert.a_max = Int(d.at("a_max").get<std::string>());
    const json& t = j.at("measure_trace");
    cert.trace_count = t.at("count").get<size_t>();
    cert.measure_initial = rat_from(t.at("initial"));
    cert.measure_final = rat_from(t.at("final"));
    cert.trace_nonincreasing = t.at("nonincreasing").get<bool>();
    cert.final_intervals = t.at("final_intervals").get<size_t>();
    for (const auto& e : j.at("epochs")) cert.epochs.push_back(epoch_from(e));
    const json& b = j.at("beta");
    cert.beta.beta_lo = rat_from(b.at("beta_lo"));
    cert.beta.beta_hi = rat_from(b.at("beta_hi"));
    cert.beta.bits = b.at("bits").get<int>();
    cert.beta.unconstrained_tail = b.at("unconstrained_tail").get<bool>();
    for (const auto& bc : b.at("chain")) cert.beta.chain.push_back(dyadic_from(bc));
    cert.verified_min = rat_from(j.at("verified_min"));
    cert.verified_min_at = Int(j.at("verified_min_at_q").get<std::string>());
    cert.content_hash = j.at("content_hash").get<std::string>();
    return cert;
}

std::string certificate_content_hash(const Certificate& cert) {
    Certificate copy = cert;
    copy.content_hash = "";
    json j = certificate_to_json(copy);
    j.erase("content_hash");
    return sha256_hex(j.dump());
}

void write_trace_csv(std::ostream& os, const std::vector<StepRecord>& trace) {
    os << "x,measure_num,measure_den,intervals_in_B\n";
    for (const auto& r : trace) {
        os << r.x.get_str() << ',' << r.measure_after.get_num().get_str() << ','
           << r.measure_after.get_den().get_str() << ',' << r.intervals_after << '\n';
    }
}

}  // namespace logbad
