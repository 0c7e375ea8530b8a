#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "logbad/certificate.hpp"

namespace {

using namespace logbad;

constexpr int kExitCertified = 0;
constexpr int kExitFalsified = 1;
constexpr int kExitUsage = 2;

struct AlphaOpt {
    std::string preset = "golden";
    long d = 5;
    std::string a = "-1/2";
    std::string b = "1/2";
};

void add_alpha_options(CLI::App* app, AlphaOpt& opt) {
    app->add_option("--alpha", opt.preset, "alpha preset: golden | sqrt2 | sqrt3half | custom")
        ->default_val("golden");
    app->add_option("--alpha-d", opt.d, "custom alpha: squarefree d");
    app->add_option("--alpha-a", opt.a, "custom alpha: rational a (value = a + b*sqrt(d))");
    app->add_option("--alpha-b", opt.b, "custom alpha: rational b");
}

void fill_alpha(const AlphaOpt& opt, RunConfig& cfg) {
    if (opt.preset == "golden") {
        cfg.alpha_d = 5; cfg.alpha_a = Rat(-1, 2); cfg.alpha_b = Rat(1, 2);
    } else if (opt.preset == "sqrt2") {
        cfg.alpha_d = 2; cfg.alpha_a = Rat(-1); cfg.alpha_b = Rat(1);
    } else if (opt.preset == "sqrt3half") {
        cfg.alpha_d = 3; cfg.alpha_a = Rat(-1, 2); cfg.alpha_b = Rat(1, 2);
    } else if (opt.preset == "custom") {
        cfg.alpha_d = opt.d;
        cfg.alpha_a = parse_rational(opt.a);
        cfg.alpha_b = parse_rational(opt.b);
    } else {
        throw CLI::ValidationError("--alpha", "unknown preset " + opt.preset);
    }
}

int run_construct(const RunConfig& cfg_in, const std::string& cert_path,
                  const std::string& trace_path) {
    RunConfig cfg = cfg_in;
    QuadraticReal alpha = cfg.make_alpha();
    BadnessCertificate delta = badness_delta(alpha, cfg.scan_limit);
    std::cerr << "delta = " << delta.delta.get_str()
              << " (tail 1/(a_max+2), a_max = " << delta.a_max.get_str() << ")\n";

    if (cfg.paper_constants) {
        cfg.epsilon_log2 = choose_epsilon(delta.delta);
        Int q0 = choose_q0(cfg.epsilon_log2);
        std::cerr << "paper constants: epsilon = 2^" << cfg.epsilon_log2
                  << ", q0 = " << q0.get_str() << "\n";
        if (q0 > cfg.Q) {
            std::cerr << "infeasible: paper-constants q0 = " << q0.get_str()
                      << " exceeds requested Q = " << cfg.Q.get_str()
                      << "; a full ledger run at this scale is out of reach\n";
            return kExitUsage;
        }
        cfg.q0 = q0;
    }
    cfg.validate();

    SurvivorEngine engine(cfg.danger_params(),
                          cfg.mode, cfg.strategy, /*instrument=*/true);
    engine.init();
    bool alive = !engine.extinct() && engine.run_to(cfg.Q);
    if (!trace_path.empty()) {
        std::ofstream ts(trace_path);
        write_trace_csv(ts, engine.trace());
    }
    if (!alive) {
        std::cerr << "extinct: B became empty at x = " << engine.extinct_at().get_str()
                  << " (epsilon too large for this q0; no witness exists at these settings)\n";
        return kExitFalsified;
    }

    BetaWitness beta = engine.extract_beta(cfg.bits);
    VerifyOutcome verdict = verify_pair(alpha, beta.beta_lo, beta.beta_hi, cfg.q0, cfg.Q);
    Certificate cert = build_certificate(cfg, engine, delta, beta, verdict);
    if (cfg.mode == RunMode::Ledger) {
        Int q1 = cfg.q0;
        if (q1 * q1 * q1 <= cfg.Q) cert.epochs.push_back(engine.ladder_check(q1));
        cert.content_hash = certificate_content_hash(cert);
    }
    if (!cert_path.empty()) {
        std::ofstream cs(cert_path);
        cs << certificate_to_json(cert).dump(2) << "\n";
    }
    Rat eps = pow2(cfg.epsilon_log2);
    Rat threshold = eps * (Rat(1) - pow2(-16));
    std::cout << "beta_lo = " << beta.beta_lo.get_str() << "\n";
    std::cout << "verified_min = " << verdict.min_value.get_str() << " at q = "
              << verdict.argmin_q.get_str() << " (~" << verdict.min_value.get_d() << ")\n";
    if (verdict.degenerate || cmp(verdict.min_value, threshold) < 0) {
        std::cerr << "falsified: verified_min below epsilon at q = "
                  << verdict.argmin_q.get_str() << "\n";
        return kExitFalsified;
    }
    std::cout << "certified: verified_min >= epsilon*(1-2^-16) = ~" << threshold.get_d()
              << "\n";
    return kExitCertified;
}

int run_verify(const std::string& cert_path) {
    std::ifstream is(cert_path);
    if (!is) {
        std::cerr << "cannot open " << cert_path << "\n";
        return kExitUsage;
    }
    nlohmann::json j;
    is >> j;
    Certificate cert = certificate_from_json(j);
    QuadraticReal alpha = cert.config.make_alpha();
    if (cmp(cert.beta.beta_lo, cert.beta.beta_hi) > 0 || sgn(cert.beta.beta_lo) < 0 ||
        cmp(cert.beta.beta_hi, Rat(1)) > 0) {
        std::cerr << "violated: beta interval is not a subinterval of [0,1] (q = "
                  << cert.config.q0.get_str() << " onward unverifiable)\n";
        return kExitFalsified;
    }
    VerifyOutcome verdict =
        verify_pair(alpha, cert.beta.beta_lo, cert.beta.beta_hi, cert.config.q0, cert.config.Q);
    Rat eps = pow2(cert.config.epsilon_log2);
    Rat threshold = eps * (Rat(1) - pow2(-16));
    bool ok = true;
    if (verdict.degenerate) {
        std::cerr << "violated: beta interval contains a rational y/q at q = "
                  << verdict.degenerate_q.get_str() << "\n";
        ok = false;
    } else if (cmp(verdict.min_value, threshold) < 0) {
        std::cerr << "violated: product below epsilon at q = " << verdict.argmin_q.get_str()
                  << " (value " << verdict.min_value.get_str() << ")\n";
        ok = false;
    }
    if (ok && cmp(verdict.min_value, cert.verified_min) != 0) {
        std::cerr << "mismatch: recomputed verified_min " << verdict.min_value.get_str()
                  << " != stored " << cert.verified_min.get_str() << "; minimum at q = "
                  << verdict.argmin_q.get_str() << "\n";
        ok = false;
    }
    std::string hash = certificate_content_hash(cert);
    if (hash != cert.content_hash) {
        std::cerr << "content hash mismatch (certificate altered)\n";
        ok = false;
    }
    if (!ok) return kExitFalsified;
    std::cout << "verified: min = " << verdict.min_value.get_str() << " at q = "
              << verdict.argmin_q.get_str() << ", hash ok\n";
    return kExitCertified;
}

int run_bounds(const QuadraticReal& alpha, long scan_limit, long nu_max, bool run_sigma) {
    BadnessCertificate delta = badness_delta(alpha, scan_limit);
    AlphaScanner scan(alpha);
    std::cout << "delta = " << delta.delta.get_str() << "\n";
    std::cout << "nu mu card_A I bound ok\n";
    bool all_ok = true;
    for (long nu = 0; nu <= nu_max; ++nu) {
        long mu_limit = nu + 1 + ceil_log2(Rat(1) / delta.delta);
        for (const auto& rep : count_reports_for_nu(scan, delta.delta, nu, mu_limit)) {
            std::cout << rep.nu << ' ' << rep.mu << ' ' << rep.card_A.get_str() << ' '
                      << rep.count_I.get_str() << ' ' << rep.bound.get_str() << ' '
                      << (rep.ok ? "ok" : "FAIL") << "\n";
            all_ok = all_ok && rep.ok;
        }
        PartitionReport part = partition_check(scan, delta.delta, nu);
        if (!part.disjoint_union_ok) {
            std::cout << "partition FAIL at nu = " << nu << "\n";
            all_ok = false;
        }
    }
    if (run_sigma) {
        for (const auto& [q, Q] : std::vector<std::pair<long, long>>{
                 {10, 1000}, {100, 10000}, {2, 1024}}) {
            SumBoundReport rep = sigma_report(alpha, delta.delta, q, Q);
            std::cout << "sigma(" << q << "," << Q << ") <= " << rep.sigma_hi.get_d()
                      << ", bound " << rep.bound.get_d() << ", ratio " << rep.ratio.get_d()
                      << (rep.ok ? " ok" : " FAIL") << "\n";
            all_ok = all_ok && rep.ok;
        }
    }
    return all_ok ? kExitCertified : kExitFalsified;
}

int run_delta(const QuadraticReal& alpha, long scan_limit, const std::string& out) {
    BadnessCertificate cert = badness_delta(alpha, scan_limit);
    nlohmann::json j{{"delta", cert.delta.get_str()},
                     {"scan_limit", cert.scan_limit},
                     {"tail_bound", cert.tail_bound.get_str()},
                     {"a_max", cert.a_max.get_str()}};
    if (!out.empty()) {
        std::ofstream os(out);
        os << j.dump(2) << "\n";
    }
    std::cout << j.dump(2) << "\n";
    return kExitCertified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact interval-removal sieve: constructs and certifies a pair (alpha, beta) "
                 "with min (q log2^2 q)||alpha q|| ||beta q|| >= epsilon over [q0, Q]"};
    app.require_subcommand(1);

    RunConfig cfg;
    AlphaOpt alpha_opt;
    std::string cert_path = "certificate.json", trace_path;
    std::string mode = "ledger", strategy = "leftmost";

    CLI::App* construct = app.add_subcommand("construct", "run the sieve and emit a certificate");
    add_alpha_options(construct, alpha_opt);
    construct->add_option("--epsilon-log2", cfg.epsilon_log2, "epsilon = 2^this (negative)");
    construct->add_option("--q0", cfg.q0, "first removed index");
    construct->add_option("--Q", cfg.Q, "last removed index");
    construct->add_option("--bits", cfg.bits, "beta extraction precision");
    construct->add_option("--mode", mode, "ledger | greedy");
    construct->add_option("--strategy", strategy, "leftmost | max-margin (greedy mode)");
    construct->add_option("--scan-limit", cfg.scan_limit, "delta certification scan range");
    construct->add_option("--log-precision-bits", cfg.log_precision_bits,
                          "directional rounding precision");
    construct->add_flag("--paper-constants", cfg.paper_constants,
                        "derive epsilon and q0 from the delta certificate");
    construct->add_option("--out", cert_path, "certificate JSON path");
    construct->add_option("--trace", trace_path, "measure trace CSV path");

    std::string verify_path;
    CLI::App* verify = app.add_subcommand("verify", "re-check an existing certificate");
    verify->add_option("certificate", verify_path, "certificate JSON")->required();

    long nu_max = 8;
    bool with_sigma = false;
    long scan_limit = 1000;
    CLI::App* bounds = app.add_subcommand("bounds", "counting and sum-bound suites");
    add_alpha_options(bounds, alpha_opt);
    bounds->add_option("--nu-max", nu_max, "largest nu for the counting table");
    bounds->add_option("--scan-limit", scan_limit, "delta certification scan range");
    bounds->add_flag("--sigma", with_sigma, "also run the sum-bound grid");

    std::string delta_out;
    CLI::App* delta = app.add_subcommand("delta", "emit a badness certificate for alpha");
    add_alpha_options(delta, alpha_opt);
    delta->add_option("--scan-limit", scan_limit, "exhaustive scan range");
    delta->add_option("--out", delta_out, "JSON output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        fill_alpha(alpha_opt, cfg);
        cfg.mode = mode == "greedy" ? RunMode::Greedy : RunMode::Ledger;
        cfg.strategy = strategy == "max-margin" ? GreedyStrategy::MaxMargin
                                                : GreedyStrategy::Leftmost;
        if (construct->parsed()) return run_construct(cfg, cert_path, trace_path);
        if (verify->parsed()) return run_verify(verify_path);
        if (bounds->parsed())
            return run_bounds(cfg.make_alpha(), scan_limit, nu_max, with_sigma);
        if (delta->parsed()) return run_delta(cfg.make_alpha(), scan_limit, delta_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
