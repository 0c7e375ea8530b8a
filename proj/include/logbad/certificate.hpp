#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "logbad/bounds.hpp"
#include "logbad/survivor.hpp"

namespace logbad {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct RunConfig {
    long alpha_d = 5;
    Rat alpha_a = Rat(-1, 2);
    Rat alpha_b = Rat(1, 2);
    long epsilon_log2 = -6;
    Int q0 = 16;
    Int Q = 4096;
    RunMode mode = RunMode::Ledger;
    GreedyStrategy strategy = GreedyStrategy::Leftmost;
    int bits = 64;
    long scan_limit = 1000;
    bool paper_constants = false;
    int log_precision_bits = 30;

    QuadraticReal make_alpha() const { return QuadraticReal(alpha_a, alpha_b, alpha_d); }
    DangerParams danger_params() const;
    void validate() const;  // Q >= q0 >= 2, bits >= 16
};

struct VerifyOutcome {
    Rat min_value;          // certified lower bound on min q log2^2 q ||alpha q|| ||beta q||
    Int argmin_q;
    bool degenerate = false;  // beta interval contains some y/q
    Int degenerate_q;
};

// Independent verifier of min q log2^2 q ||alpha q|| ||beta q|| over the
// finite prefix [q0, Q]. Interval arithmetic over [beta_lo, beta_hi], exact
// ||alpha q||; derives nothing from the survivor engine.
VerifyOutcome verify_pair(const QuadraticReal& alpha, const Rat& beta_lo, const Rat& beta_hi,
                          const Int& q0, const Int& Q);

struct Certificate {
    int schema_version = kSchemaVersion;
    std::string tool_version = kToolVersion;
    RunConfig config;
    BadnessCertificate delta_cert;
    size_t trace_count = 0;
    Rat measure_initial, measure_final;
    bool trace_nonincreasing = false;
    size_t final_intervals = 0;
    std::vector<EpochReport> epochs;
    BetaWitness beta;
    Rat verified_min;
    Int verified_min_at;
    std::string content_hash;
};

Certificate build_certificate(const RunConfig& config, const SurvivorEngine& engine,
                              const BadnessCertificate& delta_cert, const BetaWitness& beta,
                              const VerifyOutcome& verdict);

nlohmann::json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);

// Hash over the canonical serialization with the hash field blanked.
std::string certificate_content_hash(const Certificate& cert);

void write_trace_csv(std::ostream& os, const std::vector<StepRecord>& trace);

}  // namespace logbad
