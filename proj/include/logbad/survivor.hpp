#pragma once

#include <functional>
#include <optional>

#include "logbad/danger.hpp"

namespace logbad {

enum class RunMode { Ledger, Greedy };
enum class GreedyStrategy { Leftmost, MaxMargin };

struct StepRecord {
    Int x;
    int level = 0;             // l_x of this step
    Rat removed;               // measure taken out of B at this step
    Rat measure_after;
    size_t intervals_after = 0;
};

struct EpochReport {
    Int q1, q2, q3;            // q2 = q1^3, q3 = q2^3
    Rat measure_q1, measure_q2, measure_q3;
    std::optional<Rat> ratio_21;  // mes B_q2 / mes B_q1, when q2 was reached
    std::optional<Rat> ratio_32;
    bool certified = false;       // every available ratio >= 1/2
};

struct BetaWitness {
    std::vector<DyadicInterval> chain;  // nested, coarse to fine
    Rat beta_lo, beta_hi;               // beta_hi - beta_lo = 2^-bits
    int bits = 0;
    bool unconstrained_tail = false;    // bits exceed what the run pinned down
};

// Largest power of two eps with 2^14 * eps * (log2 3 + log2(1/delta)) <= 1/2,
// evaluated with an upper dyadic bound on the log terms. Returns log2(eps).
long choose_epsilon(const Rat& delta);

// Smallest q with q > 4*log2^2(q)/eps (upper dyadic log bound); the returned
// value is re-verified against q^3 > 2^(l+1), l = floor(log2(q^2 log2^2 q/eps)).
Int choose_q0(long epsilon_log2);

class SurvivorEngine {
public:
    SurvivorEngine(DangerParams params, RunMode mode,
                   GreedyStrategy strategy = GreedyStrategy::Leftmost,
                   bool instrument = false);

    // B = [0,1] \ A(q0). Throws if B is empty (epsilon too large for q0).
    void init();

    // Process x_current + 1. Returns false on extinction (reported, not thrown).
    bool step();

    // Run through x = Q. Returns false if extinct before Q.
    bool run_to(const Int& Q);

    bool extinct() const { return extinct_; }
    const Int& extinct_at() const { return extinct_at_; }
    const Int& x_current() const { return x_current_; }
    const RunLedger& survivors() const { return b_; }
    DyadicUnion survivors_union() const { return b_.to_union(); }
    const Rat& measure() const { return measure_; }
    const std::vector<StepRecord>& trace() const { return trace_; }
    int max_cover_level() const { return max_level_; }
    RunMode mode() const { return mode_; }
    const DangerParams& params() const { return params_.params(); }

    std::optional<Rat> measure_at(const Int& x) const;

    EpochReport ladder_check(const Int& q1) const;

    BetaWitness extract_beta(int bits) const;

    const std::optional<DyadicInterval>& greedy_interval() const { return greedy_; }

private:
    bool apply(const Int& x);
    bool greedy_apply(const Int& x);

    DangerBuilder params_;
    RunMode mode_;
    GreedyStrategy strategy_;
    bool instrument_;
    bool initialized_ = false;
    bool extinct_ = false;
    Int extinct_at_;
    Int x_current_;
    RunLedger b_;
    Rat measure_;
    int max_level_ = 0;
    std::vector<StepRecord> trace_;
    std::optional<DyadicInterval> greedy_;
    std::vector<DyadicInterval> chain_;
};

}  // namespace logbad
