#include "logbad/survivor.hpp"

#include <algorithm>
#include <stdexcept>

namespace logbad {

long choose_epsilon(const Rat& delta) {
    if (sgn(delta) <= 0 || cmp(delta, Rat(1)) >= 0)
        throw std::invalid_argument("choose_epsilon: need 0 < delta < 1");
    Rat t_up = log2_upper(Rat(3), 40) + log2_upper(Rat(1) / delta, 40);
    auto fits = [&](long e) { return cmp(pow2(14 + e) * t_up, Rat(1, 2)) <= 0; };
    long e = floor_log2(pow2(-15) / t_up);
    while (!fits(e)) --e;
    while (fits(e + 1)) ++e;
    return e;
}

Int choose_q0(long epsilon_log2) {
    if (epsilon_log2 >= 0) throw std::invalid_argument("choose_q0: epsilon must be < 1");
    Rat eps = pow2(epsilon_log2);
    auto pred = [&](const Int& q) {
        Rat lu = log2_upper(Rat(q), 50);
        return cmp(Rat(q) * eps, Rat(4) * lu * lu) > 0;
    };
    Int hi = 4;
    while (!pred(hi)) hi *= 2;
    Int lo = hi / 2;
    while (lo + 1 < hi) {
        Int mid = (lo + hi) / 2;
        if (pred(mid)) hi = mid; else lo = mid;
    }
    while (hi > 4 && pred(hi - 1)) --hi;
    // direct recomputation at the returned value: q^3 > 2^(l+1)
    Rat lu = log2_upper(Rat(hi), 50);
    Rat arg = Rat(hi) * Rat(hi) * lu * lu / eps;
    long l = floor_log2(arg);
    if (cmp(Rat(hi) * Rat(hi) * Rat(hi), pow2(l + 1)) <= 0)
        throw std::logic_error("choose_q0: verification failed");
    return hi;
}

SurvivorEngine::SurvivorEngine(DangerParams params, RunMode mode, GreedyStrategy strategy,
                               bool instrument)
    : params_(params), mode_(mode), strategy_(strategy), instrument_(instrument) {
    (void)instrument_;
}

void SurvivorEngine::init() {
    if (initialized_) throw std::logic_error("init called twice");
    initialized_ = true;
    b_ = RunLedger::full();
    measure_ = 1;
    if (mode_ == RunMode::Greedy) greedy_ = DyadicInterval{Int(0), 0};
    x_current_ = params_.params().q0;
    bool alive = (mode_ == RunMode::Ledger) ? apply(x_current_) : greedy_apply(x_current_);
    if (!alive) {
        extinct_ = true;
        extinct_at_ = x_current_;
    }
}

bool SurvivorEngine::apply(const Int& x) {
    DangerSet ds = params_.build(x, /*keep_segments=*/false);
    Rat removed = b_.subtract(ds.cover);
    measure_ -= removed;
    max_level_ = std::max(max_level_, ds.level);
    trace_.push_back({x, ds.level, removed, measure_, b_.component_count()});
    if (b_.is_empty()) {
        extinct_ = true;
        extinct_at_ = x;
        return false;
    }
    return true;
}

bool SurvivorEngine::greedy_apply(const Int& x) {
    RatInterval window{greedy_->lo(), greedy_->hi()};
    CoverRuns cover = params_.cover_in(x, window);
    max_level_ = std::max(max_level_, cover.level);
    Rat before = greedy_->measure();
    if (cover.empty()) {
        trace_.push_back({x, cover.level, Rat(0), before, 1});
        return true;
    }
    DyadicUnion u = DyadicUnion::from_intervals({*greedy_});
    DyadicUnion rest = u.subtract(cover);
    if (rest.is_empty()) {
        extinct_ = true;
        extinct_at_ = x;
        trace_.push_back({x, cover.level, before, Rat(0), 0});
        return false;
    }
    DyadicInterval chosen = rest.leftmost();
    if (strategy_ == GreedyStrategy::MaxMargin) {
        // keep the surviving block farthest from the removed segments
        Rat best_gap(-1);
        for (const auto& m : rest.members()) {
            Rat mid = (Rat(m.a) + Rat(1, 2)) * pow2(-m.l);
            Rat gap(2);  // larger than any distance inside [0,1]
            for (const auto& r : cover.runs) {
                Rat rs = Rat(r.first) * pow2(-cover.level);
                Rat re = Rat(r.second) * pow2(-cover.level);
                if (cmp(re, mid) <= 0) {
                    Rat g = mid - re;
                    if (cmp(g, gap) < 0) gap = g;
                } else if (cmp(rs, mid) >= 0) {
                    Rat g = rs - mid;
                    if (cmp(g, gap) < 0) gap = g;
                }
            }
            if (cmp(gap, best_gap) > 0) {
                best_gap = gap;
                chosen = m;
            }
        }
    }
    if (!(chosen == *greedy_)) {
        chain_.push_back(chosen);
        greedy_ = chosen;
    }
    Rat after = greedy_->measure();
    measure_ = after;
    trace_.push_back({x, cover.level, before - after, after, 1});
    return true;
}

bool SurvivorEngine::step() {
    if (!initialized_) throw std::logic_error("step before init");
    if (extinct_) return false;
    Int x = x_current_ + 1;
    bool alive = (mode_ == RunMode::Ledger) ? apply(x) : greedy_apply(x);
    x_current_ = x;
    return alive;
}

bool SurvivorEngine::run_to(const Int& Q) {
    if (!initialized_) init();
    while (!extinct_ && x_current_ < Q)
        if (!step()) return false;
    return !extinct_;
}

std::optional<Rat> SurvivorEngine::measure_at(const Int& x) const {
    auto it = std::lower_bound(trace_.begin(), trace_.end(), x,
                               [](const StepRecord& r, const Int& v) { return r.x < v; });
    if (it == trace_.end() || it->x != x) return std::nullopt;
    return it->measure_after;
}

EpochReport SurvivorEngine::ladder_check(const Int& q1) const {
    EpochReport rep;
    rep.q1 = q1;
    rep.q2 = q1 * q1 * q1;
    rep.q3 = rep.q2 * rep.q2 * rep.q2;
    auto m1 = measure_at(q1);
    if (!m1) throw std::invalid_argument("ladder_check: q1 not in trace");
    rep.measure_q1 = *m1;
    auto m2 = measure_at(rep.q2);
    auto m3 = measure_at(rep.q3);
    bool any = false, ok = true;
    if (m2) {
        rep.measure_q2 = *m2;
        if (sgn(*m1) > 0) {
            rep.ratio_21 = *m2 / *m1;
            any = true;
            ok = ok && cmp(*rep.ratio_21, Rat(1, 2)) >= 0 && sgn(*m2) > 0;
        }
    }
    if (m2 && m3) {
        rep.measure_q3 = *m3;
        if (sgn(*m2) > 0) {
            rep.ratio_32 = *m3 / *m2;
            any = true;
            ok = ok && cmp(*rep.ratio_32, Rat(1, 2)) >= 0 && sgn(*m3) > 0;
        }
    }
    rep.certified = any && ok;
    return rep;
}

BetaWitness SurvivorEngine::extract_beta(int bits) const {
    if (!initialized_ || extinct_) throw std::logic_error("extract_beta: no survivors");
    DyadicInterval base = (mode_ == RunMode::Ledger) ? b_.leftmost_block() : *greedy_;
    if (bits < base.l)
        throw std::invalid_argument("extract_beta: bits coarser than the surviving block");
    BetaWitness w;
    w.bits = bits;
    w.unconstrained_tail = bits > base.l;
    if (mode_ == RunMode::Greedy) w.chain = chain_;
    w.chain.push_back(base);
    DyadicInterval cur = base;
    while (cur.l < bits) {  // leftmost descent; deterministic
        cur = DyadicInterval{cur.a * 2, cur.l + 1};
        w.chain.push_back(cur);
    }
    w.beta_lo = cur.lo();
    w.beta_hi = cur.hi();
    return w;
}

}  // namespace logbad
