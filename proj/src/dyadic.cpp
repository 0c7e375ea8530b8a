#include "logbad/dyadic.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace logbad {

namespace {

Int shl(const Int& v, long bits) {
    Int r;
    mpz_mul_2exp(r.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    return r;
}

long trailing_zeros(const Int& v, long cap) {
    if (sgn(v) == 0) return cap;
    auto tz = mpz_scan1(v.get_mpz_t(), 0);
    return std::min<long>(static_cast<long>(tz), cap);
}

long floor_log2_int(const Int& v) {
    return static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)) - 1;
}

// Appends blocks keeping the buddy-merge invariant, so the finished vector
// is sorted, disjoint and maximal.
void push_block(std::vector<DyadicInterval>& out, Int a, int l) {
    out.push_back({std::move(a), l});
    while (out.size() >= 2) {
        DyadicInterval& top = out[out.size() - 1];
        DyadicInterval& prev = out[out.size() - 2];
        if (prev.l == top.l && top.a == prev.a + 1 && mpz_even_p(prev.a.get_mpz_t())) {
            Int na = prev.a / 2;
            int nl = prev.l - 1;
            out.pop_back();
            out.pop_back();
            out.push_back({std::move(na), nl});
        } else {
            break;
        }
    }
}

// Greedy maximal dyadic decomposition of the half-open range [s, e) at level L.
void emit_range(std::vector<DyadicInterval>& out, Int s, const Int& e, int L) {
    while (s < e) {
        Int gap = e - s;
        long k = std::min(trailing_zeros(s, L), floor_log2_int(gap));
        Int a;
        mpz_fdiv_q_2exp(a.get_mpz_t(), s.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
        push_block(out, a, static_cast<int>(L - k));
        s += shl(Int(1), k);
    }
}

}  // namespace

Int CoverRuns::block_count() const {
    Int n = 0;
    for (const auto& r : runs) n += r.second - r.first;
    return n;
}

std::vector<DyadicInterval> CoverRuns::intervals() const {
    std::vector<DyadicInterval> out;
    for (const auto& r : runs)
        for (Int a = r.first; a < r.second; ++a) out.push_back({a, level});
    return out;
}

CoverRuns coalesce(const std::vector<DyadicInterval>& blocks) {
    CoverRuns out;
    if (blocks.empty()) return out;
    int L = 0;
    for (const auto& b : blocks) L = std::max(L, b.l);
    out.level = L;
    std::vector<std::pair<Int, Int>> ranges;
    ranges.reserve(blocks.size());
    for (const auto& b : blocks) {
        Int s = shl(b.a, L - b.l);
        Int e = shl(b.a + 1, L - b.l);
        ranges.emplace_back(std::move(s), std::move(e));
    }
    std::sort(ranges.begin(), ranges.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& r : ranges) {
        if (!out.runs.empty() && r.first <= out.runs.back().second) {
            if (r.second > out.runs.back().second) out.runs.back().second = r.second;
        } else {
            out.runs.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<DyadicInterval> dyadic_cover(const RatInterval& I, int l) {
    Rat lo = std::max(I.lo, Rat(0));
    Rat hi = std::min(I.hi, Rat(1));
    if (cmp(lo, hi) > 0) return {};
    Rat s = pow2(l);
    Rat t = lo * s;
    Int a_lo;
    mpz_fdiv_q(a_lo.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    Rat t2 = hi * s;
    Int a_hi;
    if (t2.get_den() == 1) {
        a_hi = t2.get_num() - 1;  // closed right endpoint on the grid
    } else {
        mpz_fdiv_q(a_hi.get_mpz_t(), t2.get_num_mpz_t(), t2.get_den_mpz_t());
    }
    if (a_hi < a_lo) a_hi = a_lo;
    Int max_a;
    mpz_mul_2exp(max_a.get_mpz_t(), Int(1).get_mpz_t(), static_cast<mp_bitcnt_t>(l));
    max_a -= 1;
    if (a_lo < 0) a_lo = 0;
    if (a_hi > max_a) a_hi = max_a;
    std::vector<DyadicInterval> out;
    for (Int a = a_lo; a <= a_hi; ++a) out.push_back({a, l});
    return out;
}

DyadicUnion DyadicUnion::full() {
    DyadicUnion u;
    u.members_.push_back({Int(0), 0});
    return u;
}

DyadicUnion DyadicUnion::from_intervals(std::vector<DyadicInterval> blocks) {
    CoverRuns runs = coalesce(blocks);
    DyadicUnion u;
    for (const auto& r : runs.runs) emit_range(u.members_, r.first, r.second, runs.level);
    return u;
}

const DyadicInterval& DyadicUnion::leftmost() const {
    if (is_empty()) throw std::logic_error("leftmost of empty union");
    return members_.front();
}

Rat DyadicUnion::measure() const {
    std::map<int, unsigned long> counts;
    for (const auto& m : members_) ++counts[m.l];
    Rat total(0);
    for (const auto& [l, n] : counts) total += Rat(n) * pow2(-l);
    return total;
}

int DyadicUnion::max_level() const {
    int L = 0;
    for (const auto& m : members_) L = std::max(L, m.l);
    return L;
}

DyadicUnion DyadicUnion::subtract(const CoverRuns& cover, Rat* removed) const {
    DyadicUnion out;
    if (cover.runs.empty()) {
        out.members_ = members_;
        return out;
    }
    const auto& runs = cover.runs;
    size_t j = 0;
    Rat removed_total(0);
    for (const auto& m : members_) {
        int L = std::max(m.l, cover.level);
        long shm = L - m.l, shc = L - cover.level;
        Int ms = shl(m.a, shm);
        Int me = shl(m.a + 1, shm);
        while (j < runs.size() && shl(runs[j].second, shc) <= ms) ++j;
        Int cur = ms;
        size_t jj = j;
        while (jj < runs.size()) {
            Int rs = shl(runs[jj].first, shc);
            if (rs >= me) break;
            Int re = shl(runs[jj].second, shc);
            if (rs > cur) emit_range(out.members_, cur, rs, L);
            Int ov_lo = std::max(cur, rs);
            Int ov_hi = std::min(me, re);
            if (ov_hi > ov_lo && removed) removed_total += Rat(ov_hi - ov_lo) * pow2(-L);
            if (ov_hi > cur) cur = ov_hi;
            if (re >= me) break;
            ++jj;
        }
        if (cur < me) emit_range(out.members_, cur, me, L);
    }
    if (removed) *removed += removed_total;
    return out;
}

DyadicUnion DyadicUnion::subtract(const std::vector<DyadicInterval>& blocks, Rat* removed) const {
    return subtract(coalesce(blocks), removed);
}

bool DyadicUnion::contains_point(const Rat& t) const {
    // member contains t iff a <= t*2^l <= a+1
    for (const auto& m : members_) {
        Rat s = Rat(t) * pow2(m.l);
        if (cmp(s, Rat(m.a)) >= 0 && cmp(s, Rat(m.a + 1)) <= 0) return true;
        if (cmp(s, Rat(m.a)) < 0) return false;  // sorted; past t already
    }
    return false;
}

bool DyadicUnion::contains(const DyadicInterval& b) const {
    // in a maximal union, a dyadic block is covered iff one member contains it
    for (const auto& m : members_) {
        int L = std::max(m.l, b.l);
        Int ms = shl(m.a, L - m.l), me = shl(m.a + 1, L - m.l);
        Int bs = shl(b.a, L - b.l), be = shl(b.a + 1, L - b.l);
        if (ms <= bs && be <= me) return true;
        if (ms >= be) return false;  // sorted; members are past b now
    }
    return false;
}

bool DyadicUnion::is_subset_of(const DyadicUnion& other) const {
    for (const auto& m : members_)
        if (!other.contains(m)) return false;
    return true;
}

RunLedger RunLedger::full() {
    RunLedger r;
    r.runs_.emplace(Int(0), Int(1));
    r.measure_ = 1;
    return r;
}

void RunLedger::ensure_level(int L) {
    if (L <= level_) return;
    long sh = L - level_;
    std::map<Int, Int> scaled;
    auto hint = scaled.end();
    for (auto& [s, e] : runs_)
        hint = scaled.emplace_hint(hint, shl(s, sh), shl(e, sh));
    runs_ = std::move(scaled);
    level_ = L;
}

Rat RunLedger::subtract(const CoverRuns& cover) {
    if (cover.runs.empty()) return Rat(0);
    ensure_level(cover.level);
    long shc = level_ - cover.level;
    Int removed_cells = 0;
    auto it = runs_.begin();
    for (const auto& r : cover.runs) {
        Int rs = shl(r.first, shc);
        Int re = shl(r.second, shc);
        // back up if the previous component spills past rs
        it = runs_.upper_bound(rs);
        if (it != runs_.begin()) {
            auto prev = std::prev(it);
            if (prev->second > rs) it = prev;
        }
        while (it != runs_.end() && it->first < re) {
            Int s = it->first, e = it->second;
            Int ov_lo = s < rs ? rs : s;
            Int ov_hi = e < re ? e : re;
            removed_cells += ov_hi - ov_lo;
            if (s < rs) {
                it->second = rs;  // keep left fragment in place
                ++it;
            } else {
                it = runs_.erase(it);
            }
            if (e > re) {
                it = runs_.emplace_hint(it, re, e);  // right fragment
                break;
            }
        }
    }
    Rat removed = Rat(removed_cells) * pow2(-level_);
    measure_ -= removed;
    return removed;
}

DyadicInterval RunLedger::leftmost_block() const {
    if (runs_.empty()) throw std::logic_error("leftmost_block of empty ledger");
    const auto& [s, e] = *runs_.begin();
    long k = std::min(trailing_zeros(s, level_), floor_log2_int(e - s));
    Int a;
    mpz_fdiv_q_2exp(a.get_mpz_t(), s.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return {a, static_cast<int>(level_ - k)};
}

bool RunLedger::contains_point(const Rat& t) const {
    // components are closed intervals [s/2^L, e/2^L]
    Rat v = t * pow2(level_);
    auto it = runs_.upper_bound(Int(v.get_num() / v.get_den() + 1));
    if (it == runs_.begin()) return false;
    --it;
    return cmp(v, Rat(it->first)) >= 0 && cmp(v, Rat(it->second)) <= 0;
}

DyadicUnion RunLedger::to_union() const {
    // emit_range output is already sorted, disjoint and maximal because the
    // components are separated by at least one removed cell
    DyadicUnion u;
    for (const auto& [s, e] : runs_) emit_range(u.members_, s, e, level_);
    return u;
}

}  // namespace logbad
