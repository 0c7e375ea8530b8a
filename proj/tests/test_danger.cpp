#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logbad/danger.hpp"

using namespace logbad;

namespace {

DangerParams golden_params(long eps_log2 = -6, long q0 = 16) {
    DangerParams p{QuadraticReal::golden(), eps_log2, q0, 30};
    return p;
}

}  // namespace

TEST_CASE("directional roundings at x = 16 match the frozen oracle") {
    DangerBuilder b(golden_params());
    // floor(||16 alpha|| * 2^30) / 2^30 with ||16 alpha|| = 8 sqrt5 - 17 - 1/2... computed
    // independently at 160-bit precision
    CHECK(b.dist_lower(16) == Rat(59837581, Int(1) << 29));
    CHECK(b.log_sq_lower(16) == Rat(16));  // log2 16 = 4 exactly
    CHECK(b.radius(16) == Rat(2048, 59837581));
    CHECK(b.level(16) == 13);
}

TEST_CASE("level conventions") {
    DangerBuilder b(golden_params());
    CHECK(b.level(0) == 0);
    CHECK_THROWS(b.level(1));  // log2^2(1) = 0: radius undefined
    // levels never go negative
    DangerBuilder tiny({QuadraticReal::golden(), -1, 2, 30});
    CHECK(tiny.level(2) >= 0);
}

TEST_CASE("halving epsilon doubles the radius scale and bumps the level") {
    DangerBuilder b6(golden_params(-6));
    DangerBuilder b7(golden_params(-7));
    for (Int x : {Int(16), Int(17), Int(100), Int(255)}) {
        CHECK(b7.radius(x) * Rat(2) == b6.radius(x));
        CHECK(b7.level(x) == b6.level(x) + 1);
    }
}

TEST_CASE("radius is a certified over-approximation") {
    DangerBuilder b(golden_params());
    AlphaScanner scan(QuadraticReal::golden());
    Rat eps = pow2(-6);
    for (Int x = 16; x <= 200; ++x) {
        // true radius = eps / (||alpha x|| x^2 log2^2 x) <= r(x), via upper brackets
        auto [dlo, dhi] = scan.dist_bracket(x);
        auto lu = log2_upper(Rat(x), 48);
        Rat true_lower = eps / (dhi * Rat(x) * Rat(x) * lu * lu);
        CHECK(cmp(b.radius(x), true_lower) >= 0);
        // and not inflated beyond the documented factor
        Rat true_upper = eps / (dlo * Rat(x) * Rat(x) * log2_lower(Rat(x), 48) *
                                log2_lower(Rat(x), 48));
        CHECK(cmp(b.radius(x), true_upper * (Rat(1) + pow2(-28))) <= 0);
        // each segment fits in at most two level-l cells
        CHECK(cmp(Rat(2) * b.radius(x), pow2(-b.level(x))) <= 0);
    }
}

TEST_CASE("danger set at x = 16: cover structure") {
    DangerBuilder b(golden_params());
    DangerSet ds = b.build(16);
    CHECK(ds.level == 13);
    CHECK(ds.cover.level == 13);
    CHECK(ds.cover.block_count() == 32);   // 17 segments, some share cells
    CHECK(ds.cover.measure() == Rat(1, 256));
    REQUIRE(ds.segments.size() == 17);
    // segments are centered on y/x and clipped to [0,1]
    CHECK(ds.segments.front().lo == 0);
    CHECK(ds.segments.back().hi == 1);
    for (int y = 0; y <= 16; ++y) {
        const auto& s = ds.segments[size_t(y)];
        Rat c(y, 16);
        CHECK(cmp(s.lo, c) <= 0);
        CHECK(cmp(s.hi, c) >= 0);
        CHECK(cmp(s.hi - s.lo, Rat(2) * ds.radius) <= 0);
    }
}

TEST_CASE("cover contains every segment") {
    DangerBuilder b(golden_params(-5, 8));
    for (Int x : {Int(8), Int(9), Int(20), Int(33)}) {
        DangerSet ds = b.build(x);
        DyadicUnion cover = DyadicUnion::from_intervals(ds.cover.intervals());
        for (const auto& s : ds.segments) {
            CHECK(cover.contains_point(s.lo));
            CHECK(cover.contains_point(s.hi));
            CHECK(cover.contains_point((s.lo + s.hi) / 2));
        }
        // cover measure is at most segments' total plus two cells each
        Rat seg_total(0);
        for (const auto& s : ds.segments) seg_total += s.hi - s.lo;
        CHECK(cmp(ds.cover.measure(), seg_total + Rat(2 * (x.get_ui() + 1)) * pow2(-ds.level)) <= 0);
    }
}

TEST_CASE("complement count tau_x matches the run structure") {
    DangerBuilder b(golden_params());
    for (Int x : {Int(16), Int(17), Int(50)}) {
        DangerSet ds = b.build(x, /*keep_segments=*/false);
        // components of [0,1] \ A(x): gaps between consecutive runs, plus the
        // leading/trailing gaps when A(x) does not touch 0 or 1
        Int cells = Int(1) << ds.level;
        Int gaps = 0;
        const auto& runs = ds.cover.runs;
        if (!runs.empty()) {
            if (runs.front().first > 0) ++gaps;
            if (runs.back().second < cells) ++gaps;
            for (size_t i = 1; i < runs.size(); ++i)
                if (runs[i].first > runs[i - 1].second) ++gaps;
        }
        CHECK(ds.complement_count == gaps);
        CHECK(ds.complement_count <= x + 1);
    }
}

TEST_CASE("windowed cover equals the restriction of the full cover") {
    DangerBuilder b(golden_params(-5, 8));
    for (Int x : {Int(32), Int(61)}) {
        DangerSet ds = b.build(x, /*keep_segments=*/true);
        RatInterval window{Rat(1, 5), Rat(2, 5)};
        CoverRuns win = b.cover_in(x, window);
        CHECK(win.level == ds.level);
        // every windowed block appears in the full cover
        DyadicUnion full_cover = DyadicUnion::from_intervals(ds.cover.intervals());
        for (const auto& blk : win.intervals()) CHECK(full_cover.contains(blk));
        // every segment meeting the window is covered by the windowed cover
        DyadicUnion win_cover = DyadicUnion::from_intervals(win.intervals());
        for (const auto& s : ds.segments) {
            if (cmp(s.hi, window.lo) < 0 || cmp(s.lo, window.hi) > 0) continue;
            CHECK(win_cover.contains_point(std::max(s.lo, window.lo)));
            CHECK(win_cover.contains_point(std::min(s.hi, window.hi)));
        }
    }
}

TEST_CASE("params validation") {
    DangerParams bad{QuadraticReal::golden(), 0, 16, 30};
    CHECK_THROWS(bad.validate());
    DangerParams bad2{QuadraticReal::golden(), -6, 1, 30};
    CHECK_THROWS(bad2.validate());
    CHECK_NOTHROW(golden_params().validate());
}
