// test_maps.cpp — interval-map formulas, inverse-branch round trips, orbit
// ensembles with the binomial rate oracle, shadowing-gap search, and the
// coding-based level spectrum.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mfa/maps.hpp"
#include "mfa/spectrum.hpp"
#include "oracles.hpp"

using namespace mfa;

TEST_CASE("intermittent map formulas") {
    const MPMap map{0.5};
    CHECK(map.apply(0.25) == doctest::Approx(0.25 * (1.0 + std::sqrt(0.5))).epsilon(1e-14));
    CHECK(map.apply(0.25) == doctest::Approx(0.426777).epsilon(1e-6));
    CHECK(map.apply(0.75) == doctest::Approx(0.5));
    CHECK(map.apply(0.0) == 0.0);
    CHECK(map.apply(0.5) == 1.0); // continuous from the left at 1/2
    CHECK_THROWS_AS(map.apply(1.5), Error);
}

TEST_CASE("inverse branches round-trip to 1e-12 on a 10^4 grid") {
    const MPMap map{0.5};
    CHECK(map.inverse_right(0.5) == doctest::Approx(0.75));
    CHECK(map.inverse_left(0.0) == doctest::Approx(0.0));
    CHECK(map.inverse_left(0.426777) == doctest::Approx(0.25).epsilon(1e-6));

    // the right branch is onto (0,1]; its preimage of 0 is the branch cut,
    // which the left branch owns, so the grid for it starts above 0
    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double y = double(i) / 10000.0;
        worst = std::max(worst, std::abs(map.apply(map.inverse_left(y)) - y));
        if (i > 0) worst = std::max(worst, std::abs(map.apply(map.inverse_right(y)) - y));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("torus expanding map") {
    const TorusExpandingMap t({2, 3});
    const std::vector<double> x = {0.75, 0.5};
    const auto y = t.apply(x);
    CHECK(y[0] == doctest::Approx(0.5));
    CHECK(y[1] == doctest::Approx(0.5));
    CHECK_THROWS_AS(TorusExpandingMap({1}), Error);

    // the first coordinate of the skew base is exactly d-to-1 on rationals
    const Interval1D dbl = doubling_system(2);
    CHECK(dbl.f(0.25) == doctest::Approx(0.5));
    CHECK(dbl.f(0.75) == doctest::Approx(0.5));
}

TEST_CASE("viana base is exactly d-to-1 on the rational grid j/d^2") {
    const VianaMap v(16, 2.0, 0.01);
    std::vector<int> hits(16, 0);
    for (int j = 0; j < 256; ++j) {
        const double theta = double(j) / 256.0;
        const auto [t, x] = v.apply(theta, 0.0);
        (void)x;
        const double scaled = t * 16.0;
        const int cell = int(scaled + 0.5);
        REQUIRE(std::abs(scaled - cell) == 0.0); // exact dyadic arithmetic
        ++hits[cell % 16];
    }
    for (int c = 0; c < 16; ++c) CHECK(hits[c] == 16);
}

TEST_CASE("viana map formulas") {
    const VianaMap v(16, 2.0, 0.01);
    SUBCASE("worked points") {
        const auto [t1, x1] = v.apply(0.25, 0.0);
        CHECK(t1 == 0.0); // 16 * 0.25 mod 1, exactly
        CHECK(x1 == doctest::Approx(1.0).epsilon(1e-12));
        const auto [t2, x2] = v.apply(0.0, 0.0);
        CHECK(t2 == 0.0);
        CHECK(x2 == doctest::Approx(1.01));
    }
    SUBCASE("alpha = 0 decouples the second coordinate") {
        const VianaMap u(16, 2.0, 0.0);
        double x = 0.3;
        double theta = 0.123;
        for (int i = 0; i < 5; ++i) {
            const auto [nt, nx] = u.apply(theta, x);
            CHECK(nx == doctest::Approx(1.0 - 2.0 * x * x));
            theta = nt;
            x = nx;
        }
    }
    SUBCASE("d >= 16 required") { CHECK_THROWS_AS(VianaMap(8, 2.0, 0.01), Error); }
    SUBCASE("invariance check reports rather than clips") {
        const auto chk = v.check_second_coordinate(200, 50, 99);
        CHECK(chk.samples == 200);
        CHECK(chk.violations >= 0); // a = 2.0 stand-in may escape; count reported
    }
}

TEST_CASE("empirical spectrum of the doubling map") {
    const Interval1D dbl = doubling_system(2);
    const auto right = [](double x) { return x >= 0.5 ? 1.0 : 0.0; };

    EnsembleParams params;
    params.size = 100000;
    params.n = 20;
    params.bins = 20;
    params.seed = 12345;
    params.range_lo = 0.0;
    params.range_hi = 1.0;
    const OrbitEnsemble ens = run_ensemble(dbl, right, params);
    REQUIRE(static_cast<int>(ens.averages.size()) == params.size);
    const RateHistogram h = rate_histogram(ens);
    REQUIRE(h.counts.size() == 20);
    CHECK(h.method == "gaussian_window_heuristic");

    // peak bin at 1/2 has rate ~ 0 and maximal mass
    const int peak = 10; // [0.50, 0.55)
    for (int b = 0; b < 20; ++b) CHECK(h.counts[peak] >= h.counts[b]);
    CHECK(std::abs(h.rate[peak]) <= 0.02);

    // rate at 0.3 against the exact binomial oracle and the Cramer value
    const int b03 = 6; // [0.30, 0.35) contains only j = 6 at n = 20
    const double frac_oracle = double(oracle::binomial(20, 6)) / std::pow(2.0, 20);
    CHECK(std::abs(h.fraction[b03] - frac_oracle) <= 0.005);
    const double rate_oracle =
        -(std::log(frac_oracle) + 0.5 * std::log(2.0 * 3.14159265358979 * 20.0 * 0.25)) / 20.0;
    CHECK(std::abs(h.rate[b03] - rate_oracle) <= 0.01);
    const double cramer = std::log(2.0) - oracle::binary_entropy(0.3);
    CHECK(std::abs(h.rate[b03] - cramer) <= 0.03);

    // determinism: same seed, same histogram; per-member seeding also makes
    // the averages identical across worker counts
    const RateHistogram h2 = empirical_spectrum(dbl, right, params);
    for (int b = 0; b < 20; ++b) CHECK(h.counts[b] == h2.counts[b]);
    EnsembleParams par = params;
    par.workers = 3;
    const OrbitEnsemble ens3 = run_ensemble(dbl, right, par);
    for (int m = 0; m < params.size; m += 997)
        CHECK(ens.averages[std::size_t(m)] == ens3.averages[std::size_t(m)]);
}

TEST_CASE("constant observable collapses to one bin with rate zero") {
    const Interval1D dbl = doubling_system(2);
    EnsembleParams params;
    params.size = 2000;
    params.n = 10;
    params.bins = 8;
    params.seed = 3;
    const RateHistogram h = empirical_spectrum(dbl, [](double) { return 0.7; }, params);
    std::int64_t nonzero_bins = 0;
    for (int b = 0; b < params.bins; ++b)
        if (h.counts[b] > 0) {
            ++nonzero_bins;
            CHECK(h.rate[b] == doctest::Approx(0.0));
        }
    CHECK(nonzero_bins == 1);
}

TEST_CASE("histograms are stable under seed change (TV <= 0.05 at 1e5)") {
    const Interval1D dbl = doubling_system(2);
    const auto right = [](double x) { return x >= 0.5 ? 1.0 : 0.0; };
    EnsembleParams a, b;
    a.size = b.size = 100000;
    a.n = b.n = 20;
    a.bins = b.bins = 20;
    a.range_lo = b.range_lo = 0.0;
    a.range_hi = b.range_hi = 1.0;
    a.seed = 1001;
    b.seed = 2002;
    const RateHistogram ha = empirical_spectrum(dbl, right, a);
    const RateHistogram hb = empirical_spectrum(dbl, right, b);
    double tv = 0.0;
    for (int i = 0; i < 20; ++i) tv += std::abs(ha.fraction[i] - hb.fraction[i]);
    CHECK(0.5 * tv <= 0.05);
}

TEST_CASE("ensemble size guard") {
    const Interval1D dbl = doubling_system(2);
    EnsembleParams params;
    params.size = 10;
    CHECK_THROWS_AS(empirical_spectrum(dbl, [](double x) { return x; }, params), Error);
}

TEST_CASE("shadowing gap on the doubling map") {
    const Interval1D dbl = doubling_system(2);

    SUBCASE("two generic segments bridge within the cylinder-depth bound") {
        const SpecGapResult res =
            spec_gap_estimate(dbl, OrbitSegment{0.123, 6}, OrbitSegment{0.777, 6}, 0.1);
        REQUIRE(res.found);
        CHECK(res.gap <= 4);
        CHECK(res.max_shadow_dist < 0.1 - 1e-9);
    }

    SUBCASE("already-concatenating segments need no gap") {
        const double x1 = 0.2;
        double x2 = x1;
        for (int i = 0; i < 5; ++i) x2 = dbl.f(x2);
        const SpecGapResult res =
            spec_gap_estimate(dbl, OrbitSegment{x1, 5}, OrbitSegment{x2, 5}, 0.1);
        REQUIRE(res.found);
        CHECK(res.gap == 0);
    }

    SUBCASE("p_max exhaustion reports a failure, not an exception") {
        // eps tiny and p_max 0: generic segments cannot bridge instantly
        const SpecGapResult res =
            spec_gap_estimate(dbl, OrbitSegment{0.123, 6}, OrbitSegment{0.777, 6}, 1e-4, 0);
        CHECK_FALSE(res.found);
        CHECK(!res.diagnostics.empty());
    }
}

TEST_CASE("shadowing gap on the intermittent map") {
    const MPMap map{0.5};
    const Interval1D sys = mp_system(map);

    SUBCASE("fixed-point segments glue with gap zero") {
        const SpecGapResult res =
            spec_gap_estimate(sys, OrbitSegment{0.0, 6}, OrbitSegment{0.0, 6}, 0.05);
        REQUIRE(res.found);
        CHECK(res.gap == 0);
        CHECK(std::abs(res.witness) <= 0.05);
    }

    SUBCASE("gap sweep from the neutral region: p grows, p(n)/n does not increase") {
        // start so deep that the orbit is still near 0 when the window ends
        std::vector<double> ratios;
        int prev_gap = -1;
        for (int n : {4, 8, 12, 16}) {
            double x = 0.3;
            for (int i = 0; i < 2 * n; ++i) x = map.inverse_left(x);
            const SpecGapResult res =
                spec_gap_estimate(sys, OrbitSegment{x, n}, OrbitSegment{0.3, 4}, 0.05, 80);
            REQUIRE(res.found);
            CHECK(res.gap >= prev_gap); // deeper segments need longer bridges
            prev_gap = res.gap;
            ratios.push_back(double(res.gap) / n);
        }
        for (std::size_t i = 1; i < ratios.size(); ++i) CHECK(ratios[i] <= ratios[i - 1] + 1e-12);
    }
}

TEST_CASE("coding-based level spectrum of the intermittent map") {
    const MPMap map{0.5};
    std::vector<int> ns;
    for (int n = 8; n <= 14; ++n) ns.push_back(n);
    const DeltaSchedule sched{0.35, 0.02};
    const std::vector<double> grid = {0.5, 1.0, 1.2};
    const SpectrumCurve curve = mp_level_spectrum(map, grid, ns, sched);
    CHECK(curve.note == "coding-based, distortion-uncorrected");
    REQUIRE(curve.points.size() == 3);

    // alpha = 1/2: identical combinatorics to the full-shift direct estimate
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const Potential phi = Potential::indicator(full, 1);
    const Potential zero = Potential::constant(full, 0.0);
    const double direct = direct_level_pressure(full, phi, zero, 0.5, sched, ns).value;
    CHECK(curve.points[0].status == AlphaStatus::Interior);
    CHECK(std::abs(curve.points[0].value - direct) <= 0.01);
    CHECK(std::abs(curve.points[0].value - std::log(2.0)) <= 0.05);

    // alpha = 1 with a rounding-only window: the single rightmost cylinder
    const DeltaSchedule rounding{0.0, 0.02};
    const SpectrumCurve top = mp_level_spectrum(map, std::vector<double>{1.0}, ns, rounding);
    CHECK(top.points[0].status == AlphaStatus::Interior);
    CHECK(top.points[0].value == doctest::Approx(0.0));

    // alpha outside [0,1] is infeasible
    CHECK(curve.points[2].status == AlphaStatus::Infeasible);

    CHECK_THROWS_AS(mp_level_spectrum(map, grid, std::vector<int>{30}, sched), Error);
}
