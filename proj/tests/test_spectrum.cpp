// test_spectrum.cpp — rotation intervals, Legendre spectra against closed
// forms, the brute-force variational oracle, direct level-set pressure with
// its binomial oracle, and BS dimension.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mfa/spectrum.hpp"
#include "mfa/words.hpp"
#include "oracles.hpp"

using namespace mfa;

namespace {

std::vector<int> range(int lo, int hi, int step = 1) {
    std::vector<int> out;
    for (int n = lo; n <= hi; n += step) out.push_back(n);
    return out;
}

} // namespace

TEST_CASE("rotation intervals with cycle witnesses") {
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const Potential ones_f = Potential::indicator(full, 1);
    const RotationInterval ri = rotation_interval(full, ones_f);
    CHECK(ri.alpha_min == doctest::Approx(0.0));
    CHECK(ri.alpha_max == doctest::Approx(1.0));
    CHECK(word_to_string(ri.min_cycle) == "0");
    CHECK(word_to_string(ri.max_cycle) == "1");

    const ShiftSpace gm = ShiftSpace::golden_mean();
    const Potential ones_g = Potential::indicator(gm, 1);
    const RotationInterval rg = rotation_interval(gm, ones_g);
    CHECK(rg.alpha_min == doctest::Approx(0.0));
    CHECK(rg.alpha_max == doctest::Approx(0.5));
    CHECK(rg.max_cycle.size() == 2); // the 2-cycle "10" (up to rotation)
    CHECK(birkhoff_average(ones_g, rg.max_cycle) == doctest::Approx(0.5));

    const Potential c = Potential::constant(full, -0.4);
    const RotationInterval rc = rotation_interval(full, c);
    CHECK(rc.alpha_min == doctest::Approx(-0.4));
    CHECK(rc.alpha_max == doctest::Approx(-0.4));
}

TEST_CASE("legendre spectrum equals binary entropy on the full shift") {
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const Potential phi = Potential::indicator(full, 1);
    const Potential psi = Potential::constant(full, 0.0);

    std::vector<double> grid;
    for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
    const SpectrumCurve curve = legendre_spectrum(full, phi, psi, grid);
    double worst = 0.0;
    for (const auto& pt : curve.points) {
        REQUIRE(pt.status == AlphaStatus::Interior);
        worst = std::max(worst, std::abs(pt.value - oracle::binary_entropy(pt.alpha)));
    }
    CHECK(worst <= 1e-6);

    // the optimizer is the logit
    for (const auto& pt : curve.points)
        CHECK(pt.q == doctest::Approx(std::log(pt.alpha / (1.0 - pt.alpha))).epsilon(1e-6));

    CHECK(max_second_difference(curve) <= 1e-8);
}

TEST_CASE("legendre endpoints and infeasible alpha") {
    const ShiftSpace gm = ShiftSpace::golden_mean();
    const Potential phi = Potential::indicator(gm, 1);
    const Potential psi = Potential::constant(gm, 0.0);
    const RotationInterval ri = rotation_interval(gm, phi);

    const SpectrumPoint at_half = legendre_point(gm, phi, psi, 0.5, ri);
    CHECK(at_half.status == AlphaStatus::Endpoint);
    CHECK(at_half.value == doctest::Approx(0.0)); // entropy 0 on the cycle, psi = 0
    CHECK(std::isnan(at_half.q));

    const SpectrumPoint beyond = legendre_point(gm, phi, psi, 0.7, ri);
    CHECK(beyond.status == AlphaStatus::Infeasible);
    CHECK(std::isnan(beyond.value));

    // endpoint value picks up the psi average along the witness cycle
    const Potential psi2 = Potential::indicator(gm, 1);
    const SpectrumPoint ep = legendre_point(gm, phi, psi2, 0.5, ri);
    CHECK(ep.value == doctest::Approx(0.5)); // mean of 1_[1] on the 2-cycle
}

TEST_CASE("legendre at the golden-mean interior point 1/3") {
    const ShiftSpace gm = ShiftSpace::golden_mean();
    const Potential phi = Potential::indicator(gm, 1);
    const Potential psi = Potential::constant(gm, 0.0);
    const RotationInterval ri = rotation_interval(gm, phi);
    const SpectrumPoint pt = legendre_point(gm, phi, psi, 1.0 / 3.0, ri);
    CHECK(pt.value == doctest::Approx((2.0 / 3.0) * std::log(2.0)).epsilon(1e-9));
    CHECK(std::abs(pt.value - 0.462098) <= 1e-3);
}

TEST_CASE("constrained variational oracle") {
    const ShiftSpace gm = ShiftSpace::golden_mean();
    const Potential phi_g = Potential::indicator(gm, 1);
    const Potential psi_g = Potential::constant(gm, 0.0);

    const VariationalResult vr = constrained_variational(gm, phi_g, psi_g, 1.0 / 3.0);
    CHECK(std::abs(vr.value - 0.462098) <= 1e-3);
    CHECK(vr.matrix[0][1] == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(vr.constraint_violation <= 1e-6);

    const ShiftSpace full = ShiftSpace::full_shift(2);
    const Potential phi_f = Potential::indicator(full, 1);
    const Potential psi_f = Potential::constant(full, 0.0);
    const VariationalResult vf = constrained_variational(full, phi_f, psi_f, 0.5);
    CHECK(std::abs(vf.value - std::log(2.0)) <= 1e-6);

    // endpoint: the unique feasible measure lives on the witness cycle
    const VariationalResult ve = constrained_variational(gm, phi_g, phi_g, 0.5);
    CHECK(ve.value == doctest::Approx(0.5)); // entropy 0 + psi mean on "10"

    CHECK_THROWS_AS(constrained_variational(gm, phi_g, psi_g, 0.9), InfeasibleError);
}

TEST_CASE("spectrum agreement: legendre vs variational oracle at interior points") {
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const ShiftSpace gm = ShiftSpace::golden_mean();
    const Potential phi_f = Potential::indicator(full, 1);
    const Potential phi_g = Potential::indicator(gm, 1);
    const Potential zero_f = Potential::constant(full, 0.0);
    const Potential zero_g = Potential::constant(gm, 0.0);
    const RotationInterval rf = rotation_interval(full, phi_f);
    const RotationInterval rg = rotation_interval(gm, phi_g);

    for (double a : {0.2, 0.35, 0.5, 0.65, 0.8}) {
        const double leg = legendre_point(full, phi_f, zero_f, a, rf).value;
        const double var = constrained_variational(full, phi_f, zero_f, a).value;
        CHECK(std::abs(leg - var) <= 1e-3);
    }
    for (double a : {0.15, 0.25, 1.0 / 3.0, 0.4}) {
        const double leg = legendre_point(gm, phi_g, zero_g, a, rg).value;
        const double var = constrained_variational(gm, phi_g, zero_g, a).value;
        CHECK(std::abs(leg - var) <= 1e-3);
    }

    // with a nonzero psi as well
    const Potential psi_f = Potential::from_dense(full, 1, {0.2, -0.1});
    for (double a : {0.3, 0.6}) {
        const double leg = legendre_point(full, phi_f, psi_f, a, rf).value;
        const double var = constrained_variational(full, phi_f, psi_f, a).value;
        CHECK(std::abs(leg - var) <= 1e-3);
    }

    // memory-2 constraint potential exercises the edge-weighted paths
    const Potential phi2 = Potential::from_dense(full, 2, {0.0, 0.25, 0.5, 1.0});
    const RotationInterval r2 = rotation_interval(full, phi2);
    for (double a : {0.3, 0.55}) {
        REQUIRE(a > r2.alpha_min);
        REQUIRE(a < r2.alpha_max);
        const double leg = legendre_point(full, phi2, zero_f, a, r2).value;
        const double var = constrained_variational(full, phi2, zero_f, a).value;
        CHECK(std::abs(leg - var) <= 1e-3);
    }
}

TEST_CASE("tangency: F touches P(psi) at the equilibrium average") {
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const Potential phi = Potential::indicator(full, 1);

    const Potential zero = Potential::constant(full, 0.0);
    const RotationInterval ri = rotation_interval(full, phi);
    CHECK(legendre_point(full, phi, zero, 0.5, ri).value ==
          doctest::Approx(std::log(2.0)).epsilon(1e-10));

    const Potential psi = Potential::from_dense(full, 1, {0.0, 0.3});
    const double alpha_star = equilibrium_average(full, psi, phi);
    const double f_at_star = legendre_point(full, phi, psi, alpha_star, ri).value;
    CHECK(f_at_star == doctest::Approx(transfer_pressure(full, psi)).epsilon(1e-8));

    // F(alpha) <= P(psi) across the grid
    for (double a = 0.05; a < 1.0; a += 0.05)
        CHECK(legendre_point(full, phi, psi, a, ri).value <=
              transfer_pressure(full, psi) + 1e-10);
}

TEST_CASE("direct level pressure on the full shift") {
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const Potential phi = Potential::indicator(full, 1);
    const Potential zero = Potential::constant(full, 0.0);

    // spec-default schedule at the central level
    const DeltaSchedule dflt{};
    const auto ns = range(8, 20);
    const PressureEstimate half = direct_level_pressure(full, phi, zero, 0.5, dflt, ns);
    CHECK(std::abs(half.value - std::log(2.0)) <= 0.02);

    // independent binomial oracle for the restricted sums
    for (std::size_t i = 0; i < half.n_all.size(); ++i) {
        const int n = half.n_all[i];
        const double delta = dflt.at(n);
        std::uint64_t total = 0;
        for (int j = 0; j <= n; ++j)
            if (std::abs(double(j) / n - 0.5) <= delta) total += oracle::binomial(n, j);
        CHECK(half.log_sums[i] == doctest::Approx(std::log(double(total))).epsilon(1e-12));
    }

    // alpha = 1 with a window that only absorbs rounding: the single word 1^n
    const DeltaSchedule tight{0.0, 0.02};
    const PressureEstimate top = direct_level_pressure(full, phi, zero, 1.0, tight, ns);
    CHECK(top.value == doctest::Approx(0.0));
    for (std::uint64_t c : top.counts) CHECK(c == 1);

    // psi = phi at the central level: slope log 2 + 1/2 with a tight window
    const auto ns22 = range(8, 22);
    const PressureEstimate both = direct_level_pressure(full, phi, phi, 0.5, tight, ns22);
    CHECK(std::abs(both.value - (std::log(2.0) + 0.5)) <= 0.03);
    CHECK(std::abs(both.value - 1.193147) <= 0.03);

    // all-empty level set
    CHECK_THROWS_AS(direct_level_pressure(full, phi, zero, 1.5, tight, ns), InfeasibleError);
}

TEST_CASE("direct level pressure on the golden mean against the closed count") {
    const ShiftSpace gm = ShiftSpace::golden_mean();
    const Potential phi = Potential::indicator(gm, 1);
    const Potential zero = Potential::constant(gm, 0.0);
    const DeltaSchedule sched{0.12, 0.02};
    const auto ns = range(8, 24);
    const PressureEstimate est = direct_level_pressure(gm, phi, zero, 0.3, sched, ns);
    // oracle: golden-mean words with j ones number C(n-j+1, j)
    for (std::size_t i = 0; i < est.n_all.size(); ++i) {
        const int n = est.n_all[i];
        const double delta = sched.at(n);
        std::uint64_t total = 0;
        for (int j = 0; j <= n; ++j)
            if (std::abs(double(j) / n - 0.3) <= delta) total += oracle::golden_count(n, j);
        CHECK(est.log_sums[i] == doctest::Approx(std::log(double(total))).epsilon(1e-12));
    }
}

TEST_CASE("monotonicity: enlarging delta never shrinks a restricted sum") {
    const ShiftSpace gm = ShiftSpace::golden_mean();
    const Potential phi = Potential::indicator(gm, 1);
    const Potential psi = Potential::from_dense(gm, 1, {0.1, 0.4});
    const auto ns = range(8, 16);
    const PressureEstimate small = direct_level_pressure(gm, phi, psi, 0.25,
                                                         DeltaSchedule{0.2, 0.02}, ns);
    const PressureEstimate large = direct_level_pressure(gm, phi, psi, 0.25,
                                                         DeltaSchedule{0.4, 0.04}, ns);
    REQUIRE(small.n_all.size() <= large.n_all.size());
    for (std::size_t i = 0; i < small.n_all.size(); ++i)
        for (std::size_t j = 0; j < large.n_all.size(); ++j)
            if (large.n_all[j] == small.n_all[i])
                CHECK(large.log_sums[j] >= small.log_sums[i] - 1e-12);
}

TEST_CASE("variational-principle equality at desk scale: direct vs legendre") {
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const Potential phi = Potential::indicator(full, 1);
    const Potential zero = Potential::constant(full, 0.0);
    const RotationInterval ri = rotation_interval(full, phi);
    const DeltaSchedule sched{0.35, 0.02};
    const auto ns = range(8, 20);
    for (double a : {0.3, 0.5, 0.7}) {
        const double direct = direct_level_pressure(full, phi, zero, a, sched, ns).value;
        const double leg = legendre_point(full, phi, zero, a, ri).value;
        CHECK(std::abs(direct - leg) <= 0.05); // tightened to 0.03 at n=24 in acceptance
    }
}

TEST_CASE("BS dimension") {
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const ShiftSpace gm = ShiftSpace::golden_mean();

    const Potential half = Potential::constant(full, 0.5);
    CHECK(bs_dimension_space(full, half) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-8));
    CHECK(bs_dimension_space(full, half) == doctest::Approx(1.386294).epsilon(1e-6));

    const Potential one_g = Potential::constant(gm, 1.0);
    CHECK(bs_dimension_space(gm, one_g) ==
          doctest::Approx(oracle::golden_mean_entropy()).epsilon(1e-8));

    // level set: root of H(alpha) - s
    const Potential phi = Potential::indicator(full, 1);
    const Potential one_f = Potential::constant(full, 1.0);
    CHECK(bs_dimension_level(full, phi, 0.3, one_f) ==
          doctest::Approx(oracle::binary_entropy(0.3)).epsilon(1e-7));
    CHECK(bs_dimension_level(full, phi, 0.3, one_f) == doctest::Approx(0.610864).epsilon(1e-5));

    // scaling: doubling psi halves the dimension
    const Potential psi = Potential::from_dense(full, 1, {0.8, 1.3});
    const Potential psi2 = combine(full, 2.0, psi, 0.0, psi);
    const double d1 = bs_dimension_space(full, psi);
    const double d2 = bs_dimension_space(full, psi2);
    CHECK(std::abs(d2 - 0.5 * d1) <= 1e-8);

    // errors: psi not strictly positive; infeasible alpha
    const Potential bad = Potential::from_dense(full, 1, {0.0, 1.0});
    CHECK_THROWS_AS(bs_dimension_space(full, bad), Error);
    CHECK_THROWS_AS(bs_dimension_level(full, phi, 1.4, one_f), InfeasibleError);
}
