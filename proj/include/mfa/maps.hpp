// maps.hpp — the application systems as numerical maps: the intermittent
// interval map, expanding torus maps, and the quadratic skew product;
// orbit ensembles, empirical Birkhoff spectra, and shadowing-gap search.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfa/shift_space.hpp"
#include "mfa/spectrum.hpp"

namespace mfa {

// T(x) = x(1 + (2x)^alpha) on [0,1/2], 2x - 1 on (1/2,1]; neutral fixed point
// at 0, T(1/2) = 1 exactly.
struct MPMap {
    double alpha = 0.5;

    double apply(double x) const;
    double inverse_left(double y) const;  // bisection on [0,1/2] to 1e-14
    double inverse_right(double y) const; // (y+1)/2
    std::pair<double, double> inverse_branches(double y) const;
};

// Diagonal expanding torus endomorphism: coordinate i multiplies by d_i,
// |d_i| >= 2 (topological exactness comes with the expansion).
struct TorusExpandingMap {
    std::vector<int> diag;

    explicit TorusExpandingMap(std::vector<int> d);
    int dimension() const { return static_cast<int>(diag.size()); }
    std::vector<double> apply(std::span<const double> x) const;
};

// (theta, x) -> (d theta mod 1, 1 - a x^2 + alpha cos(2 pi theta)).
struct VianaMap {
    int d = 16;
    double a = 2.0;    // stand-in parameter; the Misiurewicz condition is
                       // reported, not verified
    double alpha = 0.01;

    VianaMap() = default;
    VianaMap(int d_, double a_, double alpha_);
    std::pair<double, double> apply(double theta, double x) const;

    struct InvarianceCheck {
        int samples = 0;
        int violations = 0; // orbits leaving the test window
        double window_lo = 0.0, window_hi = 0.0;
    };
    InvarianceCheck check_second_coordinate(int samples, int horizon, std::uint64_t seed) const;
};

// One-dimensional full-branch system with monotone inverse branches; the
// shared interface for the interval-map machinery below.
struct Interval1D {
    std::function<double(double)> f;
    int branches = 2;
    std::function<int(double)> branch_of;
    std::function<double(double, int)> inverse; // monotone increasing per branch
    std::vector<double> boundaries;             // branch domains, size branches+1
    bool circle = false;                        // wrap the metric at 1

    // Mantissa refresh used by orbit ensembles. Piecewise-linear dyadic maps
    // shift information out of the double mantissa and every representable
    // orbit collapses onto 0 after ~53 steps; re-randomizing the vacated low
    // bits (scale ~2^-50) keeps ensemble statistics those of Lebesgue-typical
    // points. Zero disables it.
    double ensemble_noise = 0.0;
};
Interval1D mp_system(const MPMap& map);
Interval1D doubling_system(int d); // circle map x -> d x mod 1

double circle_distance(double a, double b);

// ---- orbit ensembles and the empirical spectrum ----

struct EnsembleParams {
    int size = 100000;
    int n = 20;
    int bins = 20;
    std::uint64_t seed = 1;
    int transient = 100;
    double range_lo = 0.0; // histogram support; lo >= hi means auto from data
    double range_hi = 0.0;
    int workers = 1; // members are seeded independently, so the averages are
                     // identical for every worker count
};

struct RateHistogram {
    std::vector<double> edges;        // bins + 1
    std::vector<std::int64_t> counts; // per bin
    std::vector<double> fraction;
    std::vector<double> rate; // NaN on empty bins; heuristic estimate
    std::int64_t total = 0;
    int n = 0;
    double avg_variance = 0.0; // n * var(sample averages)
    std::string method = "gaussian_window_heuristic";
    std::uint64_t seed = 0;
};

// Seeded orbit ensemble: one n-step Birkhoff average per member, after the
// transient discard. Statistics are deterministic given the seed.
struct OrbitEnsemble {
    EnsembleParams params;
    std::vector<double> averages;
};
OrbitEnsemble run_ensemble(const Interval1D& sys, const std::function<double(double)>& obs,
                           const EnsembleParams& params);
OrbitEnsemble run_ensemble_viana(const VianaMap& map,
                                 const std::function<double(double, double)>& obs,
                                 const EnsembleParams& params);

// Histogram of the ensemble's averages with the large-deviation rate estimate
//   R(bin) = -(1/n) [log fraction + 0.5 log(2 pi n v)]
// (local-limit prefactor removed; heuristic, flagged in the output).
RateHistogram rate_histogram(const OrbitEnsemble& ensemble);
RateHistogram empirical_spectrum(const Interval1D& sys, const std::function<double(double)>& obs,
                                 const EnsembleParams& params);
RateHistogram empirical_spectrum_viana(const VianaMap& map,
                                       const std::function<double(double, double)>& obs,
                                       const EnsembleParams& params);

// ---- shadowing gap ----

struct OrbitSegment {
    double x = 0.0;
    int n = 1;
};

struct SpecGapResult {
    bool found = false;
    int gap = -1;
    double witness = 0.0;
    double max_shadow_dist = 0.0; // forward-verified over both windows
    int p_max = 0;
    std::string diagnostics;
};

// Smallest p <= p_max such that some z eps-shadows segment 1 for n1 steps and,
// after p further steps, segment 2 for n2 steps. The second segment's tube is
// pulled back through inverse branches and met against the forward branch
// images of the first segment's tube core (interval arithmetic throughout);
// the witness is then verified by a forward-orbit check.
SpecGapResult spec_gap_estimate(const Interval1D& sys, const OrbitSegment& seg1,
                                const OrbitSegment& seg2, double eps, int p_max = 40);

// Coding-based level spectrum of the intermittent map: cylinders of depth n
// through inverse branches, restricted counting over |S_n obs / n - alpha|
// <= delta_n. Output marked "coding-based, distortion-uncorrected".
SpectrumCurve mp_level_spectrum(const MPMap& map, std::span<const double> alpha_grid,
                                std::span<const int> n_range, const DeltaSchedule& schedule,
                                int max_depth = 22);

} // namespace mfa
