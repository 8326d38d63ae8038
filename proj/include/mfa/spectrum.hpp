// spectrum.hpp — both sides of the conditional variational principle:
// Legendre-transform spectra, a brute-force Markov-measure oracle, direct
// level-set pressure from restricted partition sums, rotation intervals and
// BS dimension.
#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "mfa/potential.hpp"
#include "mfa/pressure.hpp"
#include "mfa/shift_space.hpp"

namespace mfa {

// Achievable range of the constraint integral over invariant measures,
// realized by extreme mean cycles (Karp; ties broken toward smaller vertex
// indices). Witness cycles are stored as one period each.
struct RotationInterval {
    double alpha_min = 0.0;
    double alpha_max = 0.0;
    Word min_cycle;
    Word max_cycle;
};
RotationInterval rotation_interval(const ShiftSpace& space, const Potential& pot);

enum class AlphaStatus { Interior, Endpoint, Infeasible };

struct SpectrumPoint {
    double alpha = 0.0;
    double value = 0.0; // NaN when infeasible
    double q = 0.0;     // optimizer; NaN at endpoints / infeasible
    AlphaStatus status = AlphaStatus::Interior;
};

struct SpectrumCurve {
    std::vector<SpectrumPoint> points;
    std::string note; // e.g. "coding-based, distortion-uncorrected"
};

struct LegendreOptions {
    double q_cap = 1048576.0; // 2^20
    double endpoint_tol = 1e-12;
    int bisection_steps = 200;
};

// F(alpha) = inf_q [P(q phi + psi) - q alpha] by bisection on the monotone
// derivative dP/dq. Endpoints return the witness-cycle value (entropy 0 plus
// the psi-average along the cycle); alpha outside the closed rotation
// interval is flagged infeasible with value NaN.
SpectrumPoint legendre_point(const ShiftSpace& space, const Potential& phi, const Potential& psi,
                             double alpha, const RotationInterval& ri,
                             const LegendreOptions& opts = {});
SpectrumCurve legendre_spectrum(const ShiftSpace& space, const Potential& phi,
                                const Potential& psi, std::span<const double> alpha_grid,
                                const LegendreOptions& opts = {});

// Independent brute-force oracle for sup{h + int psi : int phi = alpha} over
// order-1 Markov measures: product-simplex grid plus shrinking local search.
struct VariationalResult {
    double value = 0.0;
    std::vector<std::vector<double>> matrix; // achieving stochastic matrix
    double constraint_violation = 0.0;
};
VariationalResult constrained_variational(const ShiftSpace& space, const Potential& phi,
                                          const Potential& psi, double alpha,
                                          int grid_resolution = 48);

// delta_n = max(delta_min, c / sqrt(n)); positive and nonincreasing.
struct DeltaSchedule {
    double c = 1.0;
    double delta_min = 0.01;
    double at(int n) const { return std::max(delta_min, c / std::sqrt(double(n))); }
};

// Restricted partition sums over n-words with |S_n phi / n - alpha| <= delta_n,
// weighted by exp(S_n psi); slope fit as in counting_pressure. Empty levels
// are skipped and reported; all-empty raises InfeasibleError.
PressureEstimate direct_level_pressure(const ShiftSpace& space, const Potential& phi,
                                       const Potential& psi, double alpha,
                                       const DeltaSchedule& schedule, std::span<const int> n_range,
                                       int workers = 1, int max_n_budget = 26);

// Root s of P(X, -s psi) = 0 (whole space) or of the constrained spectrum
// F_s(alpha) = sup{h - s int psi : int phi = alpha} (level set). psi must be
// strictly positive.
double bs_dimension_space(const ShiftSpace& space, const Potential& psi,
                          double root_tol = 1e-11);
double bs_dimension_level(const ShiftSpace& space, const Potential& phi, double alpha,
                          const Potential& psi, double root_tol = 1e-11);

// Max of F[i-1] - 2F[i] + F[i+1] over consecutive interior triples; concavity
// holds when this is <= slack.
double max_second_difference(const SpectrumCurve& curve);

} // namespace mfa
