// markov.hpp — order-1 Markov measures compatible with a transition matrix:
// stationary vectors, entropy, integrals of locally constant potentials.
#pragma once

#include <vector>

#include "mfa/potential.hpp"
#include "mfa/shift_space.hpp"

namespace mfa {

// Stochastic matrix supported on the allowed transitions together with a
// stationary row vector. Rows sum to 1 within 1e-12, pi P = pi within 1e-10.
class MarkovMeasure {
public:
    // Computes the stationary vector and validates support/stochasticity.
    static MarkovMeasure from_matrix(const ShiftSpace& space,
                                     const std::vector<std::vector<double>>& P);
    // Bernoulli(p) on the full 2-shift: P(x_i = 1) = p, i.i.d.
    static MarkovMeasure bernoulli(const ShiftSpace& space, double p);

    int order() const { return 1; }
    int alphabet_size() const { return k_; }
    double p(int i, int j) const { return p_[std::size_t(i) * k_ + j]; }
    double pi(int i) const { return pi_[i]; }
    const std::vector<double>& stationary() const { return pi_; }

private:
    MarkovMeasure(int k, std::vector<double> p, std::vector<double> pi)
        : k_(k), p_(std::move(p)), pi_(std::move(pi)) {}

    int k_;
    std::vector<double> p_;  // row-major k*k
    std::vector<double> pi_; // stationary, sums to 1
};

// -sum_i pi_i sum_j P_ij log P_ij with 0 log 0 = 0. Natural logarithm.
double markov_entropy(const MarkovMeasure& m);

// Integral of a potential of memory <= 2 against the Markov measure.
double markov_integral(const MarkovMeasure& m, const Potential& pot);

// Stationary vector of a stochastic matrix (damped power iteration; handles
// periodic chains). Exposed for reuse and tests.
std::vector<double> stationary_vector(const std::vector<std::vector<double>>& P);

} // namespace mfa
