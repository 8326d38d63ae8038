// markov.cpp
#include "mfa/markov.hpp"

#include <cmath>

namespace mfa {

std::vector<double> stationary_vector(const std::vector<std::vector<double>>& P) {
    const int k = static_cast<int>(P.size());
    std::vector<double> pi(k, 1.0 / k), next(k, 0.0);
    // iterate pi <- pi * (I + P)/2; the damping makes periodic chains converge
    for (int it = 0; it < 200000; ++it) {
        for (int j = 0; j < k; ++j) next[j] = 0.5 * pi[j];
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) next[j] += 0.5 * pi[i] * P[i][j];
        double norm = 0.0, diff = 0.0;
        for (int j = 0; j < k; ++j) norm += next[j];
        for (int j = 0; j < k; ++j) next[j] /= norm;
        for (int j = 0; j < k; ++j) diff = std::max(diff, std::abs(next[j] - pi[j]));
        pi.swap(next);
        if (diff < 1e-15) break;
    }
    return pi;
}

MarkovMeasure MarkovMeasure::from_matrix(const ShiftSpace& space,
                                         const std::vector<std::vector<double>>& P) {
    const int k = space.alphabet_size();
    if (static_cast<int>(P.size()) != k) throw Error("markov matrix has wrong dimension");
    std::vector<double> flat(std::size_t(k) * k, 0.0);
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(P[i].size()) != k) throw Error("markov matrix row has wrong length");
        double row = 0.0;
        for (int j = 0; j < k; ++j) {
            const double v = P[i][j];
            if (v < 0.0) throw Error("markov matrix has a negative entry");
            if (v > 0.0 && !space.allowed(Symbol(i), Symbol(j)))
                throw Error("markov matrix puts mass on a forbidden transition " +
                            std::to_string(i) + "->" + std::to_string(j));
            flat[std::size_t(i) * k + j] = v;
            row += v;
        }
        if (std::abs(row - 1.0) > 1e-12)
            throw Error("markov matrix row " + std::to_string(i) + " sums to " +
                        std::to_string(row));
    }
    std::vector<double> pi = stationary_vector(P);
    // validate pi P = pi
    double resid = 0.0;
    for (int j = 0; j < k; ++j) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += pi[i] * P[i][j];
        resid = std::max(resid, std::abs(s - pi[j]));
    }
    if (resid > 1e-10) throw Error("stationary vector residual " + std::to_string(resid));
    return MarkovMeasure(k, std::move(flat), std::move(pi));
}

MarkovMeasure MarkovMeasure::bernoulli(const ShiftSpace& space, double p) {
    if (space.alphabet_size() != 2) throw Error("bernoulli measure needs a 2-symbol shift");
    if (p < 0.0 || p > 1.0) throw Error("bernoulli parameter outside [0,1]");
    std::vector<std::vector<double>> P = {{1.0 - p, p}, {1.0 - p, p}};
    return from_matrix(space, P);
}

double markov_entropy(const MarkovMeasure& m) {
    const int k = m.alphabet_size();
    double h = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const double pij = m.p(i, j);
            if (pij > 0.0) h -= m.pi(i) * pij * std::log(pij);
        }
    return h;
}

double markov_integral(const MarkovMeasure& m, const Potential& pot) {
    const int k = m.alphabet_size();
    if (pot.alphabet_size() != k) throw Error("potential lives on a different alphabet");
    if (pot.memory() > m.order() + 1)
        throw Error("markov_integral: potential memory " + std::to_string(pot.memory()) +
                    " exceeds order+1 = " + std::to_string(m.order() + 1));
    if (pot.memory() == 1) {
        double s = 0.0;
        Word w(1);
        for (int i = 0; i < k; ++i) {
            w[0] = Symbol(i);
            s += m.pi(i) * pot.eval(w);
        }
        return s;
    }
    double s = 0.0;
    Word w(2);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const double mass = m.pi(i) * m.p(i, j);
            if (mass == 0.0) continue;
            w[0] = Symbol(i);
            w[1] = Symbol(j);
            s += mass * pot.eval(w);
        }
    return s;
}

} // namespace mfa
