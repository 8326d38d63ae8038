// pressure.hpp — topological pressure two ways: spectral radius of the
// weighted transfer matrix (Collatz–Wielandt certified power iteration) and
// growth-rate fits of separated-set partition sums.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mfa/potential.hpp"
#include "mfa/shift_space.hpp"

namespace mfa {

// Streaming log-sum-exp accumulator; merge order is fixed by the caller.
struct LogSumAcc {
    double max_log = -1e308;
    double sum = 0.0; // sum of exp(x - max_log)

    void add(double x) {
        if (x <= max_log) {
            sum += std::exp(x - max_log);
        } else {
            sum = sum * std::exp(max_log - x) + 1.0;
            max_log = x;
        }
    }
    void merge(const LogSumAcc& o) {
        if (o.sum == 0.0) return;
        if (o.max_log <= max_log) {
            sum += o.sum * std::exp(o.max_log - max_log);
        } else {
            sum = sum * std::exp(max_log - o.max_log) + o.sum;
            max_log = o.max_log;
        }
    }
    bool empty() const { return sum == 0.0; }
    double log_total() const;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};
SlopeFit least_squares_slope(std::span<const double> xs, std::span<const double> ys);

struct PressureEstimate {
    double value = 0.0;                 // fitted slope
    std::vector<int> n_all;             // n values with data
    std::vector<double> log_sums;       // log partition sum per n
    std::vector<std::uint64_t> counts;  // contributing words per n
    std::vector<int> n_fit;             // subrange used for the slope
    double residual = 0.0;              // RMS residual over the fit range
    std::vector<int> skipped;           // n values with an empty level set
};

// log of the Perron eigenvalue of B_ij = A_ij exp(pot on edge ij); potentials
// of memory 1 weight the source symbol. Non-primitive matrices fall back to
// the max over communicating classes. Potential memory must be <= 2 (recode
// higher memory onto an edge shift first).
double transfer_pressure(const ShiftSpace& space, const Potential& pot,
                         double rel_tol = 1e-13);

struct TransferEigen {
    double log_lambda = 0.0;
    std::vector<int> vertices;  // the communicating class realizing the max
    std::vector<double> right;  // Perron vectors indexed like `vertices`
    std::vector<double> left;
    double cw_gap = 0.0; // certified relative Collatz–Wielandt bracket width
    int iterations = 0;
};
TransferEigen transfer_eigendata(const ShiftSpace& space, const Potential& pot,
                                 double rel_tol = 1e-13);

// P(q*phi + psi) and its q-derivative = integral of phi against the
// equilibrium measure of the dominant class (from left/right eigenvectors).
struct PressureDeriv {
    double value;
    double deriv;
};
PressureDeriv pressure_and_derivative(const ShiftSpace& space, const Potential& phi,
                                      const Potential& psi, double q);

// Integral of `obs` against the equilibrium Markov measure of `weight`.
// Requires an irreducible transition matrix.
double equilibrium_average(const ShiftSpace& space, const Potential& weight,
                           const Potential& obs);

// Slope fit of log sum_{|w|=n} exp(S_n pot(w)) against n, least squares over
// the largest 2/3 of the range. Needs at least 3 points and n <= max_n_budget.
PressureEstimate counting_pressure(const ShiftSpace& space, const Potential& pot,
                                   std::span<const int> n_range, int workers = 1,
                                   int max_n_budget = 26);

// DFS over admissible n-words carrying running Birkhoff sums for one or two
// potentials (periodic seam added at the leaf). fn(word, sum_a, sum_b).
template <class F>
void scan_words_with_sums(const ShiftSpace& space, int n, const Potential* a, const Potential* b,
                          F&& fn, std::span<const Symbol> prefix = {});

// Prefix depth used to split enumeration across workers (0 when workers<=1).
int partition_depth(const ShiftSpace& space, int n, int workers);

// ---- implementation of the template ----

namespace detail {

template <class F>
void sum_dfs(const ShiftSpace& space, Word& buf, int n, const Potential* a, const Potential* b,
             double sa, double sb, F& fn) {
    const int L = static_cast<int>(buf.size());
    if (L == n) {
        // periodic seam: windows that wrap past the end
        double ea = 0.0, eb = 0.0;
        const int ma = a ? a->memory() : 1;
        const int mb = b ? b->memory() : 1;
        const int m = std::max(ma, mb);
        if (m > 1) {
            Word window(m);
            for (int i = n - m + 1; i < n; ++i) {
                if (i < 0) continue;
                for (int j = 0; j < m; ++j) window[j] = buf[(i + j) % n];
                if (a && i >= n - ma + 1)
                    ea += a->eval(std::span<const Symbol>(window.data(), ma));
                if (b && i >= n - mb + 1)
                    eb += b->eval(std::span<const Symbol>(window.data(), mb));
            }
        }
        fn(std::span<const Symbol>(buf.data(), buf.size()), sa + ea, sb + eb);
        return;
    }
    const int k = space.alphabet_size();
    for (int c = 0; c < k; ++c) {
        if (L > 0 && !space.allowed(buf.back(), Symbol(c))) continue;
        buf.push_back(Symbol(c));
        double na = sa, nb = sb;
        if (a && L + 1 >= a->memory()) {
            const int start = L + 1 - a->memory();
            na += a->eval(std::span<const Symbol>(buf.data() + start, a->memory()));
        }
        if (b && L + 1 >= b->memory()) {
            const int start = L + 1 - b->memory();
            nb += b->eval(std::span<const Symbol>(buf.data() + start, b->memory()));
        }
        sum_dfs(space, buf, n, a, b, na, nb, fn);
        buf.pop_back();
    }
}

} // namespace detail

template <class F>
void scan_words_with_sums(const ShiftSpace& space, int n, const Potential* a, const Potential* b,
                          F&& fn, std::span<const Symbol> prefix) {
    if (n < 1) throw Error("word length must be at least 1");
    if (a && a->memory() > n) throw Error("potential memory exceeds word length");
    if (b && b->memory() > n) throw Error("potential memory exceeds word length");
    Word buf(prefix.begin(), prefix.end());
    if (!buf.empty() && !space.admissible(buf)) return;
    buf.reserve(n);
    double sa = 0.0, sb = 0.0;
    const int L = static_cast<int>(buf.size());
    if (a)
        for (int i = 0; i + a->memory() <= L; ++i)
            sa += a->eval(std::span<const Symbol>(buf.data() + i, a->memory()));
    if (b)
        for (int i = 0; i + b->memory() <= L; ++i)
            sb += b->eval(std::span<const Symbol>(buf.data() + i, b->memory()));
    detail::sum_dfs(space, buf, n, a, b, sa, sb, fn);
}

} // namespace mfa
