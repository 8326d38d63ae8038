// pressure.cpp
#include "mfa/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mfa/parallel.hpp"
#include "mfa/words.hpp"

namespace mfa {

double LogSumAcc::log_total() const {
    if (sum == 0.0) return -1e308;
    return max_log + std::log(sum);
}

SlopeFit least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw Error("slope fit needs >= 2 points");
    const int n = static_cast<int>(xs.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        rss += r * r;
    }
    fit.rms_residual = std::sqrt(rss / n);
    return fit;
}

namespace {

// edge weight matrix B_ij = A_ij * exp(pot on edge ij)
std::vector<double> weight_matrix(const ShiftSpace& space, const Potential& pot) {
    const int k = space.alphabet_size();
    if (pot.memory() > 2)
        throw Error("transfer operator needs potential memory <= 2; "
                    "recode higher memory onto an edge shift first");
    std::vector<double> B(std::size_t(k) * k, 0.0);
    Word w;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (!space.allowed(Symbol(i), Symbol(j))) continue;
            if (pot.memory() == 1) {
                w = {Symbol(i)};
            } else {
                w = {Symbol(i), Symbol(j)};
            }
            B[std::size_t(i) * k + j] = std::exp(pot.eval(w));
        }
    return B;
}

// Kosaraju strongly connected components of the allowed-transition digraph.
std::vector<std::vector<int>> scc_components(const ShiftSpace& space) {
    const int k = space.alphabet_size();
    std::vector<int> order;
    std::vector<char> seen(k, 0);
    std::function<void(int)> dfs1 = [&](int v) {
        seen[v] = 1;
        for (int u = 0; u < k; ++u)
            if (space.allowed(Symbol(v), Symbol(u)) && !seen[u]) dfs1(u);
        order.push_back(v);
    };
    for (int v = 0; v < k; ++v)
        if (!seen[v]) dfs1(v);
    std::vector<int> comp(k, -1);
    int ncomp = 0;
    std::function<void(int)> dfs2 = [&](int v) {
        comp[v] = ncomp;
        for (int u = 0; u < k; ++u)
            if (space.allowed(Symbol(u), Symbol(v)) && comp[u] < 0) dfs2(u);
    };
    for (int i = k - 1; i >= 0; --i) {
        const int v = order[i];
        if (comp[v] < 0) {
            dfs2(v);
            ++ncomp;
        }
    }
    std::vector<std::vector<int>> comps(ncomp);
    for (int v = 0; v < k; ++v) comps[comp[v]].push_back(v);
    for (auto& c : comps) std::sort(c.begin(), c.end());
    return comps;
}

struct ClassEigen {
    double log_lambda;
    std::vector<double> right, left;
    double cw_gap;
    int iterations;
};

// Certified power iteration on the restriction of B to one communicating
// class. Shifting by s*I keeps periodic classes convergent; the
// Collatz–Wielandt quotients bracket the eigenvalue for any positive vector.
ClassEigen class_eigen(const std::vector<double>& B, int k, const std::vector<int>& verts,
                       double rel_tol) {
    const int m = static_cast<int>(verts.size());
    ClassEigen out;
    if (m == 1) {
        const double self = B[std::size_t(verts[0]) * k + verts[0]];
        if (self <= 0.0) {
            out.log_lambda = -1e308; // transient singleton, no cycle
            out.right = {1.0};
            out.left = {1.0};
            out.cw_gap = 0.0;
            out.iterations = 0;
            return out;
        }
        out.log_lambda = std::log(self);
        out.right = {1.0};
        out.left = {1.0};
        out.cw_gap = 0.0;
        out.iterations = 0;
        return out;
    }
    std::vector<double> M(std::size_t(m) * m, 0.0);
    double shift = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            M[std::size_t(i) * m + j] = B[std::size_t(verts[i]) * k + verts[j]];
            shift = std::max(shift, M[std::size_t(i) * m + j]);
        }
    for (int i = 0; i < m; ++i) M[std::size_t(i) * m + i] += shift;

    auto iterate = [&](bool transpose, std::vector<double>& v, double& lambda, double& gap,
                       int& iters) {
        v.assign(m, 1.0);
        std::vector<double> w(m);
        const int cap = 100000;
        for (iters = 1; iters <= cap; ++iters) {
            double lo = 1e308, hi = 0.0, norm = 0.0;
            for (int i = 0; i < m; ++i) {
                double s = 0.0;
                for (int j = 0; j < m; ++j)
                    s += (transpose ? M[std::size_t(j) * m + i] : M[std::size_t(i) * m + j]) * v[j];
                w[i] = s;
                const double q = s / v[i];
                lo = std::min(lo, q);
                hi = std::max(hi, q);
                norm += s;
            }
            for (int i = 0; i < m; ++i) v[i] = w[i] / norm;
            lambda = 0.5 * (lo + hi);
            // certify relative to the unshifted eigenvalue lambda - shift
            gap = (hi - lo) / std::max(hi - shift, 1e-300);
            if (gap <= rel_tol) return;
        }
        throw Error("power iteration failed to converge within 100000 iterations");
    };

    double lam_r = 0.0, gap_r = 0.0, lam_l = 0.0, gap_l = 0.0;
    int it_r = 0, it_l = 0;
    iterate(false, out.right, lam_r, gap_r, it_r);
    std::vector<double> left;
    iterate(true, left, lam_l, gap_l, it_l);
    out.left = std::move(left);
    out.log_lambda = std::log(lam_r - shift);
    out.cw_gap = gap_r;
    out.iterations = it_r + it_l;
    return out;
}

} // namespace

TransferEigen transfer_eigendata(const ShiftSpace& space, const Potential& pot,
                                 double rel_tol) {
    const int k = space.alphabet_size();
    const std::vector<double> B = weight_matrix(space, pot);
    TransferEigen best;
    best.log_lambda = -1e308;
    for (const auto& verts : scc_components(space)) {
        ClassEigen ce = class_eigen(B, k, verts, rel_tol);
        if (ce.log_lambda > best.log_lambda) {
            best.log_lambda = ce.log_lambda;
            best.vertices = verts;
            best.right = std::move(ce.right);
            best.left = std::move(ce.left);
            best.cw_gap = ce.cw_gap;
            best.iterations = ce.iterations;
        }
    }
    if (best.log_lambda <= -1e307) throw Error("transfer matrix has no recurrent class");
    return best;
}

double transfer_pressure(const ShiftSpace& space, const Potential& pot, double rel_tol) {
    return transfer_eigendata(space, pot, rel_tol).log_lambda;
}

namespace {

// integral of obs against the equilibrium Markov measure of the class
double class_average(const ShiftSpace& space, const TransferEigen& eig, const Potential& weight,
                     const Potential& obs) {
    const int k = space.alphabet_size();
    const std::vector<double> B = weight_matrix(space, weight);
    const int m = static_cast<int>(eig.vertices.size());
    const double lambda = std::exp(eig.log_lambda);
    // pi_i ~ l_i r_i ; P_ij = B_ij r_j / (lambda r_i)
    double lr = 0.0;
    for (int i = 0; i < m; ++i) lr += eig.left[i] * eig.right[i];
    double avg = 0.0;
    Word w;
    for (int i = 0; i < m; ++i) {
        const double pi = eig.left[i] * eig.right[i] / lr;
        for (int j = 0; j < m; ++j) {
            const double bij = B[std::size_t(eig.vertices[i]) * k + eig.vertices[j]];
            if (bij == 0.0) continue;
            const double pij = bij * eig.right[j] / (lambda * eig.right[i]);
            if (obs.memory() == 1) {
                w = {Symbol(eig.vertices[i])};
            } else {
                w = {Symbol(eig.vertices[i]), Symbol(eig.vertices[j])};
            }
            avg += pi * pij * obs.eval(w);
        }
    }
    return avg;
}

} // namespace

PressureDeriv pressure_and_derivative(const ShiftSpace& space, const Potential& phi,
                                      const Potential& psi, double q) {
    const Potential combined = combine(space, q, phi, 1.0, psi);
    TransferEigen eig = transfer_eigendata(space, combined);
    PressureDeriv pd;
    pd.value = eig.log_lambda;
    pd.deriv = class_average(space, eig, combined, phi);
    return pd;
}

double equilibrium_average(const ShiftSpace& space, const Potential& weight,
                           const Potential& obs) {
    TransferEigen eig = transfer_eigendata(space, weight);
    if (static_cast<int>(eig.vertices.size()) != space.alphabet_size())
        throw Error("equilibrium average requires an irreducible transition matrix");
    return class_average(space, eig, weight, obs);
}

int partition_depth(const ShiftSpace& space, int n, int workers) {
    if (workers <= 1) return 0;
    for (int d = 1; d < n; ++d)
        if (count_words(space, d) >= std::uint64_t(4) * workers) return d;
    return 0;
}

PressureEstimate counting_pressure(const ShiftSpace& space, const Potential& pot,
                                   std::span<const int> n_range, int workers,
                                   int max_n_budget) {
    if (n_range.size() < 3) throw Error("counting pressure needs an n-range of at least 3 points");
    PressureEstimate est;
    for (int n : n_range) {
        if (n < pot.memory()) throw Error("n below potential memory");
        if (n > max_n_budget)
            throw Error("n=" + std::to_string(n) + " exceeds enumeration budget " +
                        std::to_string(max_n_budget));
        const int pd = partition_depth(space, n, workers);
        LogSumAcc total;
        if (pd == 0) {
            scan_words_with_sums(space, n, &pot, nullptr,
                                 [&](std::span<const Symbol>, double s, double) { total.add(s); });
        } else {
            const std::vector<Word> prefixes = enumerate_words(space, pd);
            std::vector<LogSumAcc> acc(prefixes.size());
            run_blocks(workers, static_cast<int>(prefixes.size()), [&](int b) {
                scan_words_with_sums(
                    space, n, &pot, nullptr,
                    [&](std::span<const Symbol>, double s, double) { acc[b].add(s); },
                    prefixes[b]);
            });
            for (const auto& a : acc) total.merge(a);
        }
        est.n_all.push_back(n);
        est.log_sums.push_back(total.log_total());
        est.counts.push_back(count_words(space, n));
    }
    // fit over the largest 2/3 of the range, discarding small-n transients
    const int L = static_cast<int>(est.n_all.size());
    const int take = std::max(3, (2 * L + 2) / 3);
    const int from = L - std::min(take, L);
    std::vector<double> xs, ys;
    for (int i = from; i < L; ++i) {
        xs.push_back(est.n_all[i]);
        ys.push_back(est.log_sums[i]);
        est.n_fit.push_back(est.n_all[i]);
    }
    SlopeFit fit = least_squares_slope(xs, ys);
    est.value = fit.slope;
    est.residual = fit.rms_residual;
    return est;
}

} // namespace mfa
