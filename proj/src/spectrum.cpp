// spectrum.cpp
#include "mfa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "mfa/markov.hpp"
#include "mfa/parallel.hpp"
#include "mfa/words.hpp"

namespace mfa {

namespace {

constexpr double kNegInf = -1e308;

double edge_value(const Potential& pot, Symbol i, Symbol j) {
    if (pot.memory() == 1) {
        const Symbol w[1] = {i};
        return pot.eval(std::span<const Symbol>(w, 1));
    }
    const Symbol w[2] = {i, j};
    return pot.eval(std::span<const Symbol>(w, 2));
}

struct MeanCycle {
    double mean = kNegInf;
    Word cycle;
};

// Karp max mean cycle over one strongly connected component, with a witness
// cycle extracted from the tight subgraph of Bellman potentials. Ties go to
// the smallest vertex index.
MeanCycle karp_max_mean(const ShiftSpace& space, const Potential& pot,
                        const std::vector<int>& verts, double sign) {
    const int m = static_cast<int>(verts.size());
    std::vector<int> local(space.alphabet_size(), -1);
    for (int i = 0; i < m; ++i) local[verts[i]] = i;

    struct Edge {
        int from, to;
        double w;
    };
    std::vector<Edge> edges;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (space.allowed(Symbol(verts[i]), Symbol(verts[j])))
                edges.push_back({i, j, sign * edge_value(pot, Symbol(verts[i]), Symbol(verts[j]))});
    if (edges.empty()) return {};
    if (m == 1) {
        // single vertex: only the self-loop matters
        MeanCycle mc;
        mc.mean = edges[0].w;
        mc.cycle = {Symbol(verts[0])};
        return mc;
    }

    // d[k][v] = max weight over k-edge walks from vertex 0 to v
    std::vector<std::vector<double>> d(m + 1, std::vector<double>(m, kNegInf));
    d[0][0] = 0.0;
    for (int k = 1; k <= m; ++k)
        for (const Edge& e : edges)
            if (d[k - 1][e.from] > kNegInf / 2)
                d[k][e.to] = std::max(d[k][e.to], d[k - 1][e.from] + e.w);
    double mu = kNegInf;
    for (int v = 0; v < m; ++v) {
        if (d[m][v] <= kNegInf / 2) continue;
        double worst = 1e308;
        for (int k = 0; k < m; ++k) {
            if (d[k][v] <= kNegInf / 2) continue;
            worst = std::min(worst, (d[m][v] - d[k][v]) / double(m - k));
        }
        if (worst < 1e307) mu = std::max(mu, worst);
    }

    // tight subgraph under mu-shifted weights; Bellman longest-path potential
    const double scale = 1.0 + std::abs(mu) + pot.max_abs();
    const double tol = 1e-12 * scale;
    std::vector<double> h(m, 0.0);
    for (int round = 0; round < 2 * m + 2; ++round) {
        bool changed = false;
        for (const Edge& e : edges) {
            const double cand = h[e.from] + e.w - mu;
            if (cand > h[e.to] + tol) {
                h[e.to] = cand;
                changed = true;
            }
        }
        if (!changed) break;
    }
    // find a cycle of tight edges by depth-first search with backtracking,
    // smallest successors first; every cycle of tight edges has mean mu
    std::vector<std::vector<int>> tight(m);
    for (int v = 0; v < m; ++v)
        for (const Edge& e : edges)
            if (e.from == v && std::abs(h[v] + e.w - mu - h[e.to]) <= 4 * tol)
                tight[v].push_back(e.to);
    MeanCycle mc;
    std::vector<int> color(m, 0); // 0 white, 1 on stack, 2 done
    std::vector<int> stack, cycle;
    std::function<bool(int)> dfs = [&](int v) -> bool {
        color[v] = 1;
        stack.push_back(v);
        for (int u : tight[v]) {
            if (color[u] == 1) {
                auto it = std::find(stack.begin(), stack.end(), u);
                cycle.assign(it, stack.end());
                return true;
            }
            if (color[u] == 0 && dfs(u)) return true;
        }
        stack.pop_back();
        color[v] = 2;
        return false;
    };
    for (int start = 0; start < m && cycle.empty(); ++start)
        if (color[start] == 0) dfs(start);
    if (!cycle.empty()) {
        for (int x : cycle) mc.cycle.push_back(Symbol(verts[x]));
        double wsum = 0.0;
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            const int a = cycle[i];
            const int b = cycle[(i + 1) % cycle.size()];
            wsum += sign * edge_value(pot, Symbol(verts[a]), Symbol(verts[b]));
        }
        mc.mean = wsum / double(cycle.size());
    } else {
        mc.mean = mu; // no witness found (should not happen)
    }
    return mc;
}

} // namespace

RotationInterval rotation_interval(const ShiftSpace& space, const Potential& pot) {
    if (pot.memory() > 2) throw Error("rotation_interval needs potential memory <= 2");
    const int k = space.alphabet_size();
    // communicating classes via repeated reachability (k is small)
    std::vector<std::vector<std::uint8_t>> reach(k, std::vector<std::uint8_t>(k, 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) reach[i][j] = space.allowed(Symbol(i), Symbol(j));
    for (int mid = 0; mid < k; ++mid)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (reach[i][mid] && reach[mid][j]) reach[i][j] = 1;
    std::vector<int> comp(k, -1);
    int ncomp = 0;
    for (int i = 0; i < k; ++i) {
        if (comp[i] >= 0) continue;
        comp[i] = ncomp;
        for (int j = i + 1; j < k; ++j)
            if (reach[i][j] && reach[j][i] && comp[j] < 0) comp[j] = ncomp;
        ++ncomp;
    }
    RotationInterval ri;
    double best_max = kNegInf, best_min = -kNegInf;
    for (int c = 0; c < ncomp; ++c) {
        std::vector<int> verts;
        for (int i = 0; i < k; ++i)
            if (comp[i] == c) verts.push_back(i);
        // skip transient singletons without a self-loop
        if (verts.size() == 1 && !space.allowed(Symbol(verts[0]), Symbol(verts[0]))) continue;
        MeanCycle up = karp_max_mean(space, pot, verts, +1.0);
        if (up.mean > best_max) {
            best_max = up.mean;
            ri.max_cycle = up.cycle;
        }
        MeanCycle dn = karp_max_mean(space, pot, verts, -1.0);
        if (-dn.mean < best_min) {
            best_min = -dn.mean;
            ri.min_cycle = dn.cycle;
        }
    }
    if (best_max <= kNegInf / 2) throw Error("rotation_interval: no cycle found");
    ri.alpha_max = best_max + 0.0; // normalizes -0.0
    ri.alpha_min = best_min + 0.0;
    return ri;
}

namespace {

double cycle_average(const Potential& pot, const Word& cycle) {
    if (cycle.empty()) throw Error("empty witness cycle");
    if (static_cast<int>(cycle.size()) >= pot.memory()) return birkhoff_average(pot, cycle);
    // repeat the period until the word is long enough for the memory
    Word rep = cycle;
    while (static_cast<int>(rep.size()) < pot.memory())
        rep.insert(rep.end(), cycle.begin(), cycle.end());
    return birkhoff_average(pot, rep);
}

} // namespace

SpectrumPoint legendre_point(const ShiftSpace& space, const Potential& phi, const Potential& psi,
                             double alpha, const RotationInterval& ri,
                             const LegendreOptions& opts) {
    SpectrumPoint pt;
    pt.alpha = alpha;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (alpha < ri.alpha_min - opts.endpoint_tol || alpha > ri.alpha_max + opts.endpoint_tol) {
        pt.status = AlphaStatus::Infeasible;
        pt.value = nan;
        pt.q = nan;
        return pt;
    }
    if (std::abs(alpha - ri.alpha_min) <= opts.endpoint_tol) {
        pt.status = AlphaStatus::Endpoint;
        pt.value = cycle_average(psi, ri.min_cycle);
        pt.q = nan;
        return pt;
    }
    if (std::abs(alpha - ri.alpha_max) <= opts.endpoint_tol) {
        pt.status = AlphaStatus::Endpoint;
        pt.value = cycle_average(psi, ri.max_cycle);
        pt.q = nan;
        return pt;
    }
    // bracket: expand q until dP/dq straddles alpha
    double q_hi = 1.0;
    PressureDeriv at_hi = pressure_and_derivative(space, phi, psi, q_hi);
    while (at_hi.deriv < alpha && q_hi < opts.q_cap) {
        q_hi *= 2.0;
        at_hi = pressure_and_derivative(space, phi, psi, q_hi);
    }
    double q_lo = -1.0;
    PressureDeriv at_lo = pressure_and_derivative(space, phi, psi, q_lo);
    while (at_lo.deriv > alpha && q_lo > -opts.q_cap) {
        q_lo *= 2.0;
        at_lo = pressure_and_derivative(space, phi, psi, q_lo);
    }
    if (at_hi.deriv < alpha || at_lo.deriv > alpha) {
        // derivative never straddles alpha within the cap: report the nearest
        // endpoint value (the infimum is not attained)
        pt.status = AlphaStatus::Endpoint;
        const bool upper = at_hi.deriv < alpha;
        pt.value = cycle_average(psi, upper ? ri.max_cycle : ri.min_cycle);
        pt.q = nan;
        return pt;
    }
    double mid = 0.0;
    PressureDeriv at_mid{};
    for (int it = 0; it < opts.bisection_steps; ++it) {
        mid = 0.5 * (q_lo + q_hi);
        at_mid = pressure_and_derivative(space, phi, psi, mid);
        if (at_mid.deriv < alpha)
            q_lo = mid;
        else
            q_hi = mid;
        if (q_hi - q_lo < 1e-14 * std::max(1.0, std::abs(mid))) break;
    }
    pt.status = AlphaStatus::Interior;
    pt.q = mid;
    pt.value = at_mid.value - mid * alpha;
    return pt;
}

SpectrumCurve legendre_spectrum(const ShiftSpace& space, const Potential& phi,
                                const Potential& psi, std::span<const double> alpha_grid,
                                const LegendreOptions& opts) {
    const RotationInterval ri = rotation_interval(space, phi);
    SpectrumCurve curve;
    curve.points.reserve(alpha_grid.size());
    for (double a : alpha_grid) curve.points.push_back(legendre_point(space, phi, psi, a, ri, opts));
    return curve;
}

// ---- brute-force constrained optimization over Markov measures ----

namespace {

struct RowStructure {
    std::vector<int> targets; // allowed successor symbols
};

std::vector<std::vector<double>> assemble_matrix(const ShiftSpace& space,
                                                 const std::vector<RowStructure>& rows,
                                                 const std::vector<double>& theta) {
    const int k = space.alphabet_size();
    std::vector<std::vector<double>> P(k, std::vector<double>(k, 0.0));
    std::size_t pos = 0;
    for (int i = 0; i < k; ++i) {
        const auto& tg = rows[i].targets;
        const int d = static_cast<int>(tg.size());
        double rest = 1.0;
        for (int t = 0; t + 1 < d; ++t) {
            P[i][tg[t]] = theta[pos + t];
            rest -= theta[pos + t];
        }
        P[i][tg[d - 1]] = rest;
        pos += d - 1;
    }
    return P;
}

struct EvalResult {
    bool valid = false;
    double value = 0.0;     // h + int psi
    double integral = 0.0;  // int phi
};

EvalResult evaluate_candidate(const ShiftSpace& space, const std::vector<RowStructure>& rows,
                              const std::vector<double>& theta, const Potential& phi,
                              const Potential& psi) {
    EvalResult r;
    const int k = space.alphabet_size();
    std::vector<std::vector<double>> P = assemble_matrix(space, rows, theta);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (P[i][j] < 0.0) return r;
    std::vector<double> pi = stationary_vector(P);
    double h = 0.0, iphi = 0.0, ipsi = 0.0;
    Word w2(2);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const double pij = P[i][j];
            if (pij <= 0.0) continue;
            const double mass = pi[i] * pij;
            h -= mass * std::log(pij);
            w2[0] = Symbol(i);
            w2[1] = Symbol(j);
            iphi += mass * edge_value(phi, Symbol(i), Symbol(j));
            ipsi += mass * edge_value(psi, Symbol(i), Symbol(j));
        }
    r.valid = true;
    r.value = h + ipsi;
    r.integral = iphi;
    return r;
}

// enumerate compositions of `res` into d nonnegative parts
void compositions(int res, int d, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (d == 1) {
        cur.push_back(res);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= res; ++v) {
        cur.push_back(v);
        compositions(res - v, d - 1, cur, out);
        cur.pop_back();
    }
}

} // namespace

VariationalResult constrained_variational(const ShiftSpace& space, const Potential& phi,
                                          const Potential& psi, double alpha,
                                          int grid_resolution) {
    if (phi.memory() > 2 || psi.memory() > 2)
        throw Error("constrained_variational needs potential memory <= 2");
    if (grid_resolution < 2) throw Error("grid resolution must be at least 2");
    const int k = space.alphabet_size();
    const RotationInterval ri = rotation_interval(space, phi);
    if (alpha < ri.alpha_min - 1e-12 || alpha > ri.alpha_max + 1e-12)
        throw InfeasibleError("alpha outside the rotation interval [" +
                              std::to_string(ri.alpha_min) + ", " + std::to_string(ri.alpha_max) +
                              "]");
    // endpoints: the witness cycle carries the unique feasible measure
    auto cycle_result = [&](const Word& cycle) {
        VariationalResult vr;
        vr.value = cycle_average(psi, cycle);
        vr.matrix.assign(k, std::vector<double>(k, 0.0));
        for (std::size_t i = 0; i < cycle.size(); ++i)
            vr.matrix[cycle[i]][cycle[(i + 1) % cycle.size()]] = 1.0;
        // symbols off the cycle get an arbitrary allowed row
        for (int i = 0; i < k; ++i) {
            double s = 0.0;
            for (int j = 0; j < k; ++j) s += vr.matrix[i][j];
            if (s == 0.0)
                for (int j = 0; j < k; ++j)
                    if (space.allowed(Symbol(i), Symbol(j))) {
                        vr.matrix[i][j] = 1.0;
                        break;
                    }
        }
        vr.constraint_violation = 0.0;
        return vr;
    };
    if (std::abs(alpha - ri.alpha_min) <= 1e-12) return cycle_result(ri.min_cycle);
    if (std::abs(alpha - ri.alpha_max) <= 1e-12) return cycle_result(ri.max_cycle);

    std::vector<RowStructure> rows(k);
    int free_dims = 0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j)
            if (space.allowed(Symbol(i), Symbol(j))) rows[i].targets.push_back(j);
        free_dims += static_cast<int>(rows[i].targets.size()) - 1;
    }
    if (free_dims > 8) throw Error("constrained_variational: too many free parameters");

    // phase 1: full product grid
    std::vector<std::vector<std::vector<int>>> row_comps(k);
    double grid_total = 1.0;
    for (int i = 0; i < k; ++i) {
        std::vector<int> cur;
        compositions(grid_resolution, static_cast<int>(rows[i].targets.size()), cur, row_comps[i]);
        grid_total *= static_cast<double>(row_comps[i].size());
    }
    if (grid_total > 2e6) throw Error("constrained_variational: grid too large");

    const double span = std::max(ri.alpha_max - ri.alpha_min, 1e-12);
    const double slack0 = std::max(2.0 * span / grid_resolution, 1e-9);
    double best_value = kNegInf;
    std::vector<double> best_theta;
    double best_violation = 0.0;

    std::vector<int> idx(k, 0);
    std::vector<double> theta(free_dims, 0.0);
    std::function<void(int)> sweep = [&](int row) {
        if (row == k) {
            std::size_t pos = 0;
            for (int i = 0; i < k; ++i) {
                const auto& comp = row_comps[i][idx[i]];
                for (std::size_t t = 0; t + 1 < comp.size(); ++t)
                    theta[pos + t] = double(comp[t]) / grid_resolution;
                pos += comp.size() - 1;
            }
            EvalResult er = evaluate_candidate(space, rows, theta, phi, psi);
            if (er.valid && std::abs(er.integral - alpha) <= slack0 && er.value > best_value) {
                best_value = er.value;
                best_theta = theta;
                best_violation = std::abs(er.integral - alpha);
            }
            return;
        }
        for (std::size_t c = 0; c < row_comps[row].size(); ++c) {
            idx[row] = static_cast<int>(c);
            sweep(row + 1);
        }
    };
    sweep(0);
    if (best_theta.empty())
        throw InfeasibleError("empty feasible grid at resolution " +
                              std::to_string(grid_resolution) + "; use a finer resolution");

    // phase 2: shrinking local grids; the constraint slack shrinks with the
    // grid so the accepted point is pulled onto the constraint manifold
    double width = 1.5 / grid_resolution;
    for (int round = 0; round < 80; ++round) {
        const double slack = std::max(1e-10, 0.5 * width);
        const std::vector<double> base = best_theta;
        const std::vector<double> offsets = {-width, -0.5 * width, 0.0, 0.5 * width, width};
        std::vector<double> cand = base;
        double round_value = kNegInf, round_viol = 0.0; // best feasible this round
        std::vector<double> round_theta;
        double least_viol = 1e308, least_value = kNegInf; // fallback target
        std::vector<double> least_theta;
        std::function<void(int)> local = [&](int dim) {
            if (dim == free_dims) {
                EvalResult er = evaluate_candidate(space, rows, cand, phi, psi);
                if (!er.valid) return;
                const double viol = std::abs(er.integral - alpha);
                if (viol < least_viol - 1e-18 ||
                    (viol <= least_viol + 1e-18 && er.value > least_value)) {
                    least_viol = viol;
                    least_value = er.value;
                    least_theta = cand;
                }
                if (viol <= slack && er.value > round_value) {
                    round_value = er.value;
                    round_viol = viol;
                    round_theta = cand;
                }
                return;
            }
            for (double off : offsets) {
                const double v = base[dim] + off;
                if (v < 0.0 || v > 1.0) continue;
                cand[dim] = v;
                local(dim + 1);
            }
            cand[dim] = base[dim];
        };
        local(0);
        if (!round_theta.empty()) {
            best_theta = round_theta;
            best_value = round_value;
            best_violation = round_viol;
            width *= 0.45;
        } else if (!least_theta.empty()) {
            // no candidate met the slack: walk toward the manifold at this
            // width before shrinking further
            best_theta = least_theta;
            best_value = least_value;
            best_violation = least_viol;
        } else {
            width *= 0.45;
        }
    }

    VariationalResult vr;
    vr.value = best_value;
    vr.matrix = assemble_matrix(space, rows, best_theta);
    vr.constraint_violation = best_violation;
    return vr;
}

PressureEstimate direct_level_pressure(const ShiftSpace& space, const Potential& phi,
                                       const Potential& psi, double alpha,
                                       const DeltaSchedule& schedule, std::span<const int> n_range,
                                       int workers, int max_n_budget) {
    if (schedule.c < 0.0 || schedule.delta_min <= 0.0)
        throw Error("delta schedule must be positive");
    PressureEstimate est;
    for (int n : n_range) {
        if (n > max_n_budget)
            throw Error("n=" + std::to_string(n) + " exceeds enumeration budget " +
                        std::to_string(max_n_budget));
        const double delta = schedule.at(n);
        LogSumAcc total;
        std::uint64_t hits = 0;
        const int pd = partition_depth(space, n, workers);
        if (pd == 0) {
            scan_words_with_sums(space, n, &phi, &psi,
                                 [&](std::span<const Symbol>, double sphi, double spsi) {
                                     if (std::abs(sphi / n - alpha) <= delta) {
                                         total.add(spsi);
                                         ++hits;
                                     }
                                 });
        } else {
            const std::vector<Word> prefixes = enumerate_words(space, pd);
            std::vector<LogSumAcc> acc(prefixes.size());
            std::vector<std::uint64_t> cnt(prefixes.size(), 0);
            run_blocks(workers, static_cast<int>(prefixes.size()), [&](int b) {
                scan_words_with_sums(
                    space, n, &phi, &psi,
                    [&](std::span<const Symbol>, double sphi, double spsi) {
                        if (std::abs(sphi / n - alpha) <= delta) {
                            acc[b].add(spsi);
                            ++cnt[b];
                        }
                    },
                    prefixes[b]);
            });
            for (std::size_t b = 0; b < prefixes.size(); ++b) {
                total.merge(acc[b]);
                hits += cnt[b];
            }
        }
        if (hits == 0) {
            est.skipped.push_back(n);
            continue;
        }
        est.n_all.push_back(n);
        est.log_sums.push_back(total.log_total());
        est.counts.push_back(hits);
    }
    if (est.n_all.empty())
        throw InfeasibleError("level set not witnessed at this resolution (alpha=" +
                              std::to_string(alpha) + ")");
    if (est.n_all.size() < 3)
        throw Error("too few nonempty levels (" + std::to_string(est.n_all.size()) +
                    ") for a slope fit");
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

namespace {

double bisect_root(const std::function<double(double)>& g, const char* what, double tol) {
    const double g0 = g(0.0);
    if (g0 <= 1e-12) return 0.0;
    double hi = 1.0;
    int guard = 0;
    while (g(hi) > 0.0) {
        hi *= 2.0;
        if (++guard > 80) throw Error(std::string(what) + ": no sign change found");
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= tol) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double bs_dimension_space(const ShiftSpace& space, const Potential& psi, double root_tol) {
    if (psi.min_admissible(space) <= 0.0)
        throw Error("BS dimension requires a strictly positive psi");
    const Potential zero = Potential::constant(space, 0.0);
    auto g = [&](double s) {
        return transfer_pressure(space, combine(space, -s, psi, 0.0, zero));
    };
    return bisect_root(g, "bs_dimension", root_tol);
}

double bs_dimension_level(const ShiftSpace& space, const Potential& phi, double alpha,
                          const Potential& psi, double root_tol) {
    if (psi.min_admissible(space) <= 0.0)
        throw Error("BS dimension requires a strictly positive psi");
    const RotationInterval ri = rotation_interval(space, phi);
    if (alpha < ri.alpha_min - 1e-12 || alpha > ri.alpha_max + 1e-12)
        throw InfeasibleError("alpha outside the rotation interval");
    const Potential zero = Potential::constant(space, 0.0);
    auto g = [&](double s) {
        const Potential scaled = combine(space, -s, psi, 0.0, zero);
        return legendre_point(space, phi, scaled, alpha, ri).value;
    };
    return bisect_root(g, "bs_dimension_level", root_tol);
}

double max_second_difference(const SpectrumCurve& curve) {
    double worst = -1e308;
    const auto& p = curve.points;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        if (p[i - 1].status != AlphaStatus::Interior || p[i].status != AlphaStatus::Interior ||
            p[i + 1].status != AlphaStatus::Interior)
            continue;
        worst = std::max(worst, p[i - 1].value - 2.0 * p[i].value + p[i + 1].value);
    }
    return worst;
}

} // namespace mfa
