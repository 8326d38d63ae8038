// maps.cpp
#include "mfa/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfa/parallel.hpp"
#include "mfa/rng.hpp"

namespace mfa {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = 3.14159265358979323846;
} // namespace

// ---- intermittent interval map ----

double MPMap::apply(double x) const {
    if (x < 0.0 || x > 1.0) throw Error("MP map: x outside [0,1]");
    if (x <= 0.5) return x * (1.0 + std::pow(2.0 * x, alpha)); // (2x)^a = 2^a x^a
    return 2.0 * x - 1.0;
}

double MPMap::inverse_left(double y) const {
    if (y < 0.0 || y > 1.0) throw Error("MP map: y outside [0,1]");
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (apply(mid) < y)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-16) break;
    }
    return 0.5 * (lo + hi);
}

double MPMap::inverse_right(double y) const {
    if (y < 0.0 || y > 1.0) throw Error("MP map: y outside [0,1]");
    return 0.5 * (y + 1.0);
}

std::pair<double, double> MPMap::inverse_branches(double y) const {
    return {inverse_left(y), inverse_right(y)};
}

// ---- torus map ----

TorusExpandingMap::TorusExpandingMap(std::vector<int> d) : diag(std::move(d)) {
    if (diag.empty()) throw Error("torus map: empty diagonal");
    for (int v : diag)
        if (std::abs(v) < 2)
            throw Error("torus map: diagonal entries need modulus >= 2 for expansion");
}

std::vector<double> TorusExpandingMap::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dimension()) throw Error("torus map: wrong dimension");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double v = double(diag[i]) * x[i];
        v -= std::floor(v);
        out[i] = v;
    }
    return out;
}

// ---- Viana skew product ----

VianaMap::VianaMap(int d_, double a_, double alpha_) : d(d_), a(a_), alpha(alpha_) {
    if (d < 16) throw Error("viana map: d must be an integer >= 16");
}

std::pair<double, double> VianaMap::apply(double theta, double x) const {
    if (theta < 0.0 || theta >= 1.0) throw Error("viana map: theta outside [0,1)");
    double t = double(d) * theta;
    t -= std::floor(t);
    const double nx = 1.0 - a * x * x + alpha * std::cos(2.0 * kPi * theta);
    return {t, nx};
}

VianaMap::InvarianceCheck VianaMap::check_second_coordinate(int samples, int horizon,
                                                            std::uint64_t seed) const {
    InvarianceCheck chk;
    chk.samples = samples;
    chk.window_lo = -1.0 - 2.0 * std::abs(alpha);
    chk.window_hi = 1.0 + 2.0 * std::abs(alpha);
    for (int s = 0; s < samples; ++s) {
        Rng rng = Rng::substream(seed, std::uint64_t(s));
        double theta = rng.next_double();
        double x = 2.0 * rng.next_double() - 1.0;
        bool violated = false;
        for (int i = 0; i < horizon; ++i) {
            auto [nt, nx] = apply(theta, x);
            theta = nt;
            x = nx;
            if (x < chk.window_lo || x > chk.window_hi) {
                violated = true;
                break;
            }
        }
        if (violated) ++chk.violations;
    }
    return chk;
}

// ---- shared 1D interface ----

Interval1D mp_system(const MPMap& map) {
    Interval1D sys;
    sys.f = [map](double x) { return map.apply(x); };
    sys.branches = 2;
    sys.branch_of = [](double x) { return x <= 0.5 ? 0 : 1; };
    sys.inverse = [map](double y, int b) {
        return b == 0 ? map.inverse_left(y) : map.inverse_right(y);
    };
    sys.boundaries = {0.0, 0.5, 1.0};
    sys.circle = false;
    return sys;
}

Interval1D doubling_system(int d) {
    if (d < 2) throw Error("expanding circle map needs d >= 2");
    Interval1D sys;
    sys.f = [d](double x) {
        double v = double(d) * x;
        v -= std::floor(v);
        return v;
    };
    sys.branches = d;
    sys.branch_of = [d](double x) { return std::min(d - 1, int(std::floor(x * d))); };
    sys.inverse = [d](double y, int b) { return (y + double(b)) / double(d); };
    sys.boundaries.resize(d + 1);
    for (int j = 0; j <= d; ++j) sys.boundaries[j] = double(j) / d;
    sys.circle = true;
    sys.ensemble_noise = 0x1.0p-50;
    return sys;
}

double circle_distance(double a, double b) {
    double diff = std::abs(a - b);
    diff -= std::floor(diff);
    return std::min(diff, 1.0 - diff);
}

// ---- empirical spectrum ----

namespace {

RateHistogram build_histogram(const std::vector<double>& averages, const EnsembleParams& params) {
    if (averages.empty()) throw InfeasibleError("empty ensemble after transient discard");
    RateHistogram h;
    h.n = params.n;
    h.seed = params.seed;
    h.total = static_cast<std::int64_t>(averages.size());
    double lo = params.range_lo, hi = params.range_hi;
    if (!(lo < hi)) {
        lo = *std::min_element(averages.begin(), averages.end());
        hi = *std::max_element(averages.begin(), averages.end());
        if (hi <= lo) hi = lo + 1e-12; // constant observable: a single bin wide enough
    }
    const int bins = params.bins;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.edges[b] = lo + (hi - lo) * double(b) / bins;
    h.counts.assign(bins, 0);
    double mean = 0.0;
    for (double a : averages) mean += a;
    mean /= double(averages.size());
    double var = 0.0;
    for (double a : averages) var += (a - mean) * (a - mean);
    var /= double(averages.size());
    h.avg_variance = var * params.n; // variance of S_n/sqrt(n)
    for (double a : averages) {
        int b = int(std::floor((a - lo) / (hi - lo) * bins));
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[b];
    }
    h.fraction.resize(bins);
    h.rate.assign(bins, kNan);
    // Gaussian-window prefactor; meaningless for near-degenerate ensembles
    const double prefactor = (h.avg_variance > 1e-9)
                                 ? 0.5 * std::log(2.0 * kPi * params.n * h.avg_variance)
                                 : 0.0;
    for (int b = 0; b < bins; ++b) {
        h.fraction[b] = double(h.counts[b]) / double(h.total);
        if (h.counts[b] > 0)
            h.rate[b] = -(std::log(h.fraction[b]) + prefactor) / double(params.n);
    }
    return h;
}

} // namespace

OrbitEnsemble run_ensemble(const Interval1D& sys, const std::function<double(double)>& obs,
                           const EnsembleParams& params) {
    if (params.size < 1000) throw Error("ensemble size must be at least 1000");
    OrbitEnsemble ens;
    ens.params = params;
    ens.averages.assign(params.size, 0.0);
    const int nblocks = params.workers <= 1 ? 1 : 4 * params.workers;
    const int per = (params.size + nblocks - 1) / nblocks;
    run_blocks(params.workers, nblocks, [&](int b) {
        const int lo = b * per;
        const int hi = std::min(params.size, lo + per);
        for (int m = lo; m < hi; ++m) {
            Rng rng = Rng::substream(params.seed, std::uint64_t(m));
            double x = rng.next_double();
            auto step = [&](double v) {
                v = sys.f(v);
                if (sys.ensemble_noise > 0.0) {
                    v += rng.next_double() * sys.ensemble_noise;
                    v -= std::floor(v);
                }
                return v;
            };
            for (int i = 0; i < params.transient; ++i) x = step(x);
            double sum = 0.0;
            for (int i = 0; i < params.n; ++i) {
                sum += obs(x);
                x = step(x);
            }
            ens.averages[std::size_t(m)] = sum / params.n;
        }
    });
    return ens;
}

RateHistogram rate_histogram(const OrbitEnsemble& ensemble) {
    return build_histogram(ensemble.averages, ensemble.params);
}

RateHistogram empirical_spectrum(const Interval1D& sys, const std::function<double(double)>& obs,
                                 const EnsembleParams& params) {
    return rate_histogram(run_ensemble(sys, obs, params));
}

OrbitEnsemble run_ensemble_viana(const VianaMap& map,
                                 const std::function<double(double, double)>& obs,
                                 const EnsembleParams& params) {
    if (params.size < 1000) throw Error("ensemble size must be at least 1000");
    OrbitEnsemble ens;
    ens.params = params;
    std::vector<double>& averages = ens.averages;
    averages.reserve(params.size);
    for (int m = 0; m < params.size; ++m) {
        Rng rng = Rng::substream(params.seed, std::uint64_t(m));
        double theta = rng.next_double();
        double x = 2.0 * rng.next_double() - 1.0;
        // the base d*theta mod 1 is dyadic for d = 16; refresh the low bits
        auto step = [&]() {
            auto [nt, nx] = map.apply(theta, x);
            theta = nt + rng.next_double() * 0x1.0p-50;
            theta -= std::floor(theta);
            x = nx;
        };
        bool escaped = false;
        for (int i = 0; i < params.transient; ++i) {
            step();
            if (!std::isfinite(x) || std::abs(x) > 1e6) {
                escaped = true;
                break;
            }
        }
        if (escaped) continue; // reported through the ensemble count
        double sum = 0.0;
        for (int i = 0; i < params.n; ++i) {
            sum += obs(theta, x);
            step();
        }
        averages.push_back(sum / params.n);
    }
    return ens;
}

RateHistogram empirical_spectrum_viana(const VianaMap& map,
                                       const std::function<double(double, double)>& obs,
                                       const EnsembleParams& params) {
    return rate_histogram(run_ensemble_viana(map, obs, params));
}

// ---- shadowing gap via inverse-branch pullbacks ----

namespace {

struct IntervalSet {
    // disjoint closed components inside [0,1], kept sorted
    std::vector<std::pair<double, double>> comps;

    bool empty() const { return comps.empty(); }
    void add(double lo, double hi) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 1.0);
        if (lo <= hi) comps.push_back({lo, hi});
    }
    double midpoint_of_largest() const {
        double best = -1.0, mid = 0.0;
        for (auto [lo, hi] : comps)
            if (hi - lo > best) {
                best = hi - lo;
                mid = 0.5 * (lo + hi);
            }
        return mid;
    }
};

// eps-tube around a point, split across the wrap on the circle
IntervalSet tube(double c, double eps, bool circle) {
    IntervalSet out;
    if (!circle) {
        out.add(c - eps, c + eps);
        return out;
    }
    if (2.0 * eps >= 1.0) {
        out.add(0.0, 1.0);
        return out;
    }
    double lo = c - eps, hi = c + eps;
    if (lo < 0.0) {
        out.add(0.0, hi);
        out.add(lo + 1.0, 1.0);
    } else if (hi > 1.0) {
        out.add(lo, 1.0);
        out.add(0.0, hi - 1.0);
    } else {
        out.add(lo, hi);
    }
    return out;
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
    IntervalSet out;
    for (auto [alo, ahi] : a.comps)
        for (auto [blo, bhi] : b.comps) {
            const double lo = std::max(alo, blo), hi = std::min(ahi, bhi);
            if (lo <= hi) out.add(lo, hi);
        }
    return out;
}

// preimage of the set under one monotone increasing inverse branch, with a
// small outward rounding so the enclosure stays sound
IntervalSet pull_back(const Interval1D& sys, const IntervalSet& set, int branch) {
    IntervalSet out;
    for (auto [lo, hi] : set.comps) {
        const double plo = sys.inverse(lo, branch) - 1e-13;
        const double phi = sys.inverse(hi, branch) + 1e-13;
        out.add(plo, phi);
    }
    return out;
}

// inner core of points that eps-shadow the segment through its own branches;
// `post_image` optionally constrains where the point lands after the segment
IntervalSet segment_tube_core(const Interval1D& sys, const std::vector<double>& orbit, int n,
                              double eps, const IntervalSet* post_image = nullptr) {
    IntervalSet cur;
    if (post_image) {
        cur = intersect(pull_back(sys, *post_image, sys.branch_of(orbit[n - 1])),
                        tube(orbit[n - 1], eps, sys.circle));
    } else {
        cur = tube(orbit[n - 1], eps, sys.circle);
    }
    for (int i = n - 2; i >= 0; --i) {
        if (cur.empty()) break;
        cur = pull_back(sys, cur, sys.branch_of(orbit[i]));
        cur = intersect(cur, tube(orbit[i], eps, sys.circle));
    }
    return cur;
}

void normalize(IntervalSet& s) {
    std::sort(s.comps.begin(), s.comps.end());
    std::vector<std::pair<double, double>> merged;
    for (auto [lo, hi] : s.comps) {
        if (!merged.empty() && lo <= merged.back().second + 1e-15)
            merged.back().second = std::max(merged.back().second, hi);
        else
            merged.push_back({lo, hi});
    }
    s.comps = std::move(merged);
}

// forward image of [dlo, dhi] inside branch b; branch endpoints map to the
// full range ends (the increasing branch is onto up to the domain cut)
std::pair<double, double> branch_image(const Interval1D& sys, int b, double dlo, double dhi) {
    double ilo = sys.f(std::min(std::max(dlo, 0.0), 1.0));
    double ihi = sys.f(std::min(std::max(dhi, 0.0), 1.0));
    if (dhi >= sys.boundaries[b + 1] - 1e-15) ihi = 1.0;
    if (dlo <= sys.boundaries[b] + 1e-15) ilo = 0.0;
    return {std::min(ilo, ihi), std::max(ilo, ihi)};
}

// one-step forward image through the monotone branch pieces
IntervalSet apply_map(const Interval1D& sys, const IntervalSet& s) {
    IntervalSet out;
    for (auto [lo, hi] : s.comps) {
        for (int b = 0; b < sys.branches; ++b) {
            const double dlo = std::max(lo, sys.boundaries[b]);
            const double dhi = std::min(hi, sys.boundaries[b + 1]);
            if (dlo > dhi) continue;
            const auto [ilo, ihi] = branch_image(sys, b, dlo, dhi);
            out.add(ilo - 1e-13, ihi + 1e-13);
        }
    }
    normalize(out);
    return out;
}

IntervalSet preimage(const Interval1D& sys, const IntervalSet& s) {
    IntervalSet out;
    for (int b = 0; b < sys.branches; ++b) {
        IntervalSet pulled = pull_back(sys, s, b);
        for (auto c : pulled.comps) out.comps.push_back(c);
    }
    normalize(out);
    return out;
}

} // namespace

SpecGapResult spec_gap_estimate(const Interval1D& sys, const OrbitSegment& seg1,
                                const OrbitSegment& seg2, double eps, int p_max) {
    if (eps <= 0.0) throw Error("spec gap: eps must be positive");
    if (seg1.n < 1 || seg2.n < 1) throw Error("spec gap: segment lengths must be >= 1");
    SpecGapResult res;
    res.p_max = p_max;

    std::vector<double> orbit1(seg1.n), orbit2(seg2.n);
    orbit1[0] = seg1.x;
    for (int i = 1; i < seg1.n; ++i) orbit1[i] = sys.f(orbit1[i - 1]);
    orbit2[0] = seg2.x;
    for (int i = 1; i < seg2.n; ++i) orbit2[i] = sys.f(orbit2[i - 1]);

    const IntervalSet j2 = segment_tube_core(sys, orbit2, seg2.n, eps);
    const IntervalSet core1 = segment_tube_core(sys, orbit1, seg1.n, eps);
    if (j2.empty() || core1.empty()) {
        res.diagnostics = "a segment has an empty shadow core at this eps";
        return res;
    }

    // forward branch images of the core's end-state, one per bridge step
    std::vector<IntervalSet> forward(p_max + 1);
    IntervalSet end_state = core1;
    for (int i = 0; i < seg1.n; ++i) {
        // along the segment the branch is pinned by the orbit
        IntervalSet next;
        const int b = sys.branch_of(orbit1[i]);
        for (auto [lo, hi] : end_state.comps) {
            const double dlo = std::max(lo, sys.boundaries[b]);
            const double dhi = std::min(hi, sys.boundaries[b + 1]);
            if (dlo > dhi) continue;
            const auto [ilo, ihi] = branch_image(sys, b, dlo, dhi);
            next.add(ilo - 1e-13, ihi + 1e-13);
        }
        normalize(next);
        end_state = std::move(next);
        if (end_state.empty()) {
            res.diagnostics = "first segment's core collapses under rounding";
            return res;
        }
    }
    forward[0] = end_state;
    for (int p = 1; p <= p_max; ++p) forward[p] = apply_map(sys, forward[p - 1]);

    auto dist = [&](double a, double b) {
        return sys.circle ? circle_distance(a, b) : std::abs(a - b);
    };

    auto try_witness = [&](double z, int p, double& worst) {
        double w = z;
        worst = 0.0;
        for (int i = 0; i < seg1.n; ++i) {
            const double dd = dist(w, orbit1[i]);
            worst = std::max(worst, dd);
            if (dd >= eps) return false;
            w = sys.f(w);
        }
        for (int i = 0; i < p; ++i) w = sys.f(w);
        for (int i = 0; i < seg2.n; ++i) {
            const double dd = dist(w, orbit2[i]);
            worst = std::max(worst, dd);
            if (dd >= eps) return false;
            w = sys.f(w);
        }
        return true;
    };

    for (int p = 0; p <= p_max; ++p) {
        IntervalSet meet = intersect(forward[p], j2);
        if (meet.empty()) continue;
        // walk the meeting set back through the free steps, then through the
        // first segment's pinned branches
        IntervalSet back = meet;
        for (int t = p; t > 0; --t) {
            back = intersect(preimage(sys, back), forward[t - 1]);
            if (back.empty()) break;
        }
        if (back.empty()) continue;
        IntervalSet z_set = segment_tube_core(sys, orbit1, seg1.n, eps, &back);
        if (z_set.empty()) continue;
        // candidate points: component midpoints
        for (auto [lo, hi] : z_set.comps) {
            double worst = 0.0;
            const double z = 0.5 * (lo + hi);
            if (try_witness(z, p, worst)) {
                res.found = true;
                res.gap = p;
                res.witness = z;
                res.max_shadow_dist = worst;
                return res;
            }
        }
    }
    res.diagnostics = "no admissible bridge up to p_max=" + std::to_string(p_max) +
                      " at eps=" + std::to_string(eps);
    return res;
}

// ---- coding-based level spectrum ----

namespace {

// DFS over branch suffixes: node value u = pullback of 0.5 through the suffix;
// the orbit of each cylinder's center is exactly the chain of node values.
template <class LeafFn>
void center_dfs(const Interval1D& sys, double u, double sum,
                const std::function<double(double)>& obs, int depth, int n, LeafFn& fn) {
    if (depth == n) {
        fn(sum);
        return;
    }
    for (int b = 0; b < sys.branches; ++b) {
        const double v = sys.inverse(u, b);
        center_dfs(sys, v, sum + obs(v), obs, depth + 1, n, fn);
    }
}

} // namespace

SpectrumCurve mp_level_spectrum(const MPMap& map, std::span<const double> alpha_grid,
                                std::span<const int> n_range, const DeltaSchedule& schedule,
                                int max_depth) {
    const Interval1D sys = mp_system(map);
    const std::function<double(double)> obs = [](double x) { return x > 0.5 ? 1.0 : 0.0; };
    const std::size_t na = alpha_grid.size();
    // per alpha, per n: restricted cylinder counts
    std::vector<std::vector<double>> log_counts(na);
    std::vector<std::vector<double>> ns(na);
    for (int n : n_range) {
        if (n > max_depth)
            throw Error("mp_level_spectrum: depth " + std::to_string(n) + " exceeds the cap " +
                        std::to_string(max_depth));
        std::vector<std::uint64_t> hits(na, 0);
        auto leaf = [&](double sum) {
            const double avg = sum / n;
            for (std::size_t a = 0; a < na; ++a)
                if (std::abs(avg - alpha_grid[a]) <= schedule.at(n)) ++hits[a];
        };
        center_dfs(sys, 0.5, 0.0, obs, 0, n, leaf);
        for (std::size_t a = 0; a < na; ++a) {
            if (hits[a] == 0) continue;
            log_counts[a].push_back(std::log(double(hits[a])));
            ns[a].push_back(double(n));
        }
    }
    SpectrumCurve curve;
    curve.note = "coding-based, distortion-uncorrected";
    for (std::size_t a = 0; a < na; ++a) {
        SpectrumPoint pt;
        pt.alpha = alpha_grid[a];
        pt.q = kNan;
        if (ns[a].size() < 3) {
            pt.status = AlphaStatus::Infeasible;
            pt.value = kNan;
        } else {
            const int L = static_cast<int>(ns[a].size());
            const int take = std::max(3, (2 * L + 2) / 3);
            const int from = L - std::min(take, L);
            std::vector<double> xs(ns[a].begin() + from, ns[a].end());
            std::vector<double> ys(log_counts[a].begin() + from, log_counts[a].end());
            pt.status = AlphaStatus::Interior;
            pt.value = least_squares_slope(xs, ys).slope;
        }
        curve.points.push_back(pt);
    }
    return curve;
}

} // namespace mfa
