// moran.cpp
#include "mfa/moran.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfa/parallel.hpp"
#include "mfa/pressure.hpp"
#include "mfa/rng.hpp"
#include "mfa/words.hpp"

namespace mfa {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void MoranConfig::validate() const {
    const int kk = levels();
    if (kk < 1) throw ConfigError("moran: need at least one level");
    if (static_cast<int>(N_k.size()) != kk || static_cast<int>(delta_k.size()) != kk ||
        static_cast<int>(l_k.size()) != kk)
        throw ConfigError("moran: schedule lengths disagree");
    if (epsilon <= 0.0 || epsilon > 1.0) throw ConfigError("moran: epsilon must lie in (0,1]");
    if (gamma <= 0.0) throw ConfigError("moran: gamma must be positive");
    for (int i = 0; i < kk; ++i) {
        if (n_k[i] < 1 || n_k[i] > 26) throw ConfigError("moran: n_k outside [1,26]");
        if (N_k[i] < 1) throw ConfigError("moran: N_k must be >= 1");
        if (delta_k[i] <= 0.0) throw ConfigError("moran: delta_k must be positive");
        if (n_k[i] < l_k[i]) throw ConfigError("moran: n_k must be >= l_k");
        if (i > 0) {
            if (delta_k[i] >= delta_k[i - 1])
                throw ConfigError("moran: delta_k must be strictly decreasing");
            if (l_k[i] <= l_k[i - 1]) throw ConfigError("moran: l_k must be strictly increasing");
        }
    }
}

// ---- families ----

std::pair<std::size_t, std::size_t> SeparatedFamily::prefix_range(
    std::span<const Symbol> prefix) const {
    const std::size_t p = prefix.size();
    auto cmp = [p](const Word& a, std::span<const Symbol> b) {
        const std::size_t len = std::min(a.size(), p);
        for (std::size_t i = 0; i < len; ++i) {
            if (a[i] != b[i]) return a[i] < b[i];
        }
        return false; // equal on the prefix
    };
    auto lo = std::lower_bound(words.begin(), words.end(), prefix, cmp);
    auto cmp_hi = [p](std::span<const Symbol> b, const Word& a) {
        const std::size_t len = std::min(a.size(), p);
        for (std::size_t i = 0; i < len; ++i) {
            if (b[i] != a[i]) return b[i] < a[i];
        }
        return false;
    };
    auto hi = std::upper_bound(words.begin(), words.end(), prefix, cmp_hi);
    return {std::size_t(lo - words.begin()), std::size_t(hi - words.begin())};
}

double SeparatedFamily::log_prefix_mass(std::span<const Symbol> prefix) const {
    auto [lo, hi] = prefix_range(prefix);
    if (hi <= lo) return kNegInf;
    const double s = cum[hi] - cum[lo];
    if (s <= 0.0) return kNegInf;
    return weight_max + std::log(s);
}

namespace {

void finalize_family(SeparatedFamily& fam) {
    LogSumAcc acc;
    fam.weight_max = *std::max_element(fam.log_weights.begin(), fam.log_weights.end());
    fam.cum.assign(fam.words.size() + 1, 0.0);
    for (std::size_t i = 0; i < fam.words.size(); ++i) {
        acc.add(fam.log_weights[i]);
        fam.cum[i + 1] = fam.cum[i] + std::exp(fam.log_weights[i] - fam.weight_max);
    }
    fam.log_mass = acc.log_total();
    fam.check_value = fam.log_mass / fam.n;
}

} // namespace

SeparatedFamily build_family(const ShiftSpace& space, const Potential& phi, const Potential& psi,
                             int level, int n, double delta, double alpha,
                             std::uint64_t family_cap) {
    SeparatedFamily fam;
    fam.level = level;
    fam.n = n;
    fam.lambdas = {1.0};
    fam.alphas = {alpha};
    scan_words_with_sums(space, n, &phi, &psi,
                         [&](std::span<const Symbol> w, double sphi, double spsi) {
                             if (std::abs(sphi / n - alpha) < delta) {
                                 if (fam.words.size() >= family_cap)
                                     throw Error("family at level " + std::to_string(level) +
                                                 " exceeds " + std::to_string(family_cap) +
                                                 " words; tighten delta");
                                 fam.words.emplace_back(w.begin(), w.end());
                                 fam.log_weights.push_back(spsi);
                             }
                         });
    if (fam.words.empty())
        throw InfeasibleError("empty family at level " + std::to_string(level) + ": delta=" +
                              std::to_string(delta) + " admits no words of length " +
                              std::to_string(n));
    finalize_family(fam);
    return fam;
}

SeparatedFamily build_composite_family(const ShiftSpace& space, const Potential& phi,
                                       const Potential& psi, int level, int n_hat, double delta,
                                       std::span<const FamilyComponent> components,
                                       std::uint64_t family_cap) {
    if (components.empty()) throw Error("composite family needs at least one component");
    double lambda_sum = 0.0;
    for (const auto& c : components) {
        if (c.lambda <= 0.0) throw Error("component weights must be positive");
        lambda_sum += c.lambda;
    }
    if (std::abs(lambda_sum - 1.0) > 1e-9) throw Error("component weights must sum to 1");

    mixing_gap(space); // gluing below requires a uniform gap; fail early
    std::vector<SeparatedFamily> parts;
    double count = 1.0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        const int ni = std::max(1, static_cast<int>(components[i].lambda * n_hat));
        parts.push_back(build_family(space, phi, psi, level, ni, delta, components[i].alpha,
                                     family_cap));
        count *= double(parts.back().words.size());
    }
    if (count > double(family_cap))
        throw Error("composite family exceeds " + std::to_string(family_cap) +
                    " words; tighten delta");

    SeparatedFamily fam;
    fam.level = level;
    for (const auto& c : components) {
        fam.lambdas.push_back(c.lambda);
        fam.alphas.push_back(c.alpha);
    }
    // glue every tuple of component words, in lexicographic tuple order
    std::vector<std::size_t> idx(parts.size(), 0);
    std::vector<Word> segments(parts.size());
    for (;;) {
        for (std::size_t i = 0; i < parts.size(); ++i) segments[i] = parts[i].words[idx[i]];
        Word glued = parts.size() == 1 ? segments[0] : glue(space, segments);
        fam.log_weights.push_back(birkhoff_sum(psi, glued));
        fam.words.push_back(std::move(glued));
        std::size_t pos = parts.size();
        while (pos > 0) {
            if (++idx[pos - 1] < parts[pos - 1].words.size()) break;
            idx[--pos] = 0;
        }
        if (pos == 0) break;
    }
    fam.n = static_cast<int>(fam.words.front().size());
    for (const Word& w : fam.words)
        if (static_cast<int>(w.size()) != fam.n)
            throw Error("composite family produced uneven word lengths");
    std::sort(fam.words.begin(), fam.words.end()); // keep the lexicographic storage order
    // weights must follow the sort: recompute (cheap relative to the glue)
    for (std::size_t i = 0; i < fam.words.size(); ++i)
        fam.log_weights[i] = birkhoff_sum(psi, fam.words[i]);
    finalize_family(fam);
    return fam;
}

// ---- scheme ----

MoranScheme MoranScheme::build(const ShiftSpace& space, std::vector<SeparatedFamily> families,
                               const MoranConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(families.size()) != cfg.levels())
        throw Error("moran scheme: family count does not match the config");
    for (int i = 0; i < cfg.levels(); ++i)
        if (families[i].n != cfg.n_k[i])
            throw Error("moran scheme: family word length differs from the schedule");

    MoranScheme s;
    s.space_ = &space;
    s.cfg_ = cfg;
    s.k_ = space.alphabet_size();
    s.gap_ = mixing_gap(space);
    s.families_ = std::move(families);

    // bridge table
    s.bridges_.resize(std::size_t(s.k_) * s.k_);
    for (int a = 0; a < s.k_; ++a)
        for (int b = 0; b < s.k_; ++b)
            s.bridges_[std::size_t(a) * s.k_ + b] =
                bridge_word(space, Symbol(a), Symbol(b), s.gap_);

    // schedules: c_k = N_k n_k + (N_k - 1) g, t_1 = c_1, t_{k+1} = t_k + g + c_{k+1}
    const int kk = cfg.levels();
    s.c_.resize(kk);
    s.t_.resize(kk);
    for (int i = 0; i < kk; ++i) {
        s.c_[i] = long(cfg.N_k[i]) * cfg.n_k[i] + long(cfg.N_k[i] - 1) * s.gap_;
        s.t_[i] = (i == 0) ? s.c_[0] : s.t_[i - 1] + s.gap_ + s.c_[i];
    }
    // slot windows
    for (int i = 0; i < kk; ++i) {
        const long base = (i == 0) ? 0 : s.t_[i - 1] + s.gap_;
        for (int l = 0; l < cfg.N_k[i]; ++l)
            s.slots_.push_back({i + 1, l, base + long(l) * (cfg.n_k[i] + s.gap_)});
    }

    double log_count = 0.0;
    for (int i = 0; i < kk; ++i)
        log_count += double(cfg.N_k[i]) * std::log(double(s.families_[i].words.size()));
    s.log_leaf_count_ = log_count;
    const bool fits = log_count <= std::log(double(cfg.leaf_budget)) + 1e-9;
    switch (cfg.mode) {
        case MoranConfig::Mode::Auto:
            s.eager_ = fits;
            break;
        case MoranConfig::Mode::Eager:
            if (!fits)
                throw Error("moran scheme exceeds the eager leaf budget (" +
                            std::to_string(cfg.leaf_budget) +
                            "); rebuild in lazy mode (mode = lazy)");
            s.eager_ = true;
            break;
        case MoranConfig::Mode::Lazy:
            s.eager_ = false;
            break;
    }
    return s;
}

int MoranScheme::slots_through_level(int level) const {
    int n = 0;
    for (int i = 0; i < level; ++i) n += cfg_.N_k[i];
    return n;
}

std::uint64_t MoranScheme::leaf_count() const {
    if (!eager_) throw Error("leaf_count: scheme is lazy");
    std::uint64_t total = 1;
    for (int i = 0; i < levels(); ++i)
        for (int l = 0; l < cfg_.N_k[i]; ++l) total *= families_[i].words.size();
    return total;
}

Word MoranScheme::materialize(std::span<const int> index, int level) const {
    const int upto = (level == 0) ? levels() : level;
    if (upto < 1 || upto > levels()) throw Error("materialize: bad level");
    const int nslots = slots_through_level(upto);
    if (static_cast<int>(index.size()) < nslots)
        throw Error("materialize: index word too short");
    Word out;
    out.reserve(std::size_t(t(upto)));
    for (int si = 0; si < nslots; ++si) {
        const Slot& slot = slots_[si];
        const SeparatedFamily& fam = families_[slot.level - 1];
        const int choice = index[si];
        if (choice < 0 || choice >= static_cast<int>(fam.words.size()))
            throw Error("materialize: index out of range");
        const Word& seg = fam.words[choice];
        if (si > 0 && gap_ > 0) {
            const Word& b = bridge(out.back(), seg.front());
            out.insert(out.end(), b.begin(), b.end());
        }
        out.insert(out.end(), seg.begin(), seg.end());
    }
    if (static_cast<long>(out.size()) != t(upto))
        throw Error("materialize: internal length mismatch");
    return out;
}

// ---- measure ----

MoranMeasure::MoranMeasure(const MoranScheme& scheme, int level)
    : scheme_(&scheme), level_(level == 0 ? scheme.levels() : level) {
    if (level_ < 1 || level_ > scheme.levels()) throw Error("moran measure: bad level");
    log_kappa_ = 0.0;
    for (int i = 1; i <= level_; ++i)
        log_kappa_ += double(scheme.config().N_k[i - 1]) * scheme.family(i).log_mass;
}

double MoranMeasure::log_leaf_weight(std::span<const int> index) const {
    const int nslots = scheme_->slots_through_level(level_);
    if (static_cast<int>(index.size()) < nslots) throw Error("leaf weight: index too short");
    double lw = 0.0;
    for (int si = 0; si < nslots; ++si) {
        const auto& slot = scheme_->slots()[si];
        lw += scheme_->family(slot.level).log_weights[index[si]];
    }
    return lw;
}

double MoranMeasure::cylinder_log_mass(std::span<const Symbol> w) const {
    const long D = static_cast<long>(w.size());
    if (D < 1) return 0.0; // the whole space
    if (D > scheme_->t(level_))
        throw Error("cylinder deeper than the measure's resolution t_k");
    const int g = scheme_->gap();
    const int nslots = scheme_->slots_through_level(level_);
    double total = 0.0;
    for (int si = 0; si < nslots; ++si) {
        const auto& slot = scheme_->slots()[si];
        const SeparatedFamily& fam = scheme_->family(slot.level);
        const long start = slot.start;
        const long bridge_start = (si == 0) ? start : start - g;
        if (bridge_start >= D) break; // this slot and all later ones are unconstrained
        const long win_end = std::min<long>(start + fam.n, D);
        const long prefix_len = std::max<long>(0, win_end - start);

        // visible part of the preceding bridge, determined by w itself
        std::span<const Symbol> bridge_vis;
        Symbol prev = 0;
        if (si > 0 && g > 0) {
            const long bvis_end = std::min<long>(start, D);
            bridge_vis = w.subspan(std::size_t(bridge_start),
                                   std::size_t(bvis_end - bridge_start));
            prev = w[std::size_t(bridge_start - 1)];
        }
        auto bridge_matches = [&](Symbol first) {
            if (bridge_vis.empty()) return true;
            const Word& b = scheme_->bridge(prev, first);
            for (std::size_t i = 0; i < bridge_vis.size(); ++i)
                if (b[i] != bridge_vis[i]) return false;
            return true;
        };

        double factor;
        if (prefix_len > 0) {
            const auto prefix = w.subspan(std::size_t(start), std::size_t(prefix_len));
            if (!bridge_matches(prefix[0])) return kNegInf;
            factor = fam.log_prefix_mass(prefix);
        } else {
            // only the bridge is visible; sum over compatible first symbols
            LogSumAcc acc;
            for (int a = 0; a < scheme_->space().alphabet_size(); ++a) {
                if (!bridge_matches(Symbol(a))) continue;
                const Symbol pa[1] = {Symbol(a)};
                const double lm = fam.log_prefix_mass(std::span<const Symbol>(pa, 1));
                if (lm > kNegInf) acc.add(lm);
            }
            factor = acc.empty() ? kNegInf : acc.log_total();
        }
        if (factor == kNegInf) return kNegInf;
        total += factor - fam.log_mass;
    }
    return total;
}

// ---- verifiers ----

FamilyReport check_family_lower_bounds(const MoranScheme& scheme, double reference, double gamma) {
    FamilyReport rep;
    rep.reference = reference;
    rep.gamma = gamma;
    rep.n_star = -1;
    rep.pass = true;
    for (int i = 1; i <= scheme.levels(); ++i) {
        const SeparatedFamily& fam = scheme.family(i);
        FamilyCheck fc;
        fc.level = i;
        fc.n = fam.n;
        fc.size = fam.words.size();
        fc.check_value = fam.check_value;
        fc.pass = fam.check_value >= reference - gamma;
        if (fc.pass && (rep.n_star < 0 || fam.n < rep.n_star)) rep.n_star = fam.n;
        rep.pass = rep.pass && fc.pass;
        rep.levels.push_back(fc);
    }
    return rep;
}

std::vector<PdpBall> sample_pdp_balls(const MoranScheme& scheme, int count, int n_min,
                                      std::uint64_t seed) {
    const double eps = scheme.config().epsilon;
    const int extra = shift_metric::strict_depth(eps / 2.0) - 1; // cylinder depth = n + extra
    const long t_max = scheme.t(scheme.levels());
    const long n_hi = t_max - extra;
    if (n_hi < n_min) throw Error("sample_pdp_balls: n_min too large for the scheme depth");
    Rng rng(seed);
    std::vector<PdpBall> balls;
    balls.reserve(count);
    std::vector<int> index(scheme.total_slots());
    for (int b = 0; b < count; ++b) {
        for (int si = 0; si < scheme.total_slots(); ++si) {
            const auto& slot = scheme.slots()[si];
            index[si] = static_cast<int>(
                rng.next_below(scheme.family(slot.level).words.size()));
        }
        const Word leaf = scheme.materialize(index);
        const int n = n_min + static_cast<int>(rng.next_below(std::uint64_t(n_hi - n_min + 1)));
        PdpBall ball;
        ball.n = n;
        ball.q.assign(leaf.begin(), leaf.begin() + n + extra);
        balls.push_back(std::move(ball));
    }
    return balls;
}

PdpReport verify_pdp(const MoranMeasure& measure, double s, const Potential& psi, double eps,
                     std::span<const PdpBall> balls, int n_min, int workers) {
    const MoranScheme& scheme = measure.scheme();
    PdpReport rep;
    rep.s = s;
    rep.eps = eps;
    rep.max_violation = kNegInf;
    const int extra = shift_metric::strict_depth(eps / 2.0) - 1;

    // disjoint ball blocks with a deterministic merge in block order
    const int nblocks = workers <= 1 ? 1 : 4 * workers;
    const std::size_t per = (balls.size() + nblocks - 1) / std::max(1, nblocks);
    struct Partial {
        double max_violation = kNegInf;
        int checked = 0, skipped = 0, n_max = 0;
        std::string error;
    };
    std::vector<Partial> parts(nblocks);
    run_blocks(workers, nblocks, [&](int b) {
        Partial& p = parts[b];
        const std::size_t lo = std::size_t(b) * per;
        const std::size_t hi = std::min(balls.size(), lo + per);
        for (std::size_t i = lo; i < hi; ++i) {
            const PdpBall& ball = balls[i];
            if (ball.n < n_min) {
                p.error = "verify_pdp: ball shallower than the minimum depth flag";
                return;
            }
            const long depth = ball.n + extra;
            if (static_cast<long>(ball.q.size()) < depth) {
                p.error = "verify_pdp: center word shorter than the ball's cylinder depth";
                return;
            }
            if (depth > scheme.t(measure.level())) {
                p.error = "verify_pdp: ball deeper than the scheme resolution";
                return;
            }
            const double lhs = measure.cylinder_log_mass(
                std::span<const Symbol>(ball.q.data(), std::size_t(depth)));
            if (lhs == kNegInf) {
                ++p.skipped; // disjoint from every leaf cylinder: bound holds trivially
                continue;
            }
            const double spsi = birkhoff_sum_prefix(psi, ball.q, ball.n);
            const double rhs = -double(ball.n) * s + spsi;
            p.max_violation = std::max(p.max_violation, lhs - rhs);
            p.n_max = std::max(p.n_max, ball.n);
            ++p.checked;
        }
    });
    for (const Partial& p : parts) {
        if (!p.error.empty()) throw Error(p.error);
        rep.max_violation = std::max(rep.max_violation, p.max_violation);
        rep.checked += p.checked;
        rep.skipped += p.skipped;
        rep.n_max = std::max(rep.n_max, p.n_max);
    }
    if (rep.checked == 0) {
        rep.max_violation = 0.0;
        rep.fitted_log_k = 0.0;
    } else {
        rep.fitted_log_k = std::max(0.0, rep.max_violation);
    }
    rep.residual = rep.max_violation - rep.fitted_log_k;
    rep.threshold = 0.1 * rep.n_max;
    rep.pass = rep.checked > 0 && rep.fitted_log_k <= rep.threshold;
    return rep;
}

LevelConvergenceReport verify_level_convergence(const MoranScheme& scheme, const Potential& phi,
                                                double alpha, int samples, std::uint64_t seed) {
    const MoranConfig& cfg = scheme.config();
    const int kk = scheme.levels();
    LevelConvergenceReport rep;
    rep.max_dev.assign(kk, 0.0);
    rep.bound.assign(kk, 0.0);

    const double phi_sup = phi.max_abs();
    const double osc = (phi.memory() > 1)
                           ? phi.max_admissible(scheme.space()) - phi.min_admissible(scheme.space())
                           : 0.0;
    for (int j = 1; j <= kk; ++j) {
        const long tj = scheme.t(j);
        const int slots_j = scheme.slots_through_level(j);
        const long bridges_j = slots_j - 1;
        const double gap_term =
            double(scheme.gap()) * (phi_sup + std::abs(alpha)) * double(bridges_j) / double(tj);
        const double seam_slack =
            double(slots_j) * double(phi.memory() - 1) * osc / double(tj);
        rep.bound[j - 1] = cfg.delta_k[j - 1] + seam_slack + gap_term + 1.0 / j;
    }

    Rng rng(seed);
    std::vector<int> index(scheme.total_slots());
    for (int sidx = 0; sidx < samples; ++sidx) {
        for (int si = 0; si < scheme.total_slots(); ++si) {
            const auto& slot = scheme.slots()[si];
            index[si] =
                static_cast<int>(rng.next_below(scheme.family(slot.level).words.size()));
        }
        const Word leaf = scheme.materialize(index);
        for (int j = 1; j <= kk; ++j) {
            const long tj = scheme.t(j);
            const double avg = birkhoff_average(
                phi, std::span<const Symbol>(leaf.data(), std::size_t(tj)));
            rep.max_dev[j - 1] = std::max(rep.max_dev[j - 1], std::abs(avg - alpha));
        }
    }

    rep.within_bounds = true;
    rep.devs_decreasing = true;
    rep.bounds_decreasing = true;
    for (int j = 0; j < kk; ++j) {
        if (rep.max_dev[j] > rep.bound[j]) rep.within_bounds = false;
        if (j > 0 && rep.max_dev[j] > rep.max_dev[j - 1]) rep.devs_decreasing = false;
        if (j > 0 && rep.bound[j] >= rep.bound[j - 1]) rep.bounds_decreasing = false;
    }
    if (kk == 1) rep.devs_decreasing = true;
    rep.pass = rep.within_bounds && rep.bounds_decreasing && (kk == 1 || rep.devs_decreasing);
    return rep;
}

SeparationNestingReport verify_separation_nesting(const MoranScheme& scheme, int samples,
                                                  std::uint64_t seed, std::uint64_t eager_cap) {
    SeparationNestingReport rep;
    const int kk = scheme.levels();

    const bool exhaustive = scheme.eager() && scheme.log_leaf_count() <=
                                                  std::log(double(eager_cap)) + 1e-9;
    if (exhaustive) {
        rep.mode = (kk == 1) ? "eager-exhaustive (nesting vacuous)" : "eager-exhaustive";
        std::vector<Word> leaves;
        std::vector<std::vector<int>> indices;
        scheme.for_each_leaf([&](std::span<const int> idx) {
            indices.emplace_back(idx.begin(), idx.end());
            leaves.push_back(scheme.materialize(idx));
        });
        // separation: distinct leaves must differ within their first t_k
        // symbols, i.e. be distinct as words of length t_k
        std::vector<const Word*> sorted;
        sorted.reserve(leaves.size());
        for (const Word& w : leaves) sorted.push_back(&w);
        std::sort(sorted.begin(), sorted.end(),
                  [](const Word* a, const Word* b) { return *a < *b; });
        rep.separation_pass = true;
        rep.separation_pairs = leaves.size() < 2 ? 0 : leaves.size() * (leaves.size() - 1) / 2;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
            if (*sorted[i] == *sorted[i + 1]) {
                rep.separation_pass = false;
                rep.witness = "duplicate leaf " + word_to_string(*sorted[i]);
                break;
            }
        // nesting: each leaf's t_j prefix equals its level-j ancestor
        rep.nesting_pass = true;
        for (std::size_t li = 0; li < leaves.size() && rep.nesting_pass; ++li) {
            for (int j = 1; j < kk; ++j) {
                const Word anc = scheme.materialize(indices[li], j);
                ++rep.nesting_checks;
                if (!std::equal(anc.begin(), anc.end(), leaves[li].begin())) {
                    rep.nesting_pass = false;
                    rep.witness = "nesting breaks at level " + std::to_string(j);
                    break;
                }
            }
        }
    } else {
        rep.mode = "lazy-structural";
        // (i) family words pairwise distinct, exhaustively per level (they are
        //     stored in enumeration order, so duplicates would be adjacent)
        rep.separation_pass = true;
        for (int j = 1; j <= kk && rep.separation_pass; ++j) {
            const auto& words = scheme.family(j).words;
            rep.separation_pairs += words.size();
            for (std::size_t i = 0; i + 1 < words.size(); ++i)
                if (words[i] == words[i + 1]) {
                    rep.separation_pass = false;
                    rep.witness = "duplicate family word at level " + std::to_string(j);
                    break;
                }
        }
        // (ii) slot windows sit disjointly inside [0, t_k)
        long prev_end = 0;
        for (const auto& slot : scheme.slots()) {
            if (slot.start < prev_end) {
                rep.separation_pass = false;
                rep.witness = "overlapping slot windows";
                break;
            }
            prev_end = slot.start + scheme.family(slot.level).n;
        }
        if (prev_end != scheme.t(kk)) {
            rep.separation_pass = false;
            rep.witness = "slot windows do not tile the leaf";
        }
        // (iii) sampled branches: windows hold the chosen family words
        //       verbatim and every t_j prefix equals the level-j ancestor
        rep.nesting_pass = true;
        Rng rng(seed);
        std::vector<int> index(scheme.total_slots());
        for (int s = 0; s < samples && rep.nesting_pass; ++s) {
            for (int si = 0; si < scheme.total_slots(); ++si) {
                const auto& slot = scheme.slots()[si];
                index[si] =
                    static_cast<int>(rng.next_below(scheme.family(slot.level).words.size()));
            }
            const Word leaf = scheme.materialize(index);
            for (int si = 0; si < scheme.total_slots(); ++si) {
                const auto& slot = scheme.slots()[si];
                const Word& seg = scheme.family(slot.level).words[index[si]];
                if (!std::equal(seg.begin(), seg.end(), leaf.begin() + slot.start)) {
                    rep.nesting_pass = false;
                    rep.witness = "window does not hold its family word";
                    break;
                }
            }
            for (int j = 1; j < kk && rep.nesting_pass; ++j) {
                const Word anc = scheme.materialize(index, j);
                ++rep.nesting_checks;
                if (!std::equal(anc.begin(), anc.end(), leaf.begin())) {
                    rep.nesting_pass = false;
                    rep.witness = "nesting breaks at level " + std::to_string(j);
                }
            }
        }
    }
    if (kk == 1) rep.nesting_pass = true; // vacuous
    rep.pass = rep.separation_pass && rep.nesting_pass;
    return rep;
}

} // namespace mfa
