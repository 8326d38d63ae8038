// moran.hpp — the lower-bound construction at desk scale: level families of
// words with pinned Birkhoff averages, glued intermediate sets, the weighted
// measures on the resulting fractal, and its numerical verifiers.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mfa/potential.hpp"
#include "mfa/shift_space.hpp"

namespace mfa {

struct MoranConfig {
    double alpha = 0.5;
    double gamma = 0.1;
    double epsilon = 1.0;          // ball geometry parameter, in (0,1]
    std::vector<int> n_k;          // family word length per level
    std::vector<int> N_k;          // copies per level
    std::vector<double> delta_k;   // strictly decreasing level tolerances
    std::vector<int> l_k;          // strictly increasing, n_k >= l_k
    std::uint64_t leaf_budget = 1000000;
    enum class Mode { Auto, Eager, Lazy } mode = Mode::Auto;

    int levels() const { return static_cast<int>(n_k.size()); }
    void validate() const; // throws ConfigError on a broken schedule
};

// All admissible n-words whose Birkhoff phi-average lies within delta of
// alpha, weighted by exp(S_n psi). Words are stored in lexicographic order.
struct SeparatedFamily {
    int level = 0;
    int n = 0;
    std::vector<Word> words;
    std::vector<double> log_weights; // S_n psi per word
    double log_mass = 0.0;           // log M_k
    double check_value = 0.0;        // (1/n) log M_k

    // convex-combination bookkeeping for composite families (single
    // component with lambda 1 for plain families)
    std::vector<double> lambdas;
    std::vector<double> alphas;

    // normalized cumulative weights for prefix-range mass queries
    double weight_max = 0.0;
    std::vector<double> cum; // cum[i] = sum_{t<i} exp(log_weights[t]-weight_max)

    // log sum of weights over words whose first p symbols equal `prefix`;
    // -inf when the range is empty
    double log_prefix_mass(std::span<const Symbol> prefix) const;
    std::pair<std::size_t, std::size_t> prefix_range(std::span<const Symbol> prefix) const;
};

SeparatedFamily build_family(const ShiftSpace& space, const Potential& phi, const Potential& psi,
                             int level, int n, double delta, double alpha,
                             std::uint64_t family_cap = 2000000);

// One ergodic component of a convex-combination target measure.
struct FamilyComponent {
    double alpha;  // component Birkhoff average
    double lambda; // convex weight; lambdas sum to 1
};

// Family approximating a convex combination: per component i, words of
// length floor(lambda_i * n_hat) around alpha_i are built and every tuple is
// glued (bridges of length mixing_gap). Word length is sum_i n_i plus the
// bridges; the family average sits near sum_i lambda_i alpha_i up to the edge
// effects the level-convergence bound absorbs.
SeparatedFamily build_composite_family(const ShiftSpace& space, const Potential& phi,
                                       const Potential& psi, int level, int n_hat, double delta,
                                       std::span<const FamilyComponent> components,
                                       std::uint64_t family_cap = 2000000);

// Glued intermediate sets. Leaves are addressed by index words (one family
// choice per slot); weights factorize across levels so cylinder masses never
// require leaf enumeration.
class MoranScheme {
public:
    struct Slot {
        int level;  // 1-based
        int pos;    // slot within the level, 0-based
        long start; // window start offset in the leaf word
    };

    static MoranScheme build(const ShiftSpace& space, std::vector<SeparatedFamily> families,
                             const MoranConfig& cfg);

    const ShiftSpace& space() const { return *space_; }
    const MoranConfig& config() const { return cfg_; }
    int levels() const { return static_cast<int>(families_.size()); }
    int gap() const { return gap_; }
    long t(int level) const { return t_[level - 1]; }  // prescribed length
    long c(int level) const { return c_[level - 1]; }
    const SeparatedFamily& family(int level) const { return families_[level - 1]; }
    const std::vector<Slot>& slots() const { return slots_; }
    int total_slots() const { return static_cast<int>(slots_.size()); }
    int slots_through_level(int level) const;

    bool eager() const { return eager_; }
    double log_leaf_count() const { return log_leaf_count_; }
    std::uint64_t leaf_count() const; // throws when not eager

    const Word& bridge(Symbol a, Symbol b) const { return bridges_[std::size_t(a) * k_ + b]; }

    // Glue the chosen family words (index entry per slot, level-major order)
    // into the leaf word of length t(level); `level` defaults to the deepest.
    Word materialize(std::span<const int> index, int level = 0) const;

    // Enumerate every leaf index in lexicographic order (eager schemes only).
    template <class F>
    void for_each_leaf(F&& fn) const {
        const std::uint64_t total = leaf_count();
        std::vector<int> index(total_slots(), 0);
        for (std::uint64_t it = 0; it < total; ++it) {
            fn(std::span<const int>(index.data(), index.size()));
            // odometer, last slot fastest
            for (int s = total_slots() - 1; s >= 0; --s) {
                const int size = static_cast<int>(families_[slots_[s].level - 1].words.size());
                if (++index[s] < size) break;
                index[s] = 0;
            }
        }
    }

private:
    const ShiftSpace* space_ = nullptr;
    MoranConfig cfg_;
    int k_ = 0;
    int gap_ = 0;
    std::vector<SeparatedFamily> families_;
    std::vector<long> c_, t_;
    std::vector<Slot> slots_;
    std::vector<Word> bridges_; // k*k table of lex-smallest bridges
    bool eager_ = false;
    double log_leaf_count_ = 0.0;
};

// mu_level: probability measure on cylinders of depth t(level) with leaf
// weights prod exp(S_{n_i} psi) and normalizer kappa = prod M_i^{N_i}.
class MoranMeasure {
public:
    MoranMeasure(const MoranScheme& scheme, int level = 0); // 0 = deepest

    const MoranScheme& scheme() const { return *scheme_; }
    int level() const { return level_; }
    double log_kappa() const { return log_kappa_; }

    double log_leaf_weight(std::span<const int> index) const;
    // log mu(cylinder of the first |w| symbols); -inf when no leaf matches.
    double cylinder_log_mass(std::span<const Symbol> w) const;

private:
    const MoranScheme* scheme_;
    int level_;
    double log_kappa_;
};

// ---- verifiers ----

struct FamilyCheck {
    int level;
    int n;
    std::size_t size;
    double check_value; // (1/n) log M
    bool pass;          // check_value >= reference - gamma
};

struct FamilyReport {
    double reference; // h + int psi of the optimizing measure (caller supplied)
    double gamma;
    std::vector<FamilyCheck> levels;
    int n_star; // smallest family length satisfying the bound, -1 if none
    bool pass;
};
FamilyReport check_family_lower_bounds(const MoranScheme& scheme, double reference, double gamma);

struct PdpBall {
    Word q;
    int n;
};

std::vector<PdpBall> sample_pdp_balls(const MoranScheme& scheme, int count, int n_min,
                                      std::uint64_t seed);

struct PdpReport {
    double s = 0.0;
    double eps = 0.0;
    int checked = 0;
    int skipped = 0;          // balls disjoint from the scheme's cylinders
    double max_violation = 0.0; // max of log mu(B) - (-n s + S_n psi(q))
    double fitted_log_k = 0.0;  // max(0, max_violation)
    double residual = 0.0;      // max_violation - fitted_log_k, always <= 0
    int n_max = 0;              // deepest ball checked
    double threshold = 0.0;     // 0.1 * n_max
    bool pass = false;          // fitted_log_k <= threshold
};
PdpReport verify_pdp(const MoranMeasure& measure, double s, const Potential& psi, double eps,
                     std::span<const PdpBall> balls, int n_min, int workers = 1);

struct LevelConvergenceReport {
    std::vector<double> max_dev; // per level, over sampled leaves
    std::vector<double> bound;   // delta_k + seam slack + gap term + 1/k
    bool devs_decreasing = false;
    bool bounds_decreasing = false;
    bool within_bounds = false;
    bool pass = false;
};
LevelConvergenceReport verify_level_convergence(const MoranScheme& scheme, const Potential& phi,
                                                double alpha, int samples, std::uint64_t seed);

struct SeparationNestingReport {
    std::string mode; // "eager-exhaustive", "lazy-structural" or "vacuous"
    bool separation_pass = false;
    bool nesting_pass = false;
    std::uint64_t separation_pairs = 0; // pairs or words examined
    std::uint64_t nesting_checks = 0;
    std::string witness; // first failure, empty when passing
    bool pass = false;
};
// Exhaustive pairwise + parent-prefix checks when the leaf set is small
// (<= eager_cap); otherwise family-exhaustive structural checks plus sampled
// branch nesting.
SeparationNestingReport verify_separation_nesting(const MoranScheme& scheme, int samples = 1000,
                                                  std::uint64_t seed = 1,
                                                  std::uint64_t eager_cap = 10000);

} // namespace mfa
