// shift_space.cpp
#include "mfa/shift_space.hpp"

#include <algorithm>
#include <cmath>

namespace mfa {

Word word_from_string(const std::string& digits) {
    Word w;
    w.reserve(digits.size());
    for (char c : digits) {
        if (c < '0' || c > '9')
            throw ConfigError("word must be a digit string, got '" + digits + "'");
        w.push_back(static_cast<Symbol>(c - '0'));
    }
    return w;
}

std::string word_to_string(std::span<const Symbol> w) {
    std::string s;
    s.reserve(w.size());
    for (Symbol a : w) s.push_back(static_cast<char>('0' + a));
    return s;
}

ShiftSpace::ShiftSpace(int alphabet_size, const std::vector<std::vector<int>>& transition)
    : k_(alphabet_size) {
    if (k_ < 2) throw ConfigError("alphabet size must be at least 2");
    if (k_ > 10) throw ConfigError("alphabet size above 10 is not supported");
    if (static_cast<int>(transition.size()) != k_)
        throw ConfigError("transition matrix must have one row per symbol");
    trans_.assign(std::size_t(k_) * k_, 0);
    for (int i = 0; i < k_; ++i) {
        if (static_cast<int>(transition[i].size()) != k_)
            throw ConfigError("transition row " + std::to_string(i) + " has wrong length");
        for (int j = 0; j < k_; ++j) {
            int v = transition[i][j];
            if (v != 0 && v != 1)
                throw ConfigError("transition entries must be 0 or 1");
            trans_[std::size_t(i) * k_ + j] = static_cast<std::uint8_t>(v);
        }
    }
    out_deg_.assign(k_, 0);
    std::vector<int> in_deg(k_, 0);
    for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j)
            if (trans_[std::size_t(i) * k_ + j]) {
                ++out_deg_[i];
                ++in_deg[j];
            }
    for (int i = 0; i < k_; ++i) {
        if (out_deg_[i] == 0)
            throw ConfigError("dead symbol: row " + std::to_string(i) + " is all zero");
        if (in_deg[i] == 0)
            throw ConfigError("dead symbol: column " + std::to_string(i) + " is all zero");
    }
}

ShiftSpace ShiftSpace::full_shift(int alphabet_size) {
    std::vector<std::vector<int>> t(alphabet_size, std::vector<int>(alphabet_size, 1));
    return ShiftSpace(alphabet_size, t);
}

ShiftSpace ShiftSpace::golden_mean() {
    return ShiftSpace(2, {{1, 1}, {1, 0}});
}

bool ShiftSpace::admissible(std::span<const Symbol> w) const {
    for (Symbol a : w)
        if (a >= k_) return false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (!allowed(w[i], w[i + 1])) return false;
    return !w.empty();
}

std::optional<int> ShiftSpace::primitivity_index() const {
    // Wielandt: a primitive k x k matrix has index at most (k-1)^2 + 1.
    const int cap = (k_ - 1) * (k_ - 1) + 1;
    std::vector<std::uint8_t> power = trans_;
    auto all_positive = [&](const std::vector<std::uint8_t>& m) {
        return std::all_of(m.begin(), m.end(), [](std::uint8_t v) { return v != 0; });
    };
    for (int m = 1; m <= cap; ++m) {
        if (all_positive(power)) return m;
        std::vector<std::uint8_t> next(std::size_t(k_) * k_, 0);
        for (int i = 0; i < k_; ++i)
            for (int l = 0; l < k_; ++l) {
                if (!power[std::size_t(i) * k_ + l]) continue;
                for (int j = 0; j < k_; ++j)
                    if (trans_[std::size_t(l) * k_ + j]) next[std::size_t(i) * k_ + j] = 1;
            }
        power.swap(next);
    }
    return std::nullopt;
}

int mixing_gap(const ShiftSpace& space) {
    auto idx = space.primitivity_index();
    if (!idx) throw Error("no uniform specification gap: transition matrix is not primitive");
    return *idx == 1 ? 0 : *idx;
}

Word bridge_word(const ShiftSpace& space, Symbol end, Symbol start, int gap) {
    const int k = space.alphabet_size();
    if (gap == 0) {
        if (!space.allowed(end, start))
            throw InfeasibleError("no admissible bridge of length 0 between " +
                                  std::to_string(end) + " and " + std::to_string(start));
        return {};
    }
    // reach[r][a] = 1 iff `start` is reachable from a in exactly r edges
    std::vector<std::vector<std::uint8_t>> reach(gap + 1, std::vector<std::uint8_t>(k, 0));
    reach[0][start] = 1;
    for (int r = 1; r <= gap; ++r)
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                if (space.allowed(Symbol(a), Symbol(b)) && reach[r - 1][b]) reach[r][a] = 1;
    Word bridge;
    Symbol prev = end;
    for (int pos = 0; pos < gap; ++pos) {
        // the symbol placed here still needs gap - pos edges to reach `start`
        const int edges_left = gap - pos;
        bool placed = false;
        for (int b = 0; b < k && !placed; ++b) {
            if (space.allowed(prev, Symbol(b)) && reach[edges_left][b]) {
                bridge.push_back(Symbol(b));
                prev = Symbol(b);
                placed = true;
            }
        }
        if (!placed)
            throw InfeasibleError("no admissible bridge of length " + std::to_string(gap) +
                                  " between " + std::to_string(end) + " and " +
                                  std::to_string(start));
    }
    return bridge;
}

Word glue(const ShiftSpace& space, std::span<const Word> segments) {
    if (segments.empty()) throw Error("glue: no segments");
    for (const Word& s : segments)
        if (!space.admissible(s)) throw Error("glue: inadmissible segment " + word_to_string(s));
    const int g = mixing_gap(space);
    Word out = segments[0];
    for (std::size_t i = 1; i < segments.size(); ++i) {
        Word b = bridge_word(space, out.back(), segments[i].front(), g);
        out.insert(out.end(), b.begin(), b.end());
        out.insert(out.end(), segments[i].begin(), segments[i].end());
    }
    return out;
}

namespace shift_metric {

int strict_depth(double eps) {
    if (eps <= 0.0) throw Error("shift metric: eps must be positive");
    int j = 0;
    double p = 1.0;
    while (p >= eps) { // powers of 1/2 are exact doubles
        p *= kTheta;
        ++j;
        if (j > 1100) break;
    }
    return j;
}

int forced_prefix(double eps) {
    if (eps <= 0.0) throw Error("shift metric: eps must be positive");
    int j = 0;
    double p = 1.0;
    while (p > eps) {
        p *= kTheta;
        ++j;
        if (j > 1100) break;
    }
    return j;
}

double periodic_bowen_distance(std::span<const Symbol> u, std::span<const Symbol> v, int n) {
    // d_n over the periodic extensions; distances are powers of theta, so the
    // max is theta^(min over shifts of the first-disagreement offset).
    const int nu = static_cast<int>(u.size());
    const int nv = static_cast<int>(v.size());
    const int horizon = n + 2 * std::max(nu, nv) + 64; // past any possible agreement
    int best = horizon + 1;
    for (int shift = 0; shift < n; ++shift) {
        int j = 0;
        while (j < best && j < horizon) {
            if (u[(shift + j) % nu] != v[(shift + j) % nv]) break;
            ++j;
        }
        best = std::min(best, j);
        if (best == 0) return 1.0;
    }
    if (best >= horizon) return 0.0; // identical periodic points
    return std::pow(kTheta, best);
}

} // namespace shift_metric

} // namespace mfa
