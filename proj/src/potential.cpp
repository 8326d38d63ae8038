// potential.cpp
#include "mfa/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfa/words.hpp"

namespace mfa {

namespace {

std::size_t pow_size(int k, int m) {
    std::size_t s = 1;
    for (int i = 0; i < m; ++i) {
        if (s > std::numeric_limits<std::size_t>::max() / std::size_t(k))
            throw Error("potential table too large");
        s *= std::size_t(k);
    }
    return s;
}

std::size_t word_index(std::span<const Symbol> w, int k) {
    std::size_t idx = 0;
    for (Symbol a : w) idx = idx * std::size_t(k) + a;
    return idx;
}

} // namespace

Potential::Potential(const ShiftSpace& space, int memory, const std::map<Word, double>& table)
    : k_(space.alphabet_size()), memory_(memory) {
    if (memory_ < 1) throw ConfigError("potential memory must be at least 1");
    if (memory_ > 12) throw ConfigError("potential memory above 12 is not supported");
    table_.assign(pow_size(k_, memory_), 0.0);
    std::size_t admissible_count = 0;
    for (const auto& [w, v] : table) {
        if (static_cast<int>(w.size()) != memory_)
            throw ConfigError("potential table word '" + word_to_string(w) +
                              "' does not match memory " + std::to_string(memory_));
        if (!space.admissible(w))
            throw ConfigError("potential table word '" + word_to_string(w) +
                              "' is not admissible");
        table_[word_index(w, k_)] = v;
        ++admissible_count;
    }
    const std::uint64_t expected = count_words(space, memory_);
    if (admissible_count != expected)
        throw ConfigError("potential table has " + std::to_string(admissible_count) +
                          " entries, expected one per admissible word (" +
                          std::to_string(expected) + ")");
}

Potential Potential::constant(const ShiftSpace& space, double c) {
    Potential p(space.alphabet_size(), 1, std::vector<double>(space.alphabet_size(), c));
    return p;
}

Potential Potential::indicator(const ShiftSpace& space, Symbol s) {
    std::vector<double> t(space.alphabet_size(), 0.0);
    if (s >= space.alphabet_size()) throw Error("indicator symbol out of range");
    t[s] = 1.0;
    return Potential(space.alphabet_size(), 1, std::move(t));
}

Potential Potential::from_dense(const ShiftSpace& space, int memory, std::vector<double> table) {
    const int k = space.alphabet_size();
    if (table.size() != pow_size(k, memory))
        throw Error("dense potential table has wrong size");
    // zero the inadmissible entries so seam evaluations follow the documented
    // convention
    Word w(memory, 0);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
        std::size_t rest = idx;
        for (int pos = memory - 1; pos >= 0; --pos) {
            w[pos] = Symbol(rest % k);
            rest /= k;
        }
        if (!space.admissible(w)) table[idx] = 0.0;
    }
    return Potential(k, memory, std::move(table));
}

double Potential::eval(std::span<const Symbol> window) const {
    return table_[word_index(window, k_)];
}

double Potential::max_abs() const {
    double m = 0.0;
    for (double v : table_) m = std::max(m, std::abs(v));
    return m;
}

double Potential::min_admissible(const ShiftSpace& s) const {
    double m = std::numeric_limits<double>::infinity();
    for_each_word(s, memory_, [&](std::span<const Symbol> w) { m = std::min(m, eval(w)); });
    return m;
}

double Potential::max_admissible(const ShiftSpace& s) const {
    double m = -std::numeric_limits<double>::infinity();
    for_each_word(s, memory_, [&](std::span<const Symbol> w) { m = std::max(m, eval(w)); });
    return m;
}

Potential combine(const ShiftSpace& space, double a, const Potential& phi, double b,
                  const Potential& psi) {
    const int k = space.alphabet_size();
    if (phi.alphabet_size() != k || psi.alphabet_size() != k)
        throw Error("combine: potentials live on a different alphabet");
    const int m = std::max(phi.memory(), psi.memory());
    std::size_t size = 1;
    for (int i = 0; i < m; ++i) size *= std::size_t(k);
    std::vector<double> table(size, 0.0);
    Word w(m, 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
        std::size_t rest = idx;
        for (int pos = m - 1; pos >= 0; --pos) {
            w[pos] = Symbol(rest % k);
            rest /= k;
        }
        table[idx] = a * phi.eval(std::span<const Symbol>(w.data(), phi.memory())) +
                     b * psi.eval(std::span<const Symbol>(w.data(), psi.memory()));
    }
    return Potential::from_dense(space, m, std::move(table));
}

double birkhoff_sum(const Potential& pot, std::span<const Symbol> w) {
    const int n = static_cast<int>(w.size());
    const int m = pot.memory();
    if (n < m)
        throw Error("birkhoff_sum: word of length " + std::to_string(n) +
                    " is shorter than potential memory " + std::to_string(m));
    Word window(m);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) window[j] = w[(i + j) % n];
        sum += pot.eval(window);
    }
    return sum;
}

double birkhoff_average(const Potential& pot, std::span<const Symbol> w) {
    return birkhoff_sum(pot, w) / static_cast<double>(w.size());
}

double birkhoff_sum_prefix(const Potential& pot, std::span<const Symbol> w, int n) {
    const int m = pot.memory();
    if (static_cast<int>(w.size()) < n + m - 1)
        throw Error("birkhoff_sum_prefix: word too short for n=" + std::to_string(n));
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += pot.eval(w.subspan(i, m));
    return sum;
}

double variation(const ShiftSpace& space, const Potential& pot, double eps) {
    const int m = pot.memory();
    const int forced = shift_metric::forced_prefix(eps);
    if (forced >= m) return 0.0;
    // max oscillation over pairs of admissible m-words sharing the forced prefix
    std::vector<Word> words = enumerate_words(space, m);
    double best = 0.0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        for (std::size_t j = i + 1; j < words.size(); ++j) {
            bool share = true;
            for (int p = 0; p < forced; ++p)
                if (words[i][p] != words[j][p]) {
                    share = false;
                    break;
                }
            if (!share) continue;
            best = std::max(best, std::abs(pot.eval(words[i]) - pot.eval(words[j])));
        }
    }
    return best;
}

} // namespace mfa
