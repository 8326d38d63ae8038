// words.cpp
#include "mfa/words.hpp"

#include <limits>

namespace mfa {

std::uint64_t count_words(const ShiftSpace& space, int n) {
    if (n < 1) throw Error("word length must be at least 1");
    const int k = space.alphabet_size();
    // column-count vector: c[a] = number of admissible words of current length
    // ending anywhere, starting from symbol a
    std::vector<std::uint64_t> c(k, 1);
    for (int step = 1; step < n; ++step) {
        std::vector<std::uint64_t> next(k, 0);
        for (int a = 0; a < k; ++a) {
            std::uint64_t sum = 0;
            for (int b = 0; b < k; ++b) {
                if (!space.allowed(Symbol(a), Symbol(b))) continue;
                if (sum > std::numeric_limits<std::uint64_t>::max() - c[b])
                    throw Error("word count overflows 64 bits at n=" + std::to_string(n));
                sum += c[b];
            }
            next[a] = sum;
        }
        c.swap(next);
    }
    std::uint64_t total = 0;
    for (int a = 0; a < k; ++a) {
        if (total > std::numeric_limits<std::uint64_t>::max() - c[a])
            throw Error("word count overflows 64 bits at n=" + std::to_string(n));
        total += c[a];
    }
    return total;
}

std::vector<Word> enumerate_words(const ShiftSpace& space, int n) {
    std::vector<Word> out;
    out.reserve(count_words(space, n));
    for_each_word(space, n, [&](std::span<const Symbol> w) { out.emplace_back(w.begin(), w.end()); });
    return out;
}

std::vector<Word> separated_set(const ShiftSpace& space, int n, double eps) {
    if (eps <= 0.0 || eps > 1.0) throw Error("separated_set: eps must lie in (0,1]");
    return enumerate_words(space, n);
}

} // namespace mfa
