// words.hpp — streaming enumeration of admissible words (lexicographic DFS
// with prefix pruning) and separated sets.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mfa/shift_space.hpp"

namespace mfa {

namespace detail {

template <class F>
void word_dfs(const ShiftSpace& space, Word& buf, int n, F& fn) {
    const int k = space.alphabet_size();
    if (static_cast<int>(buf.size()) == n) {
        fn(std::span<const Symbol>(buf.data(), buf.size()));
        return;
    }
    if (buf.empty()) {
        for (int a = 0; a < k; ++a) {
            buf.push_back(Symbol(a));
            word_dfs(space, buf, n, fn);
            buf.pop_back();
        }
        return;
    }
    const Symbol last = buf.back();
    for (int a = 0; a < k; ++a) {
        if (!space.allowed(last, Symbol(a))) continue;
        buf.push_back(Symbol(a));
        word_dfs(space, buf, n, fn);
        buf.pop_back();
    }
}

} // namespace detail

// Calls fn(span) once per admissible n-word, in lexicographic order.
// The span is only valid during the call.
template <class F>
void for_each_word(const ShiftSpace& space, int n, F&& fn) {
    if (n < 1) throw Error("word length must be at least 1");
    Word buf;
    buf.reserve(n);
    detail::word_dfs(space, buf, n, fn);
}

// Same, restricted to words extending a fixed admissible prefix. Lets callers
// split the enumeration tree into disjoint subtrees for independent workers.
template <class F>
void for_each_word_with_prefix(const ShiftSpace& space, std::span<const Symbol> prefix, int n,
                               F&& fn) {
    if (n < 1) throw Error("word length must be at least 1");
    if (static_cast<int>(prefix.size()) > n) throw Error("prefix longer than word length");
    if (!prefix.empty() && !space.admissible(prefix)) return;
    Word buf(prefix.begin(), prefix.end());
    buf.reserve(n);
    detail::word_dfs(space, buf, n, fn);
}

// Number of admissible n-words = sum of entries of transition^(n-1).
// Guards against uint64 overflow (throws Error).
std::uint64_t count_words(const ShiftSpace& space, int n);

std::vector<Word> enumerate_words(const ShiftSpace& space, int n);

// Maximal (n,eps)-separated set of n-words under the shift metric on periodic
// extensions. Distinct admissible words realize Bowen distance 1 within n
// steps, so for every eps in (0,1] this is exactly all admissible n-words.
std::vector<Word> separated_set(const ShiftSpace& space, int n, double eps);

} // namespace mfa
