// test_symbolic.cpp — admissible words, Birkhoff sums, separation, variation,
// mixing gap and gluing on the two fixture shifts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "mfa/potential.hpp"
#include "mfa/shift_space.hpp"
#include "mfa/words.hpp"
#include "oracles.hpp"

using namespace mfa;

namespace {

// brute-force enumeration oracle: filter all k^n strings by pairwise checks
std::vector<Word> brute_force_words(const ShiftSpace& s, int n) {
    std::vector<Word> out;
    const int k = s.alphabet_size();
    std::vector<int> digits(n, 0);
    for (;;) {
        Word w(digits.begin(), digits.end());
        if (s.admissible(w)) out.push_back(w);
        int pos = n - 1;
        while (pos >= 0 && ++digits[pos] == k) digits[pos--] = 0;
        if (pos < 0) break;
    }
    return out;
}

} // namespace

TEST_CASE("shift space validation") {
    CHECK_THROWS_AS(ShiftSpace(1, {{1}}), ConfigError);
    // dead row
    CHECK_THROWS_AS(ShiftSpace(2, {{0, 0}, {1, 1}}), ConfigError);
    // dead column
    CHECK_THROWS_AS(ShiftSpace(2, {{1, 0}, {1, 0}}), ConfigError);
    CHECK_NOTHROW(ShiftSpace::golden_mean());
}

TEST_CASE("enumerate_words: counts and order") {
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const ShiftSpace gm = ShiftSpace::golden_mean();

    CHECK(enumerate_words(full, 3).size() == 8);
    CHECK(enumerate_words(full, 1).size() == 2);

    const auto words = enumerate_words(gm, 3);
    REQUIRE(words.size() == 5);
    const std::vector<std::string> expect = {"000", "001", "010", "100", "101"};
    for (std::size_t i = 0; i < words.size(); ++i) CHECK(word_to_string(words[i]) == expect[i]);

    // against the brute-force filter oracle
    CHECK(words == brute_force_words(gm, 3));

    // lexicographic order and streaming agree with materialization
    std::vector<Word> streamed;
    for_each_word(gm, 4, [&](std::span<const Symbol> w) {
        streamed.emplace_back(w.begin(), w.end());
    });
    CHECK(streamed == enumerate_words(gm, 4));
    CHECK(std::is_sorted(streamed.begin(), streamed.end()));
}

TEST_CASE("word count equals the transition-power sum, n <= 12") {
    for (const ShiftSpace& s : {ShiftSpace::full_shift(2), ShiftSpace::golden_mean(),
                                ShiftSpace(3, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}})}) {
        for (int n = 1; n <= 12; ++n)
            CHECK(count_words(s, n) == brute_force_words(s, n).size());
    }
}

TEST_CASE("prefix partitioning covers the enumeration exactly once") {
    const ShiftSpace gm = ShiftSpace::golden_mean();
    std::vector<Word> combined;
    for (const Word& p : enumerate_words(gm, 2))
        for_each_word_with_prefix(gm, p, 6, [&](std::span<const Symbol> w) {
            combined.emplace_back(w.begin(), w.end());
        });
    std::sort(combined.begin(), combined.end());
    CHECK(combined == enumerate_words(gm, 6));
}

TEST_CASE("birkhoff sums with the periodic convention") {
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const Potential ones = Potential::indicator(full, 1);
    CHECK(birkhoff_sum(ones, word_from_string("0110")) == doctest::Approx(2.0));

    const Potential c = Potential::constant(full, 0.7);
    CHECK(birkhoff_sum(c, word_from_string("01101")) == doctest::Approx(5 * 0.7));

    // golden-mean memory-2 potential: 1 on the word "10"
    const ShiftSpace gm = ShiftSpace::golden_mean();
    const Potential ten =
        Potential(gm, 2, {{word_from_string("00"), 0.0},
                          {word_from_string("01"), 0.0},
                          {word_from_string("10"), 1.0}});
    CHECK(birkhoff_sum(ten, word_from_string("1010")) == doctest::Approx(2.0));

    CHECK_THROWS_AS(birkhoff_sum(ten, word_from_string("1")), Error);

    // periodic doubling for memory 1
    const Word w = word_from_string("0110");
    Word ww = w;
    ww.insert(ww.end(), w.begin(), w.end());
    CHECK(birkhoff_sum(ones, ww) == doctest::Approx(2.0 * birkhoff_sum(ones, w)));
}

TEST_CASE("separated sets") {
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const ShiftSpace gm = ShiftSpace::golden_mean();

    CHECK(separated_set(full, 2, 1.0).size() == 4);
    CHECK(separated_set(gm, 3, 1.0).size() == enumerate_words(gm, 3).size());

    // eps below the cylinder scale: distinct prefixes still separate
    const auto words = separated_set(full, 2, 0.25);
    CHECK(words.size() == 4);
    // brute-force pairwise check of the claimed separation
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j) {
            const double d = oracle::bowen_distance_bruteforce(words[i], words[j], 2, 0.5);
            CHECK(d >= 0.25);
            CHECK(d == shift_metric::periodic_bowen_distance(words[i], words[j], 2));
        }
    CHECK_THROWS_AS(separated_set(full, 2, 1.5), Error);
}

TEST_CASE("variation of locally constant potentials") {
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const Potential ones = Potential::indicator(full, 1);
    CHECK(variation(full, ones, 0.25) == 0.0);
    CHECK(variation(full, ones, 1.0) == doctest::Approx(1.0));

    const ShiftSpace gm = ShiftSpace::golden_mean();
    const Potential p2 = Potential(gm, 2, {{word_from_string("00"), 0.3},
                                           {word_from_string("01"), -0.2},
                                           {word_from_string("10"), 1.1}});
    // eps = 0.5 forces agreement on the first symbol only
    CHECK(variation(gm, p2, 0.5) == doctest::Approx(0.5)); // |0.3 - (-0.2)|
    CHECK(variation(gm, p2, 0.25) == 0.0);
    CHECK(variation(gm, p2, 1.0) == doctest::Approx(1.3)); // |1.1 - (-0.2)|

    // monotone in eps
    double prev = 0.0;
    for (double eps : {0.1, 0.2, 0.3, 0.5, 0.7, 1.0}) {
        const double v = variation(gm, p2, eps);
        CHECK(v >= prev);
        prev = v;
    }
    // zero below the resolution theta^(memory-1)
    CHECK(variation(gm, p2, 0.49) == 0.0);
}

TEST_CASE("mixing gap") {
    CHECK(mixing_gap(ShiftSpace::full_shift(2)) == 0);
    CHECK(mixing_gap(ShiftSpace::full_shift(3)) == 0);
    CHECK(mixing_gap(ShiftSpace::golden_mean()) == 2);
    CHECK_THROWS_WITH_AS(mixing_gap(ShiftSpace(2, {{0, 1}, {1, 0}})),
                         doctest::Contains("no uniform specification gap"), Error);
}

TEST_CASE("glue") {
    const ShiftSpace full = ShiftSpace::full_shift(2);
    const Word a = word_from_string("01"), b = word_from_string("10");
    std::vector<Word> segs = {a, b};
    CHECK(word_to_string(glue(full, segs)) == "0110");

    const ShiftSpace gm = ShiftSpace::golden_mean();
    std::vector<Word> ones = {word_from_string("1"), word_from_string("1")};
    CHECK(word_to_string(glue(gm, ones)) == "1001"); // bridge 00 is lex-smallest

    std::vector<Word> single = {word_from_string("101")};
    CHECK(glue(gm, single) == word_from_string("101"));
}

TEST_CASE("bridge existence is exhaustive on the golden mean for lengths <= 8") {
    const ShiftSpace gm = ShiftSpace::golden_mean();
    const int g = mixing_gap(gm);
    std::vector<Word> all;
    for (int n = 1; n <= 8; ++n) {
        const auto words = enumerate_words(gm, n);
        all.insert(all.end(), words.begin(), words.end());
    }
    for (const Word& u : all)
        for (const Word& v : all) {
            const Word b = bridge_word(gm, u.back(), v.front(), g);
            Word joined = u;
            joined.insert(joined.end(), b.begin(), b.end());
            joined.insert(joined.end(), v.begin(), v.end());
            REQUIRE(gm.admissible(joined));
        }
}

TEST_CASE("bowen depths under the 1/2 metric") {
    // d_n(x,y) < theta^j iff the first n+j symbols agree
    CHECK(shift_metric::bowen_depth(5, 1.0) == 5);
    CHECK(shift_metric::bowen_depth(5, 0.5) == 6);
    CHECK(shift_metric::bowen_depth(5, 0.25) == 7);
    CHECK(shift_metric::bowen_depth(5, 0.3) == 6);
    CHECK(shift_metric::forced_prefix(1.0) == 0);
    CHECK(shift_metric::forced_prefix(0.5) == 1);
    CHECK(shift_metric::forced_prefix(0.3) == 2);
}

TEST_CASE("potential table validation") {
    const ShiftSpace gm = ShiftSpace::golden_mean();
    // missing an admissible word
    CHECK_THROWS_AS(Potential(gm, 2, {{word_from_string("00"), 1.0}}), ConfigError);
    // inadmissible word in the table
    CHECK_THROWS_AS(Potential(gm, 2, {{word_from_string("00"), 0.0},
                                      {word_from_string("01"), 0.0},
                                      {word_from_string("10"), 0.0},
                                      {word_from_string("11"), 0.0}}),
                    ConfigError);
}
