// shift_space.hpp — subshifts of finite type: alphabet, transition matrix,
// word admissibility, the 1/2-shift metric, mixing gap and bridge gluing.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mfa/errors.hpp"

namespace mfa {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

Word word_from_string(const std::string& digits);
std::string word_to_string(std::span<const Symbol> w);

// One-sided SFT over {0,...,k-1} with a 0/1 transition matrix.
// Invariant: every row and every column has at least one 1.
class ShiftSpace {
public:
    ShiftSpace(int alphabet_size, const std::vector<std::vector<int>>& transition);

    static ShiftSpace full_shift(int alphabet_size);
    static ShiftSpace golden_mean(); // forbids the word "11"

    int alphabet_size() const { return k_; }
    bool allowed(Symbol a, Symbol b) const { return trans_[std::size_t(a) * k_ + b] != 0; }
    bool admissible(std::span<const Symbol> w) const;
    int out_degree(Symbol a) const { return out_deg_[a]; }

    // Smallest m >= 1 with transition^m entrywise positive, or nullopt.
    std::optional<int> primitivity_index() const;

private:
    int k_;
    std::vector<std::uint8_t> trans_; // row-major k*k
    std::vector<int> out_deg_;
};

// Uniform specification gap of a mixing SFT: 0 when the transition matrix is
// already entrywise positive, otherwise the primitivity index. Any two
// admissible words can be joined by a bridge of exactly this length.
// Throws Error("no uniform specification gap") for non-primitive matrices.
int mixing_gap(const ShiftSpace& space);

// Lexicographically smallest admissible bridge of length `gap` between an end
// symbol and a start symbol. Throws InfeasibleError when none exists.
Word bridge_word(const ShiftSpace& space, Symbol end, Symbol start, int gap);

// Concatenation of the segments with lexicographically smallest admissible
// bridges of length mixing_gap(space) in between.
Word glue(const ShiftSpace& space, std::span<const Word> segments);

// Shift metric d(x,y) = theta^(length of longest common prefix), theta = 1/2.
// Bowen balls are then cylinders of computable integer depth.
namespace shift_metric {

inline constexpr double kTheta = 0.5;

// Smallest j >= 0 with theta^j < eps (eps in (0,1] gives j >= 1).
int strict_depth(double eps);

// d_n(x,y) < eps iff x and y share their first bowen_depth(n,eps) symbols.
inline int bowen_depth(int n, double eps) { return n + strict_depth(eps) - 1; }

// Smallest j >= 0 with theta^j <= eps; pairs within distance eps are exactly
// those sharing at least this many leading symbols.
int forced_prefix(double eps);

// Bowen distance d_n between the periodic extensions of two finite words.
double periodic_bowen_distance(std::span<const Symbol> u, std::span<const Symbol> v, int n);

} // namespace shift_metric

} // namespace mfa
