// potential.hpp — locally constant potentials of finite memory on an SFT,
// Birkhoff sums with periodic extension, and the variation functional.
#pragma once

#include <map>
#include <span>
#include <vector>

#include "mfa/shift_space.hpp"

namespace mfa {

// Real-valued function of the first `memory` symbols. Stored as a dense table
// over all memory-words; entries at inadmissible words are fixed to zero and
// may only be hit across the periodic seam of a finite word.
class Potential {
public:
    Potential(const ShiftSpace& space, int memory, const std::map<Word, double>& table);

    static Potential constant(const ShiftSpace& space, double c);
    static Potential indicator(const ShiftSpace& space, Symbol s);
    // Test/fixture convenience: dense table of size k^memory in lexicographic
    // order; entries at inadmissible words are zeroed.
    static Potential from_dense(const ShiftSpace& space, int memory, std::vector<double> table);

    int memory() const { return memory_; }
    int alphabet_size() const { return k_; }

    double eval(std::span<const Symbol> window) const; // window.size() == memory
    double eval_index(std::size_t idx) const { return table_[idx]; }
    std::size_t table_size() const { return table_.size(); }

    double max_abs() const;                            // sup norm over the table
    double min_admissible(const ShiftSpace& s) const;  // min over admissible words
    double max_admissible(const ShiftSpace& s) const;

private:
    Potential(int k, int memory, std::vector<double> table)
        : k_(k), memory_(memory), table_(std::move(table)) {}

    int k_;
    int memory_;
    std::vector<double> table_; // size k^memory
};

// a*phi + b*psi lifted to common memory max(m_phi, m_psi).
Potential combine(const ShiftSpace& space, double a, const Potential& phi, double b,
                  const Potential& psi);

// S_n pot over the word, positions past the end read from the periodic
// extension of w. Words shorter than the memory are rejected.
double birkhoff_sum(const Potential& pot, std::span<const Symbol> w);
double birkhoff_average(const Potential& pot, std::span<const Symbol> w);

// S_n pot using only symbols present in w; requires |w| >= n + memory - 1.
double birkhoff_sum_prefix(const Potential& pot, std::span<const Symbol> w, int n);

// sup |pot(x) - pot(y)| over pairs of points within shift-metric distance eps.
// Zero whenever eps < theta^(memory-1).
double variation(const ShiftSpace& space, const Potential& pot, double eps);

} // namespace mfa
