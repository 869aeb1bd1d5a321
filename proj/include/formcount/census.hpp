#ifndef FORMCOUNT_CENSUS_HPP
#define FORMCOUNT_CENSUS_HPP

#include <cstdint>
#include <vector>

#include "formcount/count.hpp"
#include "formcount/forms.hpp"

namespace formcount {

struct CensusBudget {
    std::size_t mitm_bytes = kDefaultMitmBudgetBytes;
    std::size_t bitset_bits = std::size_t{1} << 30;   // dedup strategy switch point
    std::size_t stream_bytes = std::size_t{1} << 30;  // sort-based dedup buffer cap
};

// Incidence of the (form, witness) relation: sum over primitive pairs with
// shell <= r_max of the exact count of forms F in the height-X box with
// F(u,v) = m. Counts forms with multiplicity.
Int incidence_count(int n, std::int64_t m, std::int64_t x, std::int64_t r_max,
                    const CensusBudget& budget = {});
Int incidence_count_serial(int n, std::int64_t m, std::int64_t x, std::int64_t r_max,
                           const CensusBudget& budget = {});

enum class DedupStrategy { automatic, bitset, stream_sort };

// Number of distinct forms in the box with at least one witness of shell
// <= r_max. bitset marks a bit per box cell; stream_sort sorts the solution
// tuples and counts unique ones.
Int distinct_representing_forms(int n, std::int64_t m, std::int64_t x, std::int64_t r_max,
                                DedupStrategy strategy = DedupStrategy::automatic,
                                const CensusBudget& budget = {});

// sum_{k > a} k^{-s} for integer s >= 2, via Euler-Maclaurin.
double hurwitz_tail(int s, std::int64_t a);

// Heuristic bound on representing forms whose smallest witness shell exceeds
// r_max: sum_{R > r_max} 8R (c_emp X^n / R^n + [R <= X]). c_emp is the
// empirical audit-grid constant, so this is labeled HEURISTIC in outputs.
double tail_bracket(int n, std::int64_t x, std::int64_t r_max, double c_emp);

struct CensusReport {
    int n = 0;
    std::int64_t m = 0;
    std::int64_t x = 0;
    std::int64_t r_max = 0;
    Int incidence;
    Int distinct;
    Int total;  // (2X+1)^{n+1}
    double c_emp = 0;
    double tail_estimate = 0;  // HEURISTIC
    double prop_lower = 0;     // distinct / total
    double prop_upper = 0;     // min(1, (distinct + tail) / total)
};

CensusReport census(int n, std::int64_t m, std::int64_t x, std::int64_t r_max, double c_emp,
                    const CensusBudget& budget = {});

struct FitReport {
    std::vector<CensusReport> points;
    double c_emp = 0;
    double c_fit = 0;        // model: proportion ~ c / X
    double residual = 0;     // relative rms of prop_lower * X around c_fit
    double alt_c_fit = 0;    // model: proportion ~ c log X / X
    double alt_residual = 0;
    bool monotone_decay = false;  // prop_lower strictly decreasing once X > |m|
};

// Census rows over an ascending X grid (>= 4 points) plus the decay fit.
// The audit-grid constant is computed once per scan on a fixed small grid.
FitReport proportion_scan(int n, std::int64_t m, const std::vector<std::int64_t>& xs,
                          std::int64_t r_max, const CensusBudget& budget = {});

struct ReducibleCensus {
    Int count;  // reducible forms in the box, zero form included by convention
    Int zero_forms;
    Int total;
    double proportion = 0;
};

ReducibleCensus reducible_census(int n, std::int64_t x);

// #{(x,y) : max(|x|,|y|) <= B, F(x,y) = m}. A lower bound for the true
// solution count; no completeness claim.
Int thue_count(const BinaryForm& f, const Int& m, std::int64_t b);

}  // namespace formcount

#endif
