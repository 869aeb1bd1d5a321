#ifndef FORMCOUNT_COUNT_HPP
#define FORMCOUNT_COUNT_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "formcount/slice.hpp"

namespace formcount {

inline constexpr std::size_t kDefaultMitmBudgetBytes = std::size_t{512} << 20;

// Serial reference: scans the whole box (2X+1)^d and tests <w,a> = c.
// Only for small boxes; the production algorithms are checked against it.
Int count_points_exhaustive(const SliceSpec& spec);

// Pivot enumeration: iterate the d-1 cheapest coordinates, solve the
// largest-weight coordinate by divisibility. Exact.
Int count_points_naive(const SliceSpec& spec);         // OpenMP over the outer coordinate
Int count_points_naive_serial(const SliceSpec& spec);  // same algorithm, no threading

// Meet-in-the-middle: split coordinates by parity of index, enumerate and
// sort half sums, merge. Throws capacity_error when the half tables exceed
// the memory budget.
Int count_points_mitm(const SliceSpec& spec, std::size_t budget_bytes = kDefaultMitmBudgetBytes);

// mitm with fallback to naive on capacity.
Int count_points(const SliceSpec& spec, std::size_t budget_bytes = kDefaultMitmBudgetBytes);

// sum_c count(w,c,X) - (2X+1)^d, each slice counted independently; the
// hyperplane family partitions the box so the residual must be 0.
Int partition_residual(const std::vector<std::int64_t>& w, std::int64_t x,
                       std::size_t budget_bytes = kDefaultMitmBudgetBytes);

// One audited slice: exact count against the volume and surface terms.
struct CountReport {
    std::vector<std::int64_t> w;
    std::int64_t c = 0;
    std::int64_t x = 0;
    Int exact_count;
    Int norm_sq;
    Rat vol;          // Vol_n(S)/covol, exact
    RadicalSum surf;  // exact surface measure
    double discrepancy = 0;     // |N - Vol/covol|
    double surf_over_delta = 0; // Surf/covol
    double ratio = 0;           // |N - Vol/covol| / (Surf/covol + 1)
    bool mitm_used = false;
    bool naive_checked = false;
};

// Counts via mitm (fallback naive); when the naive pass is affordable it
// reruns it and aborts with invariant_violation on disagreement.
CountReport davenport_audit(const SliceSpec& spec,
                            std::size_t budget_bytes = kDefaultMitmBudgetBytes,
                            std::size_t naive_check_limit = 20'000'000);

// Max audit ratio over power-vector slices for all primitive pairs with
// shell <= r_max and the given X grid. The empirical stand-in for the
// non-explicit constant in the lattice-point estimate.
double davenport_grid_constant(int n, std::int64_t m, std::int64_t r_max,
                               const std::vector<std::int64_t>& xs,
                               std::size_t budget_bytes = kDefaultMitmBudgetBytes);

}  // namespace formcount

#endif
