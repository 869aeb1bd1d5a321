#ifndef FORMCOUNT_SLICE_HPP
#define FORMCOUNT_SLICE_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "formcount/arith.hpp"
#include "formcount/forms.hpp"

namespace formcount {

// A hyperplane-box intersection problem: the slice
//   S = { a in [-X,X]^d : <w,a> = c }.
// Weight magnitudes are guarded at construction so that every partial sum
// that counting or geometry can form stays inside int64.
class SliceSpec {
  public:
    SliceSpec(std::vector<std::int64_t> w, std::int64_t c, std::int64_t x);

    const std::vector<std::int64_t>& w() const { return w_; }
    std::int64_t c() const { return c_; }
    std::int64_t x() const { return x_; }
    int dim() const { return static_cast<int>(w_.size()); }

    Int norm_sq() const;
    std::int64_t abs_weight_sum() const;  // sum |w_k|
    bool feasible() const;                // |c| <= X * sum |w_k|

  private:
    std::vector<std::int64_t> w_;
    std::int64_t c_;
    std::int64_t x_;
};

// Power-vector slice <w(u,v), a> = m on the height-X box; throws
// capacity_error when the power vector leaves the 64-bit working range.
SliceSpec make_power_slice(const PowerVector& pv, std::int64_t m, std::int64_t x);

// Integer basis of the kernel lattice L = { x in Z^d : <w,x> = 0 } for
// primitive w, as columns. The basis generates all of L, not just a
// finite-index sublattice (the accumulated column transform is unimodular).
struct KernelBasis {
    std::vector<std::vector<Int>> columns;  // d-1 vectors of length d

    int ambient_dim() const { return columns.empty() ? 0 : static_cast<int>(columns[0].size()); }
    int rank() const { return static_cast<int>(columns.size()); }
};

KernelBasis kernel_basis(const std::vector<Int>& w);

// det(M^T M) for the basis matrix M: the squared covolume of the lattice the
// columns generate. Exact integer.
Int gram_covolume(const KernelBasis& basis);

// Sum of rational multiples of square roots of integers,
//   value = sum_i coeff_i * sqrt(radicand_i),
// the exact form that facet surface measures take. Radicands are kept as
// exact integers; equal radicands merge.
class RadicalSum {
  public:
    void add(const Rat& coeff, const Int& radicand);
    double value() const;
    bool exactly_rational() const;  // all radicands are perfect squares
    Rat rational_value() const;     // only valid when exactly_rational()
    const std::map<Int, Rat>& terms() const { return terms_; }

  private:
    std::map<Int, Rat> terms_;
};

// Exact n-dimensional volume of the slice inside its hyperplane, reported as
// the rational cofactor r with Vol_n(S) = r * ||w||_2. Hence Vol/covol = r
// exactly. Zero when the hyperplane misses the box.
Rat slice_volume(const SliceSpec& spec);

// The coarea summand f(c) (times the dropped-coordinate factors): the
// piecewise-polynomial pushforward density under a half-open convention, so
// that sum over all integer c equals (2X)^d exactly. Differs from
// slice_volume only at degenerate face contacts.
Rat slice_density(const SliceSpec& spec);

// Exact (n-1)-dimensional surface measure of the relative boundary of the
// slice: one term per cube facet, each a rational multiple of the square
// root of the facet weight vector's norm squared. Requires d >= 3.
RadicalSum slice_surface(const SliceSpec& spec);

// |sum_{c in Z} slice_density(w,c,X) - (2X)^d| in exact rational arithmetic;
// the hyperplane family partitions the cube, so the residual must be 0.
// Requires primitive w.
Rat coarea_residual(const std::vector<std::int64_t>& w, std::int64_t x);

// Exact geometry of one slice bundled for reporting.
struct GeometryReport {
    Int norm_sq;
    Rat vol;          // cofactor: Vol_n(S) = vol * sqrt(norm_sq)
    RadicalSum surf;  // exact Euclidean surface measure

    double vol_euclidean() const;
};

GeometryReport slice_geometry(const SliceSpec& spec);

}  // namespace formcount

#endif
