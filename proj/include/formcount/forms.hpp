#ifndef FORMCOUNT_FORMS_HPP
#define FORMCOUNT_FORMS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "formcount/arith.hpp"

namespace formcount {

// Integral binary form F(x,y) = sum_k a_k x^{n-k} y^k of degree n >= 3,
// stored as the coefficient vector (a_0, ..., a_n).
class BinaryForm {
  public:
    explicit BinaryForm(std::vector<Int> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Int>& coeffs() const { return coeffs_; }
    const Int& coeff(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
    bool is_zero() const;

    Int height() const;

    // "a0,a1,...,an" round trip, used by the CLI and CSV reports.
    static BinaryForm parse(const std::string& s);
    std::string str() const;

  private:
    std::vector<Int> coeffs_;
};

// Exact F(u,v).
Int eval_form(const BinaryForm& f, const Int& u, const Int& v);
Int eval_form(const BinaryForm& f, std::int64_t u, std::int64_t v);

// Pair (u,v) != (0,0) with gcd(|u|,|v|) = 1. shell() is R = max(|u|,|v|).
struct PrimitivePair {
    std::int64_t u = 0;
    std::int64_t v = 0;

    std::int64_t shell() const;
    std::string str() const;  // "u,v"
};

bool is_primitive(std::int64_t u, std::int64_t v);

// w(u,v) = (u^n, u^{n-1} v, ..., v^n) together with ||w||_2^2.
struct PowerVector {
    std::vector<Int> w;
    PrimitivePair pair;
    Int norm_sq;

    int degree() const { return static_cast<int>(w.size()) - 1; }
};

// Rejects non-primitive pairs; requires n >= 1.
PowerVector power_vector(std::int64_t u, std::int64_t v, int n);

// The coefficient box F_n(X): all forms of degree n with height <= X.
struct CoefficientBox {
    int n;
    std::int64_t x;

    Int cardinality() const;  // (2X+1)^{n+1}
};

// All primitive pairs with max(|u|,|v|) = R, in a fixed deterministic order.
// size() of the result is A(R).
std::vector<PrimitivePair> primitive_shell(std::int64_t r);

// A(R) without materializing the shell.
std::int64_t shell_count(std::int64_t r);

// Visits shells R = 1..r_max in order, pairs within a shell in primitive_shell
// order.
void for_each_primitive_pair(std::int64_t r_max,
                             const std::function<void(const PrimitivePair&)>& fn);

// Number of primitive pairs in [-R,R]^2 divided by (2R+1)^2; tends to 6/pi^2.
// The parallel version and the serial reference must agree exactly.
double primitive_fraction(std::int64_t r_max);
double primitive_fraction_serial(std::int64_t r_max);

// True iff F factors over Q into two forms of positive degree. Supported for
// 3 <= n <= 6; content alone does not count as a factorization.
bool is_reducible(const BinaryForm& f);

}  // namespace formcount

#endif
