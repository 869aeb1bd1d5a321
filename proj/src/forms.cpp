#include "formcount/forms.hpp"

#include <omp.h>

#include <algorithm>
#include <optional>
#include <sstream>

namespace formcount {

std::int64_t gcd_all(const std::vector<std::int64_t>& v) {
    std::int64_t g = 0;
    for (auto x : v) g = gcd_i64(g, x);
    return g;
}

Int gcd_all(const std::vector<Int>& v) {
    Int g = 0;
    for (const auto& x : v) {
        Int t;
        mpz_gcd(t.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        g = t;
    }
    return g;
}

BinaryForm::BinaryForm(std::vector<Int> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 4)
        throw std::invalid_argument("binary form needs degree >= 3 (at least 4 coefficients)");
}

bool BinaryForm::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Int& a) { return a == 0; });
}

Int BinaryForm::height() const {
    Int h = 0;
    for (const auto& a : coeffs_) {
        Int v = abs(a);
        if (v > h) h = v;
    }
    return h;
}

BinaryForm BinaryForm::parse(const std::string& s) {
    std::vector<Int> coeffs;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto b = tok.find_first_not_of(" \t");
        const auto e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) throw std::invalid_argument("empty coefficient in form: " + s);
        coeffs.emplace_back(tok.substr(b, e - b + 1));
    }
    return BinaryForm(std::move(coeffs));
}

std::string BinaryForm::str() const {
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out += ',';
        out += coeffs_[i].get_str();
    }
    return out;
}

Int eval_form(const BinaryForm& f, const Int& u, const Int& v) {
    const int n = f.degree();
    // Running powers u^{n-k} and v^k.
    std::vector<Int> vpow(static_cast<std::size_t>(n) + 1);
    vpow[0] = 1;
    for (int k = 1; k <= n; ++k) vpow[static_cast<std::size_t>(k)] = vpow[static_cast<std::size_t>(k - 1)] * v;
    Int acc = 0;
    Int upow = 1;
    for (int k = n; k >= 0; --k) {
        acc += f.coeff(k) * upow * vpow[static_cast<std::size_t>(k)];
        upow *= u;
    }
    return acc;
}

Int eval_form(const BinaryForm& f, std::int64_t u, std::int64_t v) {
    return eval_form(f, Int(static_cast<long>(u)), Int(static_cast<long>(v)));
}

std::int64_t PrimitivePair::shell() const {
    const std::int64_t au = u < 0 ? -u : u;
    const std::int64_t av = v < 0 ? -v : v;
    return au > av ? au : av;
}

std::string PrimitivePair::str() const {
    return std::to_string(u) + "," + std::to_string(v);
}

bool is_primitive(std::int64_t u, std::int64_t v) {
    if (u == 0 && v == 0) return false;
    return gcd_i64(u, v) == 1;
}

PowerVector power_vector(std::int64_t u, std::int64_t v, int n) {
    if (n < 1) throw std::invalid_argument("power vector needs degree n >= 1");
    if (!is_primitive(u, v))
        throw std::invalid_argument("pair (" + std::to_string(u) + "," + std::to_string(v) +
                                    ") is not primitive");
    PowerVector pv;
    pv.pair = PrimitivePair{u, v};
    pv.w.resize(static_cast<std::size_t>(n) + 1);
    const Int bu(static_cast<long>(u)), bv(static_cast<long>(v));
    for (int k = 0; k <= n; ++k)
        pv.w[static_cast<std::size_t>(k)] =
            pow_int(bu, static_cast<unsigned long>(n - k)) * pow_int(bv, static_cast<unsigned long>(k));
    pv.norm_sq = 0;
    for (const auto& wk : pv.w) pv.norm_sq += wk * wk;
    return pv;
}

Int CoefficientBox::cardinality() const {
    if (n < 1 || x < 0) throw std::invalid_argument("coefficient box needs n >= 1, X >= 0");
    return pow_int(2 * x + 1, static_cast<unsigned long>(n) + 1);
}

std::vector<PrimitivePair> primitive_shell(std::int64_t r) {
    if (r < 1) throw std::invalid_argument("shell radius must be >= 1");
    std::vector<PrimitivePair> out;
    // Sides u = +-R over the full v range, then v = +-R over the interior.
    for (std::int64_t u : {r, -r})
        for (std::int64_t v = -r; v <= r; ++v)
            if (is_primitive(u, v)) out.push_back({u, v});
    for (std::int64_t v : {r, -r})
        for (std::int64_t u = -r + 1; u <= r - 1; ++u)
            if (is_primitive(u, v)) out.push_back({u, v});
    return out;
}

std::int64_t shell_count(std::int64_t r) {
    if (r < 1) throw std::invalid_argument("shell radius must be >= 1");
    if (r == 1) return 8;
    std::int64_t c = 0;  // #{v in [1..R] : gcd(v,R) = 1}
    for (std::int64_t v = 1; v <= r; ++v)
        if (gcd_i64(v, r) == 1) ++c;
    return 8 * c;
}

void for_each_primitive_pair(std::int64_t r_max,
                             const std::function<void(const PrimitivePair&)>& fn) {
    for (std::int64_t r = 1; r <= r_max; ++r)
        for (const auto& p : primitive_shell(r)) fn(p);
}

double primitive_fraction_serial(std::int64_t r_max) {
    if (r_max < 1) throw std::invalid_argument("r_max must be >= 1");
    std::int64_t prim = 0;
    for (std::int64_t r = 1; r <= r_max; ++r) prim += shell_count(r);
    const double total = static_cast<double>(2 * r_max + 1) * static_cast<double>(2 * r_max + 1);
    return static_cast<double>(prim) / total;
}

double primitive_fraction(std::int64_t r_max) {
    if (r_max < 1) throw std::invalid_argument("r_max must be >= 1");
    std::int64_t prim = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : prim)
    for (std::int64_t r = 1; r <= r_max; ++r) prim += shell_count(r);
    const double total = static_cast<double>(2 * r_max + 1) * static_cast<double>(2 * r_max + 1);
    return static_cast<double>(prim) / total;
}

// ---------------------------------------------------------------------------
// Reducibility over Q.
//
// For a0 != 0 the factorizations of F correspond to factorizations of the
// dehomogenization f(x) = F(x,1) into positive-degree parts, and any such
// factorization contains a part of degree <= floor(n/2). Linear parts are
// found by the rational root theorem; degree 2..floor(n/2) parts by
// Kronecker interpolation at x = 0, 1, -1, 2, ...
// ---------------------------------------------------------------------------

namespace {

// f(x) = F(x,1): coefficient of x^i is a_{n-i}.
std::vector<Int> dehomogenize(const BinaryForm& f) {
    const int n = f.degree();
    std::vector<Int> p(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) p[static_cast<std::size_t>(n - k)] = f.coeff(k);
    return p;
}

Int poly_eval(const std::vector<Int>& p, const Int& x) {
    Int acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

int poly_degree(const std::vector<Int>& p) {
    for (std::size_t i = p.size(); i-- > 0;)
        if (p[i] != 0) return static_cast<int>(i);
    return -1;
}

// Positive divisors, guarded against huge or over-smooth values.
std::vector<Int> positive_divisors(const Int& v) {
    Int a = abs(v);
    if (a == 0) throw std::invalid_argument("divisors of zero requested");
    if (!a.fits_slong_p())
        throw capacity_error("coefficient magnitude beyond factoring support: " + v.get_str());
    const std::int64_t m = static_cast<std::int64_t>(a.get_si());
    std::vector<Int> divs;
    for (std::int64_t d = 1; d * d <= m; ++d) {
        if (m % d == 0) {
            divs.emplace_back(static_cast<long>(d));
            if (d != m / d) divs.emplace_back(static_cast<long>(m / d));
            if (divs.size() > 8192) throw capacity_error("divisor set too large in factor search");
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

// Exact divisibility of integer polynomials over Q: remainder of f / g is 0.
bool poly_divides(const std::vector<Int>& f, const std::vector<Int>& g) {
    const int df = poly_degree(f), dg = poly_degree(g);
    if (dg < 0 || df < dg) return false;
    std::vector<Rat> rem(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) rem[i] = Rat(f[i]);
    const Rat lead(g[static_cast<std::size_t>(dg)]);
    for (int i = df; i >= dg; --i) {
        Rat q = rem[static_cast<std::size_t>(i)] / lead;
        if (q == 0) continue;
        for (int j = 0; j <= dg; ++j)
            rem[static_cast<std::size_t>(i - dg + j)] -= q * Rat(g[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < dg; ++i)
        if (rem[static_cast<std::size_t>(i)] != 0) return false;
    return true;
}

// Unique degree-<=k interpolant through (xs[i], ys[i]); integer coefficients
// required, nullopt otherwise.
std::optional<std::vector<Int>> integer_interpolant(const std::vector<Int>& xs,
                                                    const std::vector<Int>& ys) {
    const std::size_t m = xs.size();
    // Newton divided differences in exact rationals.
    std::vector<Rat> dd(m);
    for (std::size_t i = 0; i < m; ++i) dd[i] = Rat(ys[i]);
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = m - 1; i >= level; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / Rat(xs[i] - xs[i - level]);
            if (i == level) break;
        }
    // Expand the Newton form: sum_j dd[j] * prod_{i<j} (x - x_i).
    std::vector<Rat> coef(m, Rat(0));
    std::vector<Rat> basis{Rat(1)};
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < basis.size(); ++i) coef[i] += dd[j] * basis[i];
        if (j + 1 < m) {
            std::vector<Rat> nb(basis.size() + 1, Rat(0));
            for (std::size_t i = 0; i < basis.size(); ++i) {
                nb[i + 1] += basis[i];
                nb[i] -= Rat(xs[j]) * basis[i];
            }
            basis = std::move(nb);
        }
    }
    std::vector<Int> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (coef[i].get_den() != 1) return std::nullopt;
        out[i] = coef[i].get_num();
    }
    return out;
}

bool kronecker_has_factor(const std::vector<Int>& f, int k) {
    static const long points[] = {0, 1, -1, 2, -2, 3, -3};
    std::vector<Int> xs;
    std::vector<Int> vals;
    for (int i = 0; i <= k; ++i) {
        Int x(points[i]);
        xs.push_back(x);
        vals.push_back(poly_eval(f, x));
    }
    // A factor g has g(x_i) | f(x_i) with all values nonzero here (the linear
    // stage already ruled out integer roots).
    std::vector<std::vector<Int>> cand(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        auto divs = positive_divisors(vals[i]);
        if (i == 0) {
            cand[i] = divs;  // g and -g are the same factor; fix g(x_0) > 0
        } else {
            cand[i].reserve(2 * divs.size());
            for (const auto& d : divs) {
                cand[i].push_back(d);
                cand[i].push_back(-d);
            }
        }
    }
    unsigned long combos = 1;
    for (const auto& c : cand) {
        combos *= c.size();
        if (combos > (1ul << 24)) throw capacity_error("factor search combination count too large");
    }
    std::vector<std::size_t> idx(cand.size(), 0);
    std::vector<Int> ys(cand.size());
    while (true) {
        for (std::size_t i = 0; i < cand.size(); ++i) ys[i] = cand[i][idx[i]];
        if (auto g = integer_interpolant(xs, ys)) {
            if (poly_degree(*g) == k && poly_divides(f, *g)) return true;
        }
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == cand[pos].size()) {
            idx[pos] = 0;
            ++pos;
        }
        if (pos == idx.size()) break;
    }
    return false;
}

}  // namespace

bool is_reducible(const BinaryForm& f) {
    if (f.is_zero()) throw std::invalid_argument("reducibility of the zero form is undefined");
    const int n = f.degree();
    if (n > 6) throw capacity_error("reducibility supported for degree <= 6 only");

    // y | F and x | F.
    if (f.coeff(0) == 0) return true;
    if (f.coeff(n) == 0) return true;

    // Linear factor qx - py <=> F(p,q) = 0 with p | a_n, q | a_0.
    const auto ps = positive_divisors(f.coeff(n));
    const auto qs = positive_divisors(f.coeff(0));
    for (const auto& q : qs)
        for (const auto& p : ps) {
            Int g;
            mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
            if (g != 1) continue;
            if (eval_form(f, p, q) == 0 || eval_form(f, -p, q) == 0) return true;
        }

    const auto dehom = dehomogenize(f);
    for (int k = 2; k <= n / 2; ++k)
        if (kronecker_has_factor(dehom, k)) return true;
    return false;
}

}  // namespace formcount
