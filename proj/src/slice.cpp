#include "formcount/slice.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>

namespace formcount {

namespace {

constexpr int kMaxDenseCoords = 20;       // 2^20 divided-difference terms
constexpr std::int64_t kRangeGuard = 1ll << 61;

}  // namespace

SliceSpec::SliceSpec(std::vector<std::int64_t> w, std::int64_t c, std::int64_t x)
    : w_(std::move(w)), c_(c), x_(x) {
    if (w_.size() < 2) throw std::invalid_argument("slice needs dimension d >= 2");
    if (x_ < 0) throw std::invalid_argument("slice half-width must be >= 0");
    bool nonzero = false;
    __int128 abs_sum = 0;
    for (auto wk : w_) {
        if (wk != 0) nonzero = true;
        abs_sum += wk < 0 ? -static_cast<__int128>(wk) : static_cast<__int128>(wk);
    }
    if (!nonzero) throw std::invalid_argument("slice weight vector must be nonzero");
    const __int128 reach = 2 * abs_sum * static_cast<__int128>(x_) +
                           (c_ < 0 ? -static_cast<__int128>(c_) : static_cast<__int128>(c_));
    if (reach >= kRangeGuard)
        throw capacity_error("slice weights exceed the 64-bit working range");
}

Int SliceSpec::norm_sq() const {
    Int s = 0;
    for (auto wk : w_) s += Int(static_cast<long>(wk)) * Int(static_cast<long>(wk));
    return s;
}

std::int64_t SliceSpec::abs_weight_sum() const {
    std::int64_t s = 0;
    for (auto wk : w_) s += wk < 0 ? -wk : wk;
    return s;
}

bool SliceSpec::feasible() const {
    const std::int64_t a = c_ < 0 ? -c_ : c_;
    return a <= x_ * abs_weight_sum();
}

SliceSpec make_power_slice(const PowerVector& pv, std::int64_t m, std::int64_t x) {
    std::vector<std::int64_t> w;
    w.reserve(pv.w.size());
    for (const auto& wk : pv.w) w.push_back(to_i64(wk));
    return SliceSpec(std::move(w), m, x);
}

// ---------------------------------------------------------------------------
// Kernel lattice of a primitive vector.
// ---------------------------------------------------------------------------

KernelBasis kernel_basis(const std::vector<Int>& w) {
    const int d = static_cast<int>(w.size());
    if (d < 1) throw std::invalid_argument("empty weight vector");
    if (gcd_all(w) != 1) throw std::invalid_argument("w must be primitive");

    // Column-reduce the 1 x d matrix w by unimodular operations; the
    // transform columns that map to 0 span the kernel lattice.
    std::vector<std::vector<Int>> cols(static_cast<std::size_t>(d),
                                       std::vector<Int>(static_cast<std::size_t>(d), 0));
    for (int i = 0; i < d; ++i) cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;

    Int g = w[0];
    for (int i = 1; i < d; ++i) {
        const Int& wi = w[static_cast<std::size_t>(i)];
        if (wi == 0) continue;  // column i already maps to 0
        Int g2, s, t;
        mpz_gcdext(g2.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.get_mpz_t(), wi.get_mpz_t());
        const Int a = wi / g2;  // so that the 2x2 block has determinant 1
        const Int b = g / g2;
        auto& c0 = cols[0];
        auto& ci = cols[static_cast<std::size_t>(i)];
        for (int row = 0; row < d; ++row) {
            const Int old0 = c0[static_cast<std::size_t>(row)];
            const Int oldi = ci[static_cast<std::size_t>(row)];
            c0[static_cast<std::size_t>(row)] = s * old0 + t * oldi;
            ci[static_cast<std::size_t>(row)] = -a * old0 + b * oldi;
        }
        g = g2;
    }

    KernelBasis basis;
    basis.columns.assign(cols.begin() + 1, cols.end());
    // Sign-normalize each vector: first nonzero entry positive.
    for (auto& col : basis.columns)
        for (const auto& entry : col) {
            if (entry == 0) continue;
            if (entry < 0)
                for (auto& e : col) e = -e;
            break;
        }
    return basis;
}

Int gram_covolume(const KernelBasis& basis) {
    const int r = basis.rank();
    if (r == 0) return 1;
    const int d = basis.ambient_dim();
    std::vector<std::vector<Int>> g(static_cast<std::size_t>(r),
                                    std::vector<Int>(static_cast<std::size_t>(r)));
    for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j) {
            Int dot = 0;
            for (int k = 0; k < d; ++k)
                dot += basis.columns[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                       basis.columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = dot;
            g[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = dot;
        }

    // Bareiss fraction-free elimination; all divisions are exact.
    Int sign = 1;
    Int prev = 1;
    for (int k = 0; k < r - 1; ++k) {
        if (g[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] == 0) {
            int pivot = -1;
            for (int i = k + 1; i < r; ++i)
                if (g[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] != 0) {
                    pivot = i;
                    break;
                }
            if (pivot < 0) return 0;
            std::swap(g[static_cast<std::size_t>(k)], g[static_cast<std::size_t>(pivot)]);
            sign = -sign;
        }
        for (int i = k + 1; i < r; ++i) {
            for (int j = k + 1; j < r; ++j) {
                Int num = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                              g[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] -
                          g[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                              g[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                mpz_divexact(g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get_mpz_t(),
                             num.get_mpz_t(), prev.get_mpz_t());
            }
            g[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = 0;
        }
        prev = g[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    }
    return sign * g[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(r - 1)];
}

// ---------------------------------------------------------------------------
// Slice volumes: weighted Irwin-Hall divided differences, exact rationals.
// ---------------------------------------------------------------------------

void RadicalSum::add(const Rat& coeff, const Int& radicand) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(radicand, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

double RadicalSum::value() const {
    double acc = 0;
    for (const auto& [rad, coeff] : terms_) acc += to_double(coeff) * std::sqrt(to_double(rad));
    return acc;
}

bool RadicalSum::exactly_rational() const {
    for (const auto& [rad, coeff] : terms_)
        if (mpz_perfect_square_p(rad.get_mpz_t()) == 0) return false;
    return true;
}

Rat RadicalSum::rational_value() const {
    Rat acc = 0;
    for (const auto& [rad, coeff] : terms_) {
        if (mpz_perfect_square_p(rad.get_mpz_t()) == 0)
            throw std::invalid_argument("surface measure is not rational");
        Int root;
        mpz_sqrt(root.get_mpz_t(), rad.get_mpz_t());
        acc += coeff * Rat(root);
    }
    return acc;
}

namespace {

struct ReducedSlice {
    std::vector<std::int64_t> w;  // positive weights, zeros dropped
    int zeros = 0;
    std::int64_t t = 0;      // translated target: c + X * sum(w)
    std::int64_t total = 0;  // 2X * sum(w)
    std::int64_t x = 0;
};

ReducedSlice reduce(const SliceSpec& spec) {
    ReducedSlice r;
    r.x = spec.x();
    std::int64_t wsum = 0;
    for (auto wk : spec.w()) {
        if (wk == 0) {
            ++r.zeros;
            continue;
        }
        r.w.push_back(wk < 0 ? -wk : wk);
        wsum += r.w.back();
    }
    r.t = spec.c() + spec.x() * wsum;
    r.total = 2 * spec.x() * wsum;
    return r;
}

// Divided-difference sum N(t) = sum_{S} (-1)^{|S|} max(0, t - 2X sum_S w)^{dp-1}
// with the half-open convention s^0 = [s > 0]. Exact integer numerator; the
// caller divides by (dp-1)! * prod(w).
Int dd_numerator(const ReducedSlice& r) {
    const int dp = static_cast<int>(r.w.size());
    if (dp > kMaxDenseCoords)
        throw capacity_error("slice volume term count 2^" + std::to_string(dp) +
                             " exceeds the supported 2^" + std::to_string(kMaxDenseCoords));
    const std::size_t nmask = std::size_t{1} << dp;
    std::vector<std::int64_t> sub(nmask);
    sub[0] = 0;
    for (std::size_t mask = 1; mask < nmask; ++mask) {
        const int low = std::countr_zero(mask);
        sub[mask] = sub[mask & (mask - 1)] + r.w[static_cast<std::size_t>(low)];
    }
    const unsigned long e = static_cast<unsigned long>(dp - 1);
    const std::int64_t twox = 2 * r.x;

    auto accumulate = [&](std::size_t lo, std::size_t hi) {
        Int acc = 0;
        Int term;
        for (std::size_t mask = lo; mask < hi; ++mask) {
            const std::int64_t s = r.t - twox * sub[mask];
            if (s <= 0) continue;
            mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(s), e);
            if (std::popcount(mask) & 1)
                acc -= term;
            else
                acc += term;
        }
        return acc;
    };

    if (nmask < (std::size_t{1} << 14)) return accumulate(0, nmask);

    Int total = 0;
#pragma omp parallel
    {
        const std::size_t chunks = static_cast<std::size_t>(omp_get_num_threads());
        const std::size_t id = static_cast<std::size_t>(omp_get_thread_num());
        const std::size_t step = (nmask + chunks - 1) / chunks;
        const std::size_t lo = std::min(id * step, nmask);
        const std::size_t hi = std::min(lo + step, nmask);
        Int part = accumulate(lo, hi);
#pragma omp critical
        total += part;  // exact, so merge order does not matter
    }
    return total;
}

Rat zero_factor(const ReducedSlice& r) {
    return Rat(pow_int(2 * r.x, static_cast<unsigned long>(r.zeros)));
}

Rat density_core(const ReducedSlice& r) {
    const int dp = static_cast<int>(r.w.size());
    Int den = factorial_int(static_cast<unsigned long>(dp - 1));
    for (auto wk : r.w) den *= Int(static_cast<long>(wk));
    Rat f = make_rat(dd_numerator(r), den);
    return f * zero_factor(r);
}

}  // namespace

Rat slice_density(const SliceSpec& spec) {
    const ReducedSlice r = reduce(spec);
    if (r.t <= 0 || r.t > r.total) return Rat(0);
    return density_core(r);
}

Rat slice_volume(const SliceSpec& spec) {
    const ReducedSlice r = reduce(spec);
    if (r.w.size() == 1) {
        // The slice is a translate of a face of the box: an n-cube of side 2X
        // whenever t/w lands in [0, 2X], including both face contacts.
        if (r.t < 0 || r.t > r.total) return Rat(0);
        return make_rat(1, Int(static_cast<long>(r.w[0]))) * zero_factor(r);
    }
    if (r.t <= 0 || r.t >= r.total) return Rat(0);
    return density_core(r);
}

RadicalSum slice_surface(const SliceSpec& spec) {
    const int d = spec.dim();
    if (d < 3) throw std::invalid_argument("slice surface needs dimension d >= 3");
    RadicalSum out;
    for (int i = 0; i < d; ++i) {
        std::vector<std::int64_t> sub;
        sub.reserve(static_cast<std::size_t>(d) - 1);
        bool nonzero = false;
        Int radicand = 0;
        for (int j = 0; j < d; ++j) {
            if (j == i) continue;
            const std::int64_t wj = spec.w()[static_cast<std::size_t>(j)];
            sub.push_back(wj);
            if (wj != 0) nonzero = true;
            radicand += Int(static_cast<long>(wj)) * Int(static_cast<long>(wj));
        }
        if (!nonzero) continue;  // facet parallel to the hyperplane
        const std::int64_t wi = spec.w()[static_cast<std::size_t>(i)];
        for (int sign : {1, -1}) {
            const std::int64_t cp = spec.c() - sign * wi * spec.x();
            out.add(slice_volume(SliceSpec(sub, cp, spec.x())), radicand);
        }
    }
    return out;
}

Rat coarea_residual(const std::vector<std::int64_t>& w, std::int64_t x) {
    if (gcd_all(w) != 1) throw std::invalid_argument("w must be primitive");
    SliceSpec probe(w, 0, x);  // validates ranges
    const std::int64_t reach = x * probe.abs_weight_sum();
    const std::int64_t count = 2 * reach + 1;

    std::vector<Rat> partials(static_cast<std::size_t>(omp_get_max_threads()), Rat(0));
#pragma omp parallel
    {
        const std::size_t id = static_cast<std::size_t>(omp_get_thread_num());
        Rat local = 0;
#pragma omp for schedule(static)
        for (std::int64_t k = 0; k < count; ++k)
            local += slice_density(SliceSpec(w, -reach + k, x));
        partials[id] = local;
    }
    Rat sum = 0;
    for (const auto& p : partials) sum += p;

    Rat residual = sum - Rat(pow_int(2 * x, static_cast<unsigned long>(w.size())));
    return abs(residual);
}

double GeometryReport::vol_euclidean() const {
    return to_double(vol) * std::sqrt(to_double(norm_sq));
}

GeometryReport slice_geometry(const SliceSpec& spec) {
    GeometryReport rep;
    rep.norm_sq = spec.norm_sq();
    rep.vol = slice_volume(spec);
    rep.surf = spec.dim() >= 3 ? slice_surface(spec) : RadicalSum{};
    return rep;
}

}  // namespace formcount
