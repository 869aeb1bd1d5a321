#include "formcount/census.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <memory>
#include <numeric>

namespace formcount {

namespace {

constexpr int kMaxCensusDegree = 11;  // coordinate tuples fit std::array<int16_t, 12>

std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

void validate_census_args(int n, std::int64_t m, std::int64_t x, std::int64_t r_max) {
    if (n < 3) throw std::invalid_argument("census requires degree n >= 3");
    if (n > kMaxCensusDegree) throw capacity_error("census supports degree <= 11");
    if (m == 0) throw std::invalid_argument("census requires m != 0");
    if (x < 1) throw std::invalid_argument("census requires X >= 1");
    if (r_max < 1) throw std::invalid_argument("census requires R_max >= 1");
}

std::vector<PrimitivePair> pairs_up_to(std::int64_t r_max) {
    std::vector<PrimitivePair> pairs;
    for_each_primitive_pair(r_max, [&](const PrimitivePair& p) { pairs.push_back(p); });
    return pairs;
}

// Enumerates all a in [-X,X]^d with <w,a> = m. Coordinates are visited by
// descending |w| with the largest-weight coordinate solved by divisibility;
// the sink sees tuples in original coordinate order.
template <typename Sink>
void enumerate_solutions(const std::vector<std::int64_t>& w, std::int64_t m, std::int64_t x,
                         Sink&& sink) {
    const int d = static_cast<int>(w.size());
    std::vector<int> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return iabs(w[static_cast<std::size_t>(a)]) > iabs(w[static_cast<std::size_t>(b)]);
    });
    const int pivot = order[0];
    const std::int64_t wp = w[static_cast<std::size_t>(pivot)];

    std::vector<std::int64_t> suffix(static_cast<std::size_t>(d) + 1, 0);
    for (int k = d - 1; k >= 1; --k)
        suffix[static_cast<std::size_t>(k)] = suffix[static_cast<std::size_t>(k + 1)] +
                                              x * iabs(w[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])]);

    std::vector<std::int64_t> a(static_cast<std::size_t>(d), 0);
    auto recurse = [&](auto&& self, int level, std::int64_t s) -> void {
        if (level == d) {
            const std::int64_t r = m - s;
            if (wp != 0) {
                if (r % wp != 0) return;
                const std::int64_t ap = r / wp;
                if (ap < -x || ap > x) return;
                a[static_cast<std::size_t>(pivot)] = ap;
                sink(a);
            }
            return;
        }
        const int coord = order[static_cast<std::size_t>(level)];
        const std::int64_t wk = w[static_cast<std::size_t>(coord)];
        const std::int64_t bound = suffix[static_cast<std::size_t>(level) + 1] + x * iabs(wp);
        for (std::int64_t v = -x; v <= x; ++v) {
            const std::int64_t s2 = s + wk * v;
            if (iabs(m - s2) > bound) continue;
            a[static_cast<std::size_t>(coord)] = v;
            self(self, level + 1, s2);
        }
    };
    recurse(recurse, 1, 0);
}

std::vector<std::int64_t> power_weights(const PrimitivePair& p, int n) {
    const PowerVector pv = power_vector(p.u, p.v, n);
    std::vector<std::int64_t> w;
    w.reserve(pv.w.size());
    for (const auto& wk : pv.w) w.push_back(to_i64(wk));
    return w;
}

}  // namespace

Int incidence_count_serial(int n, std::int64_t m, std::int64_t x, std::int64_t r_max,
                           const CensusBudget& budget) {
    validate_census_args(n, m, x, r_max);
    Int total = 0;
    for_each_primitive_pair(r_max, [&](const PrimitivePair& p) {
        total += count_points(make_power_slice(power_vector(p.u, p.v, n), m, x), budget.mitm_bytes);
    });
    return total;
}

Int incidence_count(int n, std::int64_t m, std::int64_t x, std::int64_t r_max,
                    const CensusBudget& budget) {
    validate_census_args(n, m, x, r_max);
    const auto pairs = pairs_up_to(r_max);
    std::vector<Int> parts(static_cast<std::size_t>(omp_get_max_threads()), Int(0));
#pragma omp parallel
    {
        Int& acc = parts[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 8)
        for (std::size_t i = 0; i < pairs.size(); ++i)
            acc += count_points(make_power_slice(power_vector(pairs[i].u, pairs[i].v, n), m, x),
                                budget.mitm_bytes);
    }
    Int total = 0;
    for (const auto& p : parts) total += p;
    return total;
}

namespace {

Int distinct_bitset(int n, std::int64_t m, std::int64_t x, std::int64_t r_max,
                    const CensusBudget& budget) {
    const int d = n + 1;
    const std::int64_t span = 2 * x + 1;
    const Int box = pow_int(span, static_cast<unsigned long>(d));
    if (box > Int(static_cast<unsigned long>(budget.bitset_bits)))
        throw capacity_error("coefficient box exceeds the bitset budget");
    const std::size_t bits = static_cast<std::size_t>(box.get_ui());
    const std::size_t words = (bits + 63) / 64;

    std::vector<std::int64_t> powers(static_cast<std::size_t>(d));
    powers[0] = 1;
    for (int k = 1; k < d; ++k) powers[static_cast<std::size_t>(k)] = powers[static_cast<std::size_t>(k - 1)] * span;

    auto mask = std::make_unique<std::atomic<std::uint64_t>[]>(words);
    for (std::size_t i = 0; i < words; ++i) mask[i].store(0, std::memory_order_relaxed);

    const auto pairs = pairs_up_to(r_max);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto w = power_weights(pairs[i], n);
        enumerate_solutions(w, m, x, [&](const std::vector<std::int64_t>& a) {
            std::int64_t idx = 0;
            for (int k = 0; k < d; ++k)
                idx += (a[static_cast<std::size_t>(k)] + x) * powers[static_cast<std::size_t>(k)];
            mask[static_cast<std::size_t>(idx) >> 6].fetch_or(
                std::uint64_t{1} << (static_cast<std::size_t>(idx) & 63), std::memory_order_relaxed);
        });
    }

    std::int64_t count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(words); ++i)
        count += std::popcount(mask[static_cast<std::size_t>(i)].load(std::memory_order_relaxed));
    return Int(static_cast<long>(count));
}

Int distinct_stream_sort(int n, std::int64_t m, std::int64_t x, std::int64_t r_max,
                         const CensusBudget& budget) {
    using Key = std::array<std::int16_t, 12>;
    if (x > 32000) throw capacity_error("stream dedup supports X <= 32000");
    const int d = n + 1;

    // The stream holds one tuple per (form, witness) incidence.
    const Int expected = incidence_count(n, m, x, r_max, budget);
    if (expected * 24 > Int(static_cast<unsigned long>(budget.stream_bytes)))
        throw capacity_error("solution stream exceeds the memory budget");

    const auto pairs = pairs_up_to(r_max);
    std::vector<std::vector<Key>> parts(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto& out = parts[static_cast<std::size_t>(omp_get_thread_num())];
        const auto w = power_weights(pairs[i], n);
        enumerate_solutions(w, m, x, [&](const std::vector<std::int64_t>& a) {
            Key key{};
            for (int k = 0; k < d; ++k) key[static_cast<std::size_t>(k)] = static_cast<std::int16_t>(a[static_cast<std::size_t>(k)]);
            out.push_back(key);
        });
    }
    std::vector<Key> all;
    all.reserve(static_cast<std::size_t>(expected.get_ui()));
    for (auto& p : parts) {
        all.insert(all.end(), p.begin(), p.end());
        p.clear();
        p.shrink_to_fit();
    }
    std::sort(all.begin(), all.end());
    const auto last = std::unique(all.begin(), all.end());
    return Int(static_cast<long>(last - all.begin()));
}

}  // namespace

Int distinct_representing_forms(int n, std::int64_t m, std::int64_t x, std::int64_t r_max,
                                DedupStrategy strategy, const CensusBudget& budget) {
    validate_census_args(n, m, x, r_max);
    switch (strategy) {
        case DedupStrategy::bitset:
            return distinct_bitset(n, m, x, r_max, budget);
        case DedupStrategy::stream_sort:
            return distinct_stream_sort(n, m, x, r_max, budget);
        case DedupStrategy::automatic: {
            const Int box = pow_int(2 * x + 1, static_cast<unsigned long>(n) + 1);
            if (box <= Int(static_cast<unsigned long>(budget.bitset_bits)))
                return distinct_bitset(n, m, x, r_max, budget);
            return distinct_stream_sort(n, m, x, r_max, budget);
        }
    }
    throw std::logic_error("unreachable");
}

double hurwitz_tail(int s, std::int64_t a) {
    if (s < 2) throw std::invalid_argument("hurwitz tail needs exponent s >= 2");
    if (a < 0) throw std::invalid_argument("hurwitz tail needs a >= 0");
    double sum = 0;
    std::int64_t k = a + 1;
    for (; k <= a + 20; ++k) sum += std::pow(static_cast<double>(k), -s);
    // Euler-Maclaurin from b = a + 21 with Bernoulli terms B2, B4, B6.
    const double b = static_cast<double>(k);
    const double sd = static_cast<double>(s);
    double tail = std::pow(b, 1 - sd) / (sd - 1) + std::pow(b, -sd) / 2;
    tail += sd * std::pow(b, -sd - 1) / 12.0;
    tail -= sd * (sd + 1) * (sd + 2) * std::pow(b, -sd - 3) / 720.0;
    tail += sd * (sd + 1) * (sd + 2) * (sd + 3) * (sd + 4) * std::pow(b, -sd - 5) / 30240.0;
    return sum + tail;
}

double tail_bracket(int n, std::int64_t x, std::int64_t r_max, double c_emp) {
    if (n < 3) throw std::invalid_argument("tail bracket requires n >= 3");
    const double vol_part =
        8.0 * c_emp * std::pow(static_cast<double>(x), n) * hurwitz_tail(n - 1, r_max);
    double ones = 0;
    if (r_max < x) {
        const auto tri = [](std::int64_t t) { return 0.5 * static_cast<double>(t) * static_cast<double>(t + 1); };
        ones = 8.0 * (tri(x) - tri(r_max));
    }
    return vol_part + ones;
}

CensusReport census(int n, std::int64_t m, std::int64_t x, std::int64_t r_max, double c_emp,
                    const CensusBudget& budget) {
    validate_census_args(n, m, x, r_max);
    CensusReport rep;
    rep.n = n;
    rep.m = m;
    rep.x = x;
    rep.r_max = r_max;
    rep.c_emp = c_emp;
    rep.incidence = incidence_count(n, m, x, r_max, budget);
    rep.distinct = distinct_representing_forms(n, m, x, r_max, DedupStrategy::automatic, budget);
    rep.total = pow_int(2 * x + 1, static_cast<unsigned long>(n) + 1);
    rep.tail_estimate = tail_bracket(n, x, r_max, c_emp);
    rep.prop_lower = to_double(make_rat(rep.distinct, rep.total));
    rep.prop_upper = std::min(1.0, (to_double(rep.distinct) + rep.tail_estimate) / to_double(rep.total));
    return rep;
}

FitReport proportion_scan(int n, std::int64_t m, const std::vector<std::int64_t>& xs,
                          std::int64_t r_max, const CensusBudget& budget) {
    if (xs.size() < 4) throw std::invalid_argument("proportion scan needs >= 4 grid points");
    if (!std::is_sorted(xs.begin(), xs.end()))
        throw std::invalid_argument("X grid must be ascending");

    FitReport fit;
    // Fixed small audit grid; the constant feeds the heuristic tail only.
    fit.c_emp = davenport_grid_constant(n, m, 5, {4, 8, 16, 32}, budget.mitm_bytes);
    for (auto x : xs) fit.points.push_back(census(n, m, x, r_max, fit.c_emp, budget));

    std::vector<double> y, y_alt;
    for (const auto& p : fit.points) {
        y.push_back(p.prop_lower * static_cast<double>(p.x));
        y_alt.push_back(p.prop_lower * static_cast<double>(p.x) / std::log(static_cast<double>(p.x)));
    }
    const auto fit_const = [](const std::vector<double>& v, double& c, double& res) {
        c = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0;
        for (double t : v) ss += (t - c) * (t - c);
        res = c != 0 ? std::sqrt(ss / static_cast<double>(v.size())) / c : 0;
    };
    fit_const(y, fit.c_fit, fit.residual);
    fit_const(y_alt, fit.alt_c_fit, fit.alt_residual);

    fit.monotone_decay = true;
    for (std::size_t i = 1; i < fit.points.size(); ++i) {
        if (fit.points[i].x <= iabs(m)) continue;
        if (fit.points[i].prop_lower >= fit.points[i - 1].prop_lower) fit.monotone_decay = false;
    }
    return fit;
}

ReducibleCensus reducible_census(int n, std::int64_t x) {
    if (n < 3) throw std::invalid_argument("reducible census requires n >= 3");
    if (n > 6) throw capacity_error("reducibility supported for degree <= 6 only");
    if (x < 0) throw std::invalid_argument("reducible census requires X >= 0");
    const int d = n + 1;
    const std::int64_t span = 2 * x + 1;
    const Int box = pow_int(span, static_cast<unsigned long>(d));
    if (box > Int(1) << 26) throw capacity_error("coefficient box too large to enumerate");
    const std::int64_t total = static_cast<std::int64_t>(box.get_ui());

    std::int64_t reducible = 0;
    std::int64_t zeros = 0;
#pragma omp parallel for schedule(dynamic, 1024) reduction(+ : reducible, zeros)
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::int64_t rem = idx;
        std::vector<Int> coeffs(static_cast<std::size_t>(d));
        bool zero = true;
        for (int k = 0; k < d; ++k) {
            const std::int64_t ak = (rem % span) - x;
            rem /= span;
            coeffs[static_cast<std::size_t>(k)] = static_cast<long>(ak);
            if (ak != 0) zero = false;
        }
        if (zero) {
            ++zeros;
            ++reducible;  // degenerate; counted reducible by convention
            continue;
        }
        if (is_reducible(BinaryForm(std::move(coeffs)))) ++reducible;
    }

    ReducibleCensus rep;
    rep.count = Int(static_cast<long>(reducible));
    rep.zero_forms = Int(static_cast<long>(zeros));
    rep.total = box;
    rep.proportion = to_double(make_rat(rep.count, rep.total));
    return rep;
}

Int thue_count(const BinaryForm& f, const Int& m, std::int64_t b) {
    if (b < 1) throw std::invalid_argument("thue count requires bound B >= 1");
    const int n = f.degree();
    std::int64_t count = 0;
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : count)
    for (std::int64_t xv = -b; xv <= b; ++xv) {
        // For fixed x the form is a polynomial in y: sum_k (a_k x^{n-k}) y^k.
        std::vector<Int> cy(static_cast<std::size_t>(n) + 1);
        Int xpow = 1;
        for (int k = n; k >= 0; --k) {
            cy[static_cast<std::size_t>(k)] = f.coeff(k) * xpow;
            xpow *= Int(static_cast<long>(xv));
        }
        Int val;
        for (std::int64_t yv = -b; yv <= b; ++yv) {
            val = 0;
            for (int k = n; k >= 0; --k) val = val * static_cast<long>(yv) + cy[static_cast<std::size_t>(k)];
            if (val == m) ++count;
        }
    }
    return Int(static_cast<long>(count));
}

}  // namespace formcount
