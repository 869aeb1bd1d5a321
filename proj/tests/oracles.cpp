#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace formcount::oracles {

Int horner_eval(const BinaryForm& f, std::int64_t u, std::int64_t v) {
    const int n = f.degree();
    if (v != 0) {
        // v^n * sum_k a_k (u/v)^{n-k}: Horner in t = u/v, highest power first.
        Rat t = make_rat(Int(static_cast<long>(u)), Int(static_cast<long>(v)));
        Rat acc(0);
        for (int k = 0; k <= n; ++k) acc = acc * t + Rat(f.coeff(k));
        acc *= Rat(pow_int(v, static_cast<unsigned long>(n)));
        if (acc.get_den() != 1) throw std::logic_error("horner oracle produced a non-integer");
        return acc.get_num();
    }
    return f.coeff(0) * pow_int(u, static_cast<unsigned long>(n));
}

std::vector<std::int64_t> phi_sieve(std::int64_t n) {
    std::vector<std::int64_t> phi(static_cast<std::size_t>(n) + 1);
    std::iota(phi.begin(), phi.end(), 0);
    for (std::int64_t p = 2; p <= n; ++p) {
        if (phi[static_cast<std::size_t>(p)] != p) continue;  // not prime
        for (std::int64_t k = p; k <= n; k += p)
            phi[static_cast<std::size_t>(k)] -= phi[static_cast<std::size_t>(k)] / p;
    }
    return phi;
}

McEstimate mc_volume(const SliceSpec& spec, std::size_t samples, std::uint64_t seed) {
    std::vector<std::int64_t> w;
    int zeros = 0;
    for (auto wk : spec.w()) {
        if (wk == 0)
            ++zeros;
        else
            w.push_back(wk < 0 ? -wk : wk);
    }
    std::int64_t wsum = 0;
    for (auto wk : w) wsum += wk;
    const double t = static_cast<double>(spec.c()) + static_cast<double>(spec.x()) * static_cast<double>(wsum);
    const double side = 2.0 * static_cast<double>(spec.x());

    // Condition on the largest weight: volume = sqrt(norm_sq) * (2X)^z *
    // P(0 <= t - Z <= 2X w_max) / (2X w_max), Z the sum over the rest.
    const std::size_t pmax = static_cast<std::size_t>(
        std::max_element(w.begin(), w.end()) - w.begin());
    const double wp = static_cast<double>(w[pmax]);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, side);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        double z = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i == pmax) continue;
            z += static_cast<double>(w[i]) * uni(rng);
        }
        const double rem = t - z;
        if (rem >= 0 && rem <= side * wp) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    // Vol = sqrt(norm_sq) * (2X)^z * (2X)^{d'} * density, density = p/(2X wp).
    const double scale = std::sqrt(to_double(spec.norm_sq())) *
                         std::pow(side, zeros + static_cast<int>(w.size()) - 1) / wp;
    McEstimate est;
    est.value = scale * p;
    est.stderr_ = scale * std::sqrt(p * (1 - p) / static_cast<double>(samples));
    return est;
}

McEstimate mc_surface(const SliceSpec& spec, std::size_t samples_per_facet, std::uint64_t seed) {
    const int d = spec.dim();
    McEstimate est;
    double var = 0;
    std::uint64_t facet_seed = seed;
    for (int i = 0; i < d; ++i) {
        std::vector<std::int64_t> sub;
        bool nonzero = false;
        for (int j = 0; j < d; ++j) {
            if (j == i) continue;
            sub.push_back(spec.w()[static_cast<std::size_t>(j)]);
            if (sub.back() != 0) nonzero = true;
        }
        if (!nonzero) continue;
        for (int sign : {1, -1}) {
            ++facet_seed;
            const std::int64_t cp = spec.c() - sign * spec.w()[static_cast<std::size_t>(i)] * spec.x();
            const SliceSpec facet(sub, cp, spec.x());
            const McEstimate sub_est = mc_volume(facet, samples_per_facet, facet_seed);
            est.value += sub_est.value;
            var += sub_est.stderr_ * sub_est.stderr_;
        }
    }
    est.stderr_ = std::sqrt(var);
    return est;
}

WitnessCensus witness_census(int n, std::int64_t m, std::int64_t x, std::int64_t r_max) {
    std::vector<std::vector<std::int64_t>> pair_weights;
    for_each_primitive_pair(r_max, [&](const PrimitivePair& p) {
        const PowerVector pv = power_vector(p.u, p.v, n);
        std::vector<std::int64_t> w;
        for (const auto& wk : pv.w) w.push_back(to_i64(wk));
        pair_weights.push_back(std::move(w));
    });

    const int d = n + 1;
    WitnessCensus out{0, 0};
    std::vector<std::int64_t> a(static_cast<std::size_t>(d), -x);
    while (true) {
        bool seen = false;
        for (const auto& w : pair_weights) {
            std::int64_t dot = 0;
            for (int k = 0; k < d; ++k) dot += w[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(k)];
            if (dot == m) {
                out.incidence += 1;
                seen = true;
            }
        }
        if (seen) out.distinct += 1;
        int pos = 0;
        while (pos < d && ++a[static_cast<std::size_t>(pos)] > x) {
            a[static_cast<std::size_t>(pos)] = -x;
            ++pos;
        }
        if (pos == d) break;
    }
    return out;
}

bool cubic_reducible_by_division(const BinaryForm& f) {
    if (f.degree() != 3) throw std::invalid_argument("oracle supports degree 3 only");
    if (f.is_zero()) throw std::invalid_argument("zero form");
    const Int &a0 = f.coeff(0), &a3 = f.coeff(3);
    if (a0 == 0 || a3 == 0) return true;  // y | F resp. x | F

    const auto divisors = [](const Int& v) {
        std::vector<Int> out;
        const std::int64_t m = to_i64(abs(v));
        for (std::int64_t t = 1; t <= m; ++t)
            if (m % t == 0) out.emplace_back(static_cast<long>(t));
        return out;
    };

    // Synthetic division of F by qx - py: g_0 = a_0/q, g_k = (a_k + p g_{k-1})/q,
    // exact factor iff a_3 = -p g_2.
    for (const Int& q : divisors(a0))
        for (const Int& pp : divisors(a3))
            for (int sign : {1, -1}) {
                const Int p = sign * pp;
                Rat g0 = make_rat(a0, q);
                Rat g1 = (Rat(f.coeff(1)) + Rat(p) * g0) / Rat(q);
                Rat g2 = (Rat(f.coeff(2)) + Rat(p) * g1) / Rat(q);
                if (Rat(f.coeff(3)) == -Rat(p) * g2) return true;
            }
    return false;
}

double tail_partial_sum(int n, std::int64_t x, std::int64_t r_max, double c_emp,
                        std::int64_t terms) {
    // Sum small-to-large magnitudes: iterate R downward.
    double sum = 0;
    for (std::int64_t r = r_max + terms; r > r_max; --r) {
        const double rd = static_cast<double>(r);
        double term = 8.0 * rd * c_emp * std::pow(static_cast<double>(x), n) / std::pow(rd, n);
        if (r <= x) term += 8.0 * rd;
        sum += term;
    }
    // Midpoint integral remainder for the zeta part beyond the last term.
    const double nn = static_cast<double>(n);
    const double b = static_cast<double>(r_max + terms) + 0.5;
    sum += 8.0 * c_emp * std::pow(static_cast<double>(x), n) * std::pow(b, 2.0 - nn) / (nn - 2.0);
    return sum;
}

bool in_lattice_span(const KernelBasis& basis, const std::vector<Int>& x) {
    const int d = basis.ambient_dim();
    const int r = basis.rank();
    // Solve M y = x over Q by elimination on [M | x].
    std::vector<std::vector<Rat>> m(static_cast<std::size_t>(d),
                                    std::vector<Rat>(static_cast<std::size_t>(r) + 1));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < r; ++j)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                Rat(basis.columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] = Rat(x[static_cast<std::size_t>(i)]);
    }
    std::vector<int> pivot_row;
    int row = 0;
    for (int col = 0; col < r && row < d; ++col) {
        int pr = -1;
        for (int i = row; i < d; ++i)
            if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) return false;  // basis columns are independent; not expected
        std::swap(m[static_cast<std::size_t>(row)], m[static_cast<std::size_t>(pr)]);
        const Rat lead = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
        for (int i = 0; i < d; ++i) {
            if (i == row) continue;
            const Rat factor = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] / lead;
            if (factor == 0) continue;
            for (int j = col; j <= r; ++j)
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                    factor * m[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
        }
        pivot_row.push_back(row);
        ++row;
    }
    // Consistency: zero rows must have zero rhs.
    for (int i = row; i < d; ++i)
        if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] != 0) return false;
    // Integrality of the solution.
    for (int col = 0; col < r; ++col) {
        const Rat y = m[static_cast<std::size_t>(col)][static_cast<std::size_t>(r)] /
                      m[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        if (y.get_den() != 1) return false;
    }
    return true;
}

std::vector<std::int64_t> random_primitive_vector(std::mt19937_64& rng, int d, std::int64_t lo,
                                                  std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> dist(lo, hi);
    while (true) {
        std::vector<std::int64_t> w(static_cast<std::size_t>(d));
        for (auto& e : w) e = dist(rng);
        if (gcd_all(w) == 1) return w;
    }
}

}  // namespace formcount::oracles
