#include "formcount/count.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace formcount {

namespace {

std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

// Coordinates ordered by |w| descending (ties by index), zeros last.
std::vector<int> weight_order(const std::vector<std::int64_t>& w) {
    std::vector<int> idx(w.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return iabs(w[static_cast<std::size_t>(a)]) > iabs(w[static_cast<std::size_t>(b)]);
    });
    return idx;
}

struct NaivePlan {
    std::int64_t pivot_w = 0;
    std::vector<std::int64_t> free_w;   // non-pivot weights, |w| descending
    std::vector<std::int64_t> suffix;   // suffix[k] = X*(|pivot| + sum_{j>=k} |free_w[j]|)
    std::size_t zstart = 0;             // first all-zero tail position in free_w
    Int zpow;                           // (2X+1)^{#zero free coords}
    std::int64_t c = 0;
    std::int64_t x = 0;
};

NaivePlan make_plan(const SliceSpec& spec) {
    NaivePlan p;
    p.c = spec.c();
    p.x = spec.x();
    const auto order = weight_order(spec.w());
    p.pivot_w = spec.w()[static_cast<std::size_t>(order[0])];
    for (std::size_t k = 1; k < order.size(); ++k)
        p.free_w.push_back(spec.w()[static_cast<std::size_t>(order[k])]);
    p.zstart = p.free_w.size();
    while (p.zstart > 0 && p.free_w[p.zstart - 1] == 0) --p.zstart;
    p.zpow = pow_int(2 * p.x + 1, static_cast<unsigned long>(p.free_w.size() - p.zstart));
    p.suffix.assign(p.free_w.size() + 1, 0);
    std::int64_t acc = iabs(p.pivot_w);
    for (std::size_t k = p.free_w.size(); k-- > 0;) {
        p.suffix[k + 1] = p.x * acc;
        acc += iabs(p.free_w[k]);
    }
    p.suffix[0] = p.x * acc;
    return p;
}

struct NaiveAcc {
    std::int64_t small = 0;
    Int big;

    void add_solutions(const NaivePlan& p) {
        if (p.zpow.fits_slong_p()) {
            const std::int64_t z = p.zpow.get_si();
            if (small <= (std::int64_t{1} << 62) - z) {
                small += z;
                return;
            }
        }
        big += p.zpow;
    }
    Int total() const { return big + Int(static_cast<long>(small)); }
};

void naive_recurse(const NaivePlan& p, std::size_t level, std::int64_t s, NaiveAcc& acc) {
    if (level == p.zstart) {
        const std::int64_t r = p.c - s;
        if (r % p.pivot_w != 0) return;
        const std::int64_t a = r / p.pivot_w;
        if (a < -p.x || a > p.x) return;
        acc.add_solutions(p);
        return;
    }
    const std::int64_t wk = p.free_w[level];
    const std::int64_t bound = p.suffix[level + 1];
    for (std::int64_t a = -p.x; a <= p.x; ++a) {
        const std::int64_t s2 = s + wk * a;
        if (iabs(p.c - s2) > bound) continue;
        naive_recurse(p, level + 1, s2, acc);
    }
}

Int count_naive_impl(const SliceSpec& spec, bool parallel) {
    const NaivePlan p = make_plan(spec);
    if (p.zstart == 0) {
        NaiveAcc acc;
        naive_recurse(p, 0, 0, acc);
        return acc.total();
    }
    if (!parallel) {
        NaiveAcc acc;
        naive_recurse(p, 0, 0, acc);
        return acc.total();
    }
    const std::int64_t span = 2 * p.x + 1;
    std::vector<NaiveAcc> parts(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
    {
        NaiveAcc& acc = parts[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t k = 0; k < span; ++k) {
            const std::int64_t a = -p.x + k;
            const std::int64_t s = p.free_w[0] * a;
            if (iabs(p.c - s) > p.suffix[1]) continue;
            naive_recurse(p, 1, s, acc);
        }
    }
    Int total = 0;
    for (const auto& part : parts) total += part.total();
    return total;
}

}  // namespace

Int count_points_exhaustive(const SliceSpec& spec) {
    const int d = spec.dim();
    const double boxsize = std::pow(2.0 * static_cast<double>(spec.x()) + 1.0, d);
    if (boxsize > static_cast<double>(1ll << 27))
        throw capacity_error("box too large for the exhaustive reference scan");
    std::vector<std::int64_t> a(static_cast<std::size_t>(d), -spec.x());
    Int count = 0;
    while (true) {
        std::int64_t dot = 0;
        for (int j = 0; j < d; ++j) dot += spec.w()[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(j)];
        if (dot == spec.c()) ++count;
        int pos = 0;
        while (pos < d && ++a[static_cast<std::size_t>(pos)] > spec.x()) {
            a[static_cast<std::size_t>(pos)] = -spec.x();
            ++pos;
        }
        if (pos == d) break;
    }
    return count;
}

Int count_points_naive(const SliceSpec& spec) { return count_naive_impl(spec, true); }
Int count_points_naive_serial(const SliceSpec& spec) { return count_naive_impl(spec, false); }

namespace {

// All values sum_j w_j a_j over a in [-X,X]^k, ascending.
std::vector<std::int64_t> half_sums(const std::vector<std::int64_t>& w, std::int64_t x) {
    const std::size_t k = w.size();
    const std::int64_t span = 2 * x + 1;
    std::size_t total = 1;
    for (std::size_t j = 0; j < k; ++j) total *= static_cast<std::size_t>(span);
    std::vector<std::int64_t> sums(total);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
        std::int64_t rem = i;
        std::int64_t s = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const std::int64_t digit = rem % span;
            rem /= span;
            s += w[j] * (digit - x);
        }
        sums[static_cast<std::size_t>(i)] = s;
    }
    std::sort(sums.begin(), sums.end());
    return sums;
}

}  // namespace

Int count_points_mitm(const SliceSpec& spec, std::size_t budget_bytes) {
    const int d = spec.dim();
    std::vector<std::int64_t> wa, wb;  // interleaved split for balanced ranges
    for (int j = 0; j < d; ++j)
        (j % 2 == 0 ? wa : wb).push_back(spec.w()[static_cast<std::size_t>(j)]);

    const double span = 2.0 * static_cast<double>(spec.x()) + 1.0;
    const double bytes =
        (std::pow(span, static_cast<double>(wa.size())) + std::pow(span, static_cast<double>(wb.size()))) * 8.0;
    if (bytes > static_cast<double>(budget_bytes))
        throw capacity_error("meet-in-the-middle tables exceed the memory budget");

    const auto sa = half_sums(wa, spec.x());
    const auto sb = half_sums(wb, spec.x());

    Int total = 0;
    std::size_t i = 0;
    std::size_t j = sb.size();
    while (i < sa.size() && j > 0) {
        const std::int64_t s = sa[i] + sb[j - 1];
        if (s > spec.c()) {
            --j;
        } else if (s < spec.c()) {
            ++i;
        } else {
            const std::int64_t va = sa[i], vb = sb[j - 1];
            std::size_t ca = 0, cb = 0;
            while (i < sa.size() && sa[i] == va) ++i, ++ca;
            while (j > 0 && sb[j - 1] == vb) --j, ++cb;
            total += Int(static_cast<long>(ca)) * Int(static_cast<long>(cb));
        }
    }
    return total;
}

Int count_points(const SliceSpec& spec, std::size_t budget_bytes) {
    try {
        return count_points_mitm(spec, budget_bytes);
    } catch (const capacity_error&) {
        return count_points_naive(spec);
    }
}

Int partition_residual(const std::vector<std::int64_t>& w, std::int64_t x,
                       std::size_t budget_bytes) {
    SliceSpec probe(w, 0, x);
    const std::int64_t reach = x * probe.abs_weight_sum();
    Int sum = 0;
    for (std::int64_t c = -reach; c <= reach; ++c)
        sum += count_points(SliceSpec(w, c, x), budget_bytes);
    return sum - pow_int(2 * x + 1, static_cast<unsigned long>(w.size()));
}

CountReport davenport_audit(const SliceSpec& spec, std::size_t budget_bytes,
                            std::size_t naive_check_limit) {
    CountReport rep;
    rep.w = spec.w();
    rep.c = spec.c();
    rep.x = spec.x();
    rep.norm_sq = spec.norm_sq();

    try {
        rep.exact_count = count_points_mitm(spec, budget_bytes);
        rep.mitm_used = true;
    } catch (const capacity_error&) {
        rep.exact_count = count_points_naive(spec);
    }
    const double naive_work =
        std::pow(2.0 * static_cast<double>(spec.x()) + 1.0, spec.dim() - 1);
    if (rep.mitm_used && naive_work <= static_cast<double>(naive_check_limit)) {
        const Int check = count_points_naive(spec);
        if (check != rep.exact_count)
            throw invariant_violation("count mismatch: mitm=" + rep.exact_count.get_str() +
                                      " naive=" + check.get_str());
        rep.naive_checked = true;
    }

    rep.vol = slice_volume(spec);
    rep.surf = spec.dim() >= 3 ? slice_surface(spec) : RadicalSum{};
    const Rat disc = abs(Rat(rep.exact_count) - rep.vol);
    rep.discrepancy = to_double(disc);
    rep.surf_over_delta = rep.surf.value() / std::sqrt(to_double(rep.norm_sq));
    rep.ratio = rep.discrepancy / (rep.surf_over_delta + 1.0);
    return rep;
}

double davenport_grid_constant(int n, std::int64_t m, std::int64_t r_max,
                               const std::vector<std::int64_t>& xs, std::size_t budget_bytes) {
    std::vector<PrimitivePair> pairs;
    for_each_primitive_pair(r_max, [&](const PrimitivePair& p) { pairs.push_back(p); });
    double worst = 0;
#pragma omp parallel for schedule(dynamic) reduction(max : worst)
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const PowerVector pv = power_vector(pairs[i].u, pairs[i].v, n);
        for (auto x : xs) {
            const CountReport rep = davenport_audit(make_power_slice(pv, m, x), budget_bytes);
            worst = std::max(worst, rep.ratio);
        }
    }
    return worst;
}

}  // namespace formcount
