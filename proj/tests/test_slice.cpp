#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "formcount/slice.hpp"
#include "oracles.hpp"

using namespace formcount;

namespace {

std::vector<Int> to_int_vec(const std::vector<std::int64_t>& v) {
    std::vector<Int> out;
    out.reserve(v.size());
    for (auto e : v) out.emplace_back(static_cast<long>(e));
    return out;
}

Int norm_sq_of(const std::vector<Int>& w) {
    Int s = 0;
    for (const auto& e : w) s += e * e;
    return s;
}

}  // namespace

TEST_CASE("slice spec validation") {
    CHECK_THROWS_AS(SliceSpec({5}, 0, 1), std::invalid_argument);        // d >= 2
    CHECK_THROWS_AS(SliceSpec({0, 0, 0}, 0, 1), std::invalid_argument);  // w != 0
    CHECK_THROWS_AS(SliceSpec({1, 2, 3}, 0, -1), std::invalid_argument);
    const std::int64_t huge = std::int64_t{1} << 60;
    CHECK_THROWS_AS(SliceSpec({huge, huge}, 0, 100), capacity_error);

    const SliceSpec s({8, 4, 2, 1}, 1, 5);
    CHECK(s.norm_sq() == 85);
    CHECK(s.abs_weight_sum() == 15);
    CHECK(s.feasible());
    CHECK(!SliceSpec({8, 4, 2, 1}, 76, 5).feasible());
}

TEST_CASE("make_power_slice guards the 64-bit range") {
    CHECK_NOTHROW(make_power_slice(power_vector(2, 1, 3), 1, 10));
    CHECK_THROWS_AS(make_power_slice(power_vector(3, 2, 45), 1, 1), capacity_error);
}

TEST_CASE("kernel basis: coordinate and antidiagonal cases") {
    const KernelBasis b1 = kernel_basis({1, 0, 0, 0});
    CHECK(b1.rank() == 3);
    CHECK(gram_covolume(b1) == 1);
    for (const auto& col : b1.columns) CHECK(col[0] == 0);

    const KernelBasis b2 = kernel_basis({1, 1});
    REQUIRE(b2.rank() == 1);
    CHECK(b2.columns[0] == std::vector<Int>{1, -1});
    CHECK(gram_covolume(b2) == 2);
}

TEST_CASE("kernel basis rejects non-primitive vectors") {
    CHECK_THROWS_AS(kernel_basis({2, 4, 6}), std::invalid_argument);
    CHECK_THROWS_AS(kernel_basis({0, 0}), std::invalid_argument);
}

TEST_CASE("kernel basis of a power vector: orthogonal, Gram 85, spans") {
    const auto w = to_int_vec({8, 4, 2, 1});
    const KernelBasis basis = kernel_basis(w);
    REQUIRE(basis.rank() == 3);
    for (const auto& col : basis.columns) {
        Int dot = 0;
        for (int i = 0; i < 4; ++i) dot += w[static_cast<std::size_t>(i)] * col[static_cast<std::size_t>(i)];
        CHECK(dot == 0);
    }
    CHECK(gram_covolume(basis) == 85);

    // Every small kernel point is an integer combination of the basis.
    const std::int64_t bound = 4;
    for (std::int64_t x0 = -bound; x0 <= bound; ++x0)
        for (std::int64_t x1 = -bound; x1 <= bound; ++x1)
            for (std::int64_t x2 = -bound; x2 <= bound; ++x2)
                for (std::int64_t x3 = -bound; x3 <= bound; ++x3) {
                    if (8 * x0 + 4 * x1 + 2 * x2 + x3 != 0) continue;
                    CHECK(oracles::in_lattice_span(basis, to_int_vec({x0, x1, x2, x3})));
                }
}

TEST_CASE("covolume identity gram(kernel(w)) == |w|^2 on random primitive w") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 4 + trial % 5;  // up to d = 8
        const auto w64 = oracles::random_primitive_vector(rng, d, -50, 50);
        const auto w = to_int_vec(w64);
        CHECK(gram_covolume(kernel_basis(w)) == norm_sq_of(w));
    }
}

TEST_CASE("coordinate slices have volume exactly (2X)^n") {
    for (int n : {3, 4, 5})
        for (std::int64_t x = 1; x <= 20; ++x) {
            std::vector<std::int64_t> w(static_cast<std::size_t>(n) + 1, 0);
            w.back() = 1;
            const SliceSpec spec(w, 0, x);
            CHECK(slice_volume(spec) == Rat(pow_int(2 * x, static_cast<unsigned long>(n))));
            CHECK(spec.norm_sq() == 1);
        }
}

TEST_CASE("slice volume: empty and face-contact cases") {
    // Hyperplane misses the box.
    CHECK(slice_volume(SliceSpec({8, 4, 2, 1}, 76, 5)) == 0);
    CHECK(slice_volume(SliceSpec({1, 1, 1, 1}, 9, 2)) == 0);

    // Face contact at c = +-X for a coordinate hyperplane keeps the full
    // (2X)^n face on both sides.
    for (std::int64_t c : {5ll, -5ll}) {
        const SliceSpec spec({1, 0, 0, 0}, c, 5);
        CHECK(slice_volume(spec) == Rat(pow_int(10, 3)));
    }
    // Vertex contact for an all-ones hyperplane has measure zero.
    CHECK(slice_volume(SliceSpec({1, 1, 1, 1}, 8, 2)) == 0);
}

TEST_CASE("slice volume symmetry in c and under signed permutations") {
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<std::int64_t> wdist(-9, 9);
    std::uniform_int_distribution<std::int64_t> cdist(-30, 30);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::int64_t> w(4);
        for (auto& e : w) e = wdist(rng);
        if (std::all_of(w.begin(), w.end(), [](auto v) { return v == 0; })) continue;
        const std::int64_t c = cdist(rng);
        const Rat vol = slice_volume(SliceSpec(w, c, 3));
        CHECK(vol == slice_volume(SliceSpec(w, -c, 3)));

        std::vector<std::int64_t> wp = w;
        std::shuffle(wp.begin(), wp.end(), rng);
        for (auto& e : wp)
            if (rng() & 1) e = -e;
        CHECK(vol == slice_volume(SliceSpec(wp, c, 3)));
    }
}

TEST_CASE("slice volume is nondecreasing in X") {
    const std::vector<std::vector<std::int64_t>> ws = {
        {8, 4, 2, 1}, {1, 1, 1, 1}, {3, 0, -2, 5}, {1, 0, 0, 0}};
    for (const auto& w : ws)
        for (std::int64_t c : {0ll, 1ll, 7ll}) {
            Rat prev = 0;
            for (std::int64_t x = 1; x <= 8; ++x) {
                const Rat cur = slice_volume(SliceSpec(w, c, x));
                CHECK(cur >= prev);
                prev = cur;
            }
        }
}

TEST_CASE("slice volume matches the Monte Carlo oracle within 3 sigma") {
    const std::vector<SliceSpec> specs = {
        SliceSpec({8, 4, 2, 1}, 1, 5),
        SliceSpec({1, 1, 1, 1}, 0, 1),
        SliceSpec({3, -2, 5, 1}, 4, 3),
        SliceSpec({2, 7, 0, -3}, -5, 4),
        SliceSpec({1, 2, 3}, 2, 2),
    };
    std::uint64_t seed = 4242;
    for (const auto& spec : specs) {
        const double exact = to_double(slice_volume(spec)) * std::sqrt(to_double(spec.norm_sq()));
        const auto mc = oracles::mc_volume(spec, 1'000'000, ++seed);
        CHECK(std::abs(exact - mc.value) <= 3 * mc.stderr_ + 1e-12);
    }
}

TEST_CASE("coordinate slice surface is the n-cube surface") {
    for (int n : {3, 4, 5}) {
        std::vector<std::int64_t> w(static_cast<std::size_t>(n) + 1, 0);
        w.back() = 1;
        const RadicalSum surf = slice_surface(SliceSpec(w, 0, 1));
        REQUIRE(surf.exactly_rational());
        CHECK(surf.rational_value() == Rat(2 * n) * Rat(pow_int(2, static_cast<unsigned long>(n - 1))));
    }
}

TEST_CASE("surface of an empty slice is zero") {
    const RadicalSum surf = slice_surface(SliceSpec({8, 4, 2, 1}, 100, 2));
    CHECK(surf.terms().empty());
    CHECK(surf.value() == 0);
}

TEST_CASE("hexagon slice of the 3-cube: exact surface 6*sqrt(2)") {
    const RadicalSum surf = slice_surface(SliceSpec({1, 1, 1}, 0, 1));
    REQUIRE(surf.terms().size() == 1);
    const auto& [radicand, coeff] = *surf.terms().begin();
    CHECK(radicand == 2);
    CHECK(coeff == 6);
}

TEST_CASE("slice surface matches the facet-wise Monte Carlo oracle within 3 sigma") {
    const std::vector<SliceSpec> specs = {
        SliceSpec({1, 1, 1, 1}, 0, 1),
        SliceSpec({8, 4, 2, 1}, 1, 5),
        SliceSpec({2, -3, 1, 4}, 2, 3),
    };
    std::uint64_t seed = 777;
    for (const auto& spec : specs) {
        const double exact = slice_surface(spec).value();
        const auto mc = oracles::mc_surface(spec, 1'000'000, seed += 1000);
        CHECK(std::abs(exact - mc.value) <= 3 * mc.stderr_ + 1e-12);
    }
}

TEST_CASE("coarea residual is exactly zero") {
    CHECK(coarea_residual({1, 0, 0, 0}, 2) == 0);
    CHECK(coarea_residual({1, 1}, 1) == 0);
    CHECK(coarea_residual({8, 4, 2, 1}, 2) == 0);

    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 25; ++trial) {
        const auto w = oracles::random_primitive_vector(rng, 4, -50, 50);
        CHECK(coarea_residual(w, 3) == 0);
    }
    CHECK_THROWS_AS(coarea_residual({2, 4}, 2), std::invalid_argument);
}

TEST_CASE("hand case w=(1,1), X=1: exact slice areas") {
    // Areas sqrt(2) * f(c): the diagonal sections of the square have lengths
    // 0, sqrt(2), 2*sqrt(2), sqrt(2), 0 at c = -2..2.
    CHECK(slice_volume(SliceSpec({1, 1}, 0, 1)) == 2);
    CHECK(slice_volume(SliceSpec({1, 1}, 1, 1)) == 1);
    CHECK(slice_volume(SliceSpec({1, 1}, -1, 1)) == 1);
    CHECK(slice_volume(SliceSpec({1, 1}, 2, 1)) == 0);
}

TEST_CASE("density and volume agree away from degenerate faces") {
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<std::int64_t> wdist(-7, 7);
    std::uniform_int_distribution<std::int64_t> cdist(-20, 20);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::int64_t> w(4);
        int nonzero = 0;
        for (auto& e : w) {
            e = wdist(rng);
            if (e != 0) ++nonzero;
        }
        if (nonzero < 2) continue;
        const SliceSpec spec(w, cdist(rng), 3);
        CHECK(slice_density(spec) == slice_volume(spec));
    }
}

TEST_CASE("paper bounds: vol <= K1 X^n and surf <= K2 X^{n-1} with stable constants") {
    std::mt19937_64 rng(505);
    std::vector<std::vector<std::int64_t>> ws;
    for (int trial = 0; trial < 20; ++trial) ws.push_back(oracles::random_primitive_vector(rng, 4, -20, 20));

    const auto constants = [&](std::int64_t x) {
        double k1 = 0, k2 = 0;
        for (const auto& w : ws)
            for (std::int64_t c : {0ll, 1ll, 5ll}) {
                const SliceSpec spec(w, c, x);
                const double vol = to_double(slice_volume(spec)) * std::sqrt(to_double(spec.norm_sq()));
                const double surf = slice_surface(spec).value();
                k1 = std::max(k1, vol / std::pow(static_cast<double>(x), 3));
                k2 = std::max(k2, surf / std::pow(static_cast<double>(x), 2));
            }
        return std::pair{k1, k2};
    };

    const auto [k1a, k2a] = constants(4);
    const auto [k1b, k2b] = constants(8);
    const auto [k1c, k2c] = constants(16);
    // The fitted constants must not grow with X.
    CHECK(k1b <= k1a * 1.000001);
    CHECK(k1c <= k1b * 1.000001);
    CHECK(k2b <= k2a * 1.000001);
    CHECK(k2c <= k2b * 1.000001);
}

TEST_CASE("slice volume term-count guard") {
    std::vector<std::int64_t> w(24, 1);
    CHECK_THROWS_AS(slice_volume(SliceSpec(w, 0, 1)), capacity_error);
}

TEST_CASE("geometry report bundles exact values") {
    const GeometryReport rep = slice_geometry(SliceSpec({1, 1, 1}, 0, 1));
    CHECK(rep.norm_sq == 3);
    // Hexagon area 3*sqrt(3) (side sqrt(2)) divided by the covolume sqrt(3).
    CHECK(rep.vol == 3);
    CHECK(rep.vol_euclidean() == doctest::Approx(3.0 * std::sqrt(3.0)));
}
