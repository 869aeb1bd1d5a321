// Timing harness comparing the serial reference paths with the OpenMP
// kernels and the algorithmic alternatives. All variants must agree exactly;
// the checksum column makes silent divergence visible.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "formcount/census.hpp"
#include "formcount/count.hpp"
#include "formcount/forms.hpp"
#include "formcount/slice.hpp"

using namespace formcount;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const std::string& name, double ms, const std::string& checksum) {
    std::printf("%-36s %10.2f ms   %s\n", name.c_str(), ms, checksum.c_str());
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

int main() {
    std::printf("threads: %d\n\n", omp_get_max_threads());

    {
        const SliceSpec spec = make_power_slice(power_vector(2, 1, 4), 1, 24);
        Int a, b, c, d;
        const double t_ex = time_ms([&] { a = count_points_exhaustive(SliceSpec({8, 4, 2, 1}, 1, 24)); });
        row("count exhaustive (d=4, X=24)", t_ex, a.get_str());
        const double t_ser = time_ms([&] { b = count_points_naive_serial(spec); });
        row("count naive serial (d=5, X=24)", t_ser, b.get_str());
        const double t_par = time_ms([&] { c = count_points_naive(spec); });
        row("count naive OpenMP (d=5, X=24)", t_par, c.get_str());
        const double t_mitm = time_ms([&] { d = count_points_mitm(spec); });
        row("count mitm (d=5, X=24)", t_mitm, d.get_str());
        std::printf("  naive serial/parallel: %.2fx   naive/mitm: %.2fx   agree: %s\n\n",
                    t_ser / t_par, t_ser / t_mitm, (b == c && c == d) ? "yes" : "NO");
    }

    {
        Int a, b;
        const double t_ser = time_ms([&] { a = incidence_count_serial(3, 1, 10, 30); });
        row("incidence serial (n=3, X=10, R=30)", t_ser, a.get_str());
        const double t_par = time_ms([&] { b = incidence_count(3, 1, 10, 30); });
        row("incidence OpenMP (n=3, X=10, R=30)", t_par, b.get_str());
        std::printf("  speedup: %.2fx   agree: %s\n\n", t_ser / t_par, a == b ? "yes" : "NO");
    }

    {
        double a = 0, b = 0;
        const double t_ser = time_ms([&] { a = primitive_fraction_serial(4000); });
        row("primitive fraction serial (R=4000)", t_ser, num(a));
        const double t_par = time_ms([&] { b = primitive_fraction(4000); });
        row("primitive fraction OpenMP (R=4000)", t_par, num(b));
        std::printf("  speedup: %.2fx   agree: %s\n\n", t_ser / t_par, a == b ? "yes" : "NO");
    }

    {
        // 2^16 divided-difference terms; the sum parallelizes internally.
        std::vector<std::int64_t> w;
        for (int i = 0; i < 16; ++i) w.push_back(1 + (i * 7) % 5);
        const SliceSpec spec(w, 3, 2);
        Rat v;
        const double t = time_ms([&] { v = slice_volume(spec); });
        row("slice volume (16 weights, 2^16 terms)", t, num(to_double(v)));
    }

    return 0;
}
