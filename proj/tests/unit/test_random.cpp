#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "concentric/random.hpp"

using concentric::Rng;

TEST_SUITE("random") {

TEST_CASE("seed and stream determine the sequence") {
    Rng a(42, 3), b(42, 3), c(42, 4), d(43, 3);
    bool differs_stream = false, differs_seed = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs_stream |= x != c.next_u64();
        differs_seed |= x != d.next_u64();
    }
    CHECK(differs_stream);
    CHECK(differs_seed);
}

TEST_CASE("uniform is open") {
    Rng rng(1);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform_open();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("poisson moments") {
    for (const double mean : {0.0, 0.3, 2.0, 9.5, 10.0, 40.0, 2000.0}) {
        Rng rng(7, 1);
        const int n = 40000;
        double s = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(rng.poisson(mean));
            s += k;
            s2 += k * k;
        }
        const double m = s / n;
        const double var = s2 / n - m * m;
        // 5 sigma on the mean, 10% on the variance
        CHECK(std::fabs(m - mean) <= 5.0 * std::sqrt(mean / n) + 1e-12);
        if (mean > 0) CHECK(var == doctest::Approx(mean).epsilon(0.1));
    }
}

TEST_CASE("exponential passes Kolmogorov-Smirnov") {
    Rng rng(99);
    const int n = 5000;
    std::vector<double> v(n);
    for (auto& x : v) x = rng.exponential(0.23);
    std::sort(v.begin(), v.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double cdf = 1.0 - std::exp(-v[i] / 0.23);
        d = std::max({d, cdf - double(i) / n, double(i + 1) / n - cdf});
    }
    // critical value at alpha = 0.001
    CHECK(d < 1.95 / std::sqrt(double(n)));
}

}
