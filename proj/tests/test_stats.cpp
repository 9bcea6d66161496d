#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "vagreeks/errors.hpp"
#include "vagreeks/rng.hpp"
#include "vagreeks/stats.hpp"

using Catch::Approx;

TEST_CASE("mean_se small examples") {
    const std::vector<double> ones{1, 1, 1, 1};
    const auto a = vag::mean_se(ones);
    CHECK(a.mean == 1.0);
    CHECK(a.std_err == 0.0);
    CHECK(a.count == 4);

    const std::vector<double> pair{0, 2};
    const auto b = vag::mean_se(pair);
    CHECK(b.mean == 1.0);
    CHECK(b.std_err == Approx(1.0));

    const std::vector<double> one{5};
    CHECK_THROWS_AS(vag::mean_se(one), vag::InsufficientSamples);
    CHECK_THROWS_AS(vag::clustered_mean_se(one), vag::InsufficientSamples);
}

TEST_CASE("mean of a million standard normals") {
    const vag::NormalStream s(99);
    std::vector<double> xs(1'000'000);
    for (std::uint32_t i = 0; i < xs.size(); ++i) xs[i] = s.pair(i, 0, 0, vag::Lane::oracle).first;
    const auto m = vag::mean_se(xs);
    CHECK(std::abs(m.mean) < 3e-3);
    CHECK(m.std_err == Approx(1e-3).epsilon(0.01));
}

TEST_CASE("compensated accumulation at mixed magnitudes") {
    // 1e6 values around 1e8 with unit-scale spread: the shifted sums keep
    // the variance; the mean is checked against an exact integer total.
    vag::SampleAccumulator acc;
    long double exact = 0;
    for (int i = 0; i < 1'000'000; ++i) {
        const double x = 1e8 + (i % 7) - 3 + 0.25 * (i % 2);
        acc.add(x);
        exact += x;
    }
    CHECK(acc.mean() == Approx(static_cast<double>(exact / 1'000'000)).epsilon(1e-15));
    // variance of (i%7 - 3) + 0.25 (i%2), essentially independent residues
    CHECK(acc.variance() == Approx(4.0 + 0.015625).epsilon(1e-3));

    vag::CompensatedSum s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i) s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1000.0);
}

TEST_CASE("accumulator merge is associative and commutative") {
    std::mt19937_64 gen(5);
    std::lognormal_distribution<double> dist(3.0, 2.0);
    std::vector<double> xs(30000);
    for (auto& x : xs) x = dist(gen);

    auto fill = [&](std::size_t lo, std::size_t hi) {
        vag::SampleAccumulator a;
        for (std::size_t i = lo; i < hi; ++i) a.add(xs[i]);
        return a;
    };
    const auto whole = fill(0, xs.size());
    auto a = fill(0, 7000), b = fill(7000, 19000), c = fill(19000, xs.size());

    auto ab_c = a;
    ab_c.merge(b);
    ab_c.merge(c);
    auto bc = b;
    bc.merge(c);
    auto a_bc = a;
    a_bc.merge(bc);
    auto cba = c;
    cba.merge(b);
    cba.merge(a);

    for (const auto* m : {&ab_c, &a_bc, &cba}) {
        CHECK(m->count() == whole.count());
        CHECK(m->mean() == Approx(whole.mean()).epsilon(1e-12));
        CHECK(m->variance() == Approx(whole.variance()).epsilon(1e-12));
    }

    vag::SampleAccumulator empty;
    auto e = empty;
    e.merge(a);
    CHECK(e.mean() == a.mean());
    a.merge(empty);
    CHECK(a.count() == 7000);
}

TEST_CASE("clustered standard errors") {
    SECTION("equal cluster means give zero SE") {
        const std::vector<double> means(10, 3.5);
        const auto r = vag::clustered_mean_se(means);
        CHECK(r.mean == 3.5);
        CHECK(r.std_err == 0.0);
    }
    SECTION("clusters of size one reduce to mean_se") {
        const std::vector<double> xs{0.3, -1.2, 4.0, 2.2, 0.0};
        const auto a = vag::clustered_mean_se(xs);
        const auto b = vag::mean_se(xs);
        CHECK(a.mean == b.mean);
        CHECK(a.std_err == b.std_err);
    }
    SECTION("within-cluster correlation inflates the SE by the design effect") {
        // x_ij = sqrt(rho) u_i + sqrt(1 - rho) e_ij, unit variance, ICC rho.
        const double rho = 0.5;
        const std::size_t n_clusters = 20000, m = 10;
        const vag::NormalStream s(17);
        std::vector<double> pooled, means;
        pooled.reserve(n_clusters * m);
        for (std::uint32_t i = 0; i < n_clusters; ++i) {
            const double u = s.pair(i, 0, 0, vag::Lane::oracle).first;
            double sum = 0;
            for (std::uint32_t j = 0; j < m; j += 2) {
                const auto [e1, e2] = s.pair(i, 1, j, vag::Lane::oracle);
                for (double e : {e1, e2}) {
                    const double x = std::sqrt(rho) * u + std::sqrt(1 - rho) * e;
                    pooled.push_back(x);
                    sum += x;
                }
            }
            means.push_back(sum / m);
        }
        const auto naive = vag::mean_se(pooled);
        const auto clustered = vag::clustered_mean_se(means);
        CHECK(clustered.std_err > naive.std_err);
        const double design_effect = 1.0 + (m - 1.0) * rho;
        const double ratio_sq = std::pow(clustered.std_err / naive.std_err, 2);
        CHECK(ratio_sq == Approx(design_effect).epsilon(0.05));
    }
}

TEST_CASE("efficiency gain") {
    CHECK(vag::efficiency_gain(1.0, 1.0, 2.0, 1.0) == Approx(4.0));
    CHECK(vag::efficiency_gain(1.0, 2.0, 2.0, 1.0) == Approx(2.0));
}
