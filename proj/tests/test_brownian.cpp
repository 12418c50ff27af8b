#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "irrsde/brownian.hpp"

namespace irrsde {
namespace {

TEST(PhiloxTest, KnownAnswerVectors) {
    // Random123 kat_vectors, philox4x64 with 10 rounds
    EXPECT_EQ(Philox4x64::apply({0, 0, 0, 0}, {0, 0}),
              (Philox4x64::Counter{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL,
                                   0x7e68b68aec7ba23bULL}));
    constexpr auto ones = ~std::uint64_t{0};
    EXPECT_EQ(Philox4x64::apply({ones, ones, ones, ones}, {ones, ones}),
              (Philox4x64::Counter{0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL, 0x9cc7d7c69cd777b6ULL,
                                   0xa09caebf594f0ba0ULL}));
    EXPECT_EQ(Philox4x64::apply({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL,
                                 0x082efa98ec4e6c89ULL},
                                {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL}),
              (Philox4x64::Counter{0xa528f45403e61d95ULL, 0x38c72dbd566e9788ULL, 0xa5a1610e72fd18b5ULL,
                                   0x57bd43b5e52b7fe6ULL}));
}

TEST(UniformTest, OpenInterval) {
    EXPECT_GT(bits_to_open_unit(0), 0.0);
    EXPECT_LT(bits_to_open_unit(~std::uint64_t{0}), 1.0);
}

TEST(InverseNormalTest, AccurateAgainstErfc) {
    // one Newton correction against Phi(x) = erfc(-x / sqrt 2) / 2 measures the error in x
    for (double u : {1e-12, 1e-9, 1e-6, 1e-3, 0.01, 0.1, 0.25, 0.5, 0.6, 0.9, 0.999, 1.0 - 1e-6, 1.0 - 1e-10}) {
        const double x = inverse_normal_cdf(u);
        const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
        const double cdf = 0.5 * std::erfc(-x / std::sqrt(2.0));
        EXPECT_LE(std::abs((cdf - u) / phi), 1e-9) << "u = " << u;
    }
    EXPECT_EQ(inverse_normal_cdf(0.5), 0.0);
    EXPECT_THROW(inverse_normal_cdf(0.0), std::domain_error);
    EXPECT_THROW(inverse_normal_cdf(1.0), std::domain_error);
}

TEST(IncrementsTest, Deterministic) {
    const PathKey key{42, 7};
    const auto a = generate_increments(key, 6, 3, 2.0);
    const auto b = generate_increments(key, 6, 3, 2.0);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.steps(), 192u);
    EXPECT_DOUBLE_EQ(a.step_size(), 2.0 / 192.0);
    const auto c = generate_increments({42, 8}, 6, 3, 2.0);
    EXPECT_NE(a.values, c.values);
}

TEST(IncrementsTest, RandomAccessMatchesStream) {
    const PathKey key{9, 1234};
    const auto a = generate_increments(key, 5, 1, 1.0);
    for (std::size_t j : {0u, 1u, 3u, 4u, 17u, 31u}) EXPECT_EQ(increment_at(key, j, a.step_size()), a.values[j]);
}

TEST(IncrementsTest, MeanAndVarianceMatchScaling) {
    const double T = 1.0;
    const std::size_t N = 1u << 10;
    std::vector<double> all;
    all.reserve(1000000);
    for (std::uint64_t path = 0; all.size() < 1000000; ++path) {
        const auto incr = generate_increments({2024, path}, 10, 1, T);
        for (double v : incr.values) {
            if (all.size() < 1000000) all.push_back(v);
        }
    }
    const double n = static_cast<double>(all.size());
    const double mean = std::accumulate(all.begin(), all.end(), 0.0) / n;
    double var = 0.0;
    for (double v : all) var += (v - mean) * (v - mean);
    var /= (n - 1.0);
    const double h = T / static_cast<double>(N);
    EXPECT_LE(std::abs(mean), 4.0 * std::sqrt(h / n));
    EXPECT_NEAR(var / h, 1.0, 0.01);
}

TEST(IncrementsTest, KolmogorovSmirnovAgainstStandardNormal) {
    std::vector<double> z;
    const std::size_t n = 100000;
    for (std::uint64_t path = 0; z.size() < n; ++path) {
        const auto incr = generate_increments({77, path}, 10, 1, 1.0);
        for (double v : incr.values) {
            if (z.size() < n) z.push_back(v / std::sqrt(incr.step_size()));
        }
    }
    std::sort(z.begin(), z.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = 0.5 * std::erfc(-z[i] / std::sqrt(2.0));
        ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / n), std::abs(cdf - static_cast<double>(i + 1) / n)});
    }
    EXPECT_LE(ks, 1.95 / std::sqrt(static_cast<double>(n)));
}

TEST(IncrementsTest, AdjacentPathsUncorrelated) {
    for (std::uint64_t i : {0u, 1u, 500u}) {
        const auto a = generate_increments({5, i}, 0, 10000, 1.0);
        const auto b = generate_increments({5, i + 1}, 0, 10000, 1.0);
        double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
        const double n = static_cast<double>(a.steps());
        for (std::size_t j = 0; j < a.steps(); ++j) {
            sa += a.values[j];
            sb += b.values[j];
        }
        sa /= n;
        sb /= n;
        for (std::size_t j = 0; j < a.steps(); ++j) {
            sab += (a.values[j] - sa) * (b.values[j] - sb);
            saa += (a.values[j] - sa) * (a.values[j] - sa);
            sbb += (b.values[j] - sb) * (b.values[j] - sb);
        }
        EXPECT_LE(std::abs(sab / std::sqrt(saa * sbb)), 0.05);
    }
}

TEST(IncrementsTest, CapacityAndArgumentErrors) {
    EXPECT_THROW(generate_increments({}, 31, 2, 1.0), std::length_error);
    EXPECT_THROW(generate_increments({}, 32, 1, 1.0), std::length_error);
    EXPECT_THROW(generate_increments({}, 3, 0, 1.0), std::invalid_argument);
    EXPECT_THROW(generate_increments({}, 3, 1, 0.0), std::invalid_argument);
}

IncrementArray make_array(std::vector<double> v, unsigned level) {
    IncrementArray a;
    a.level = level;
    a.values = std::move(v);
    return a;
}

TEST(CoarsenTest, Definition) {
    const auto a = make_array({1.0, 2.0, 3.0, 4.0}, 2);
    EXPECT_EQ(coarsen(a, 2).values, (std::vector<double>{3.0, 7.0}));
    EXPECT_EQ(coarsen(a, 2).level, 1u);
    EXPECT_EQ(coarsen(a, 1).values, a.values);
    EXPECT_EQ(coarsen(a, 4).values, (std::vector<double>{10.0}));
}

TEST(CoarsenTest, ShapeErrors) {
    const auto a = make_array({1.0, 2.0, 3.0, 4.0, 5.0, 6.0}, 0);
    EXPECT_THROW(coarsen(a, 4), std::invalid_argument);
    EXPECT_THROW(coarsen(a, 3), std::invalid_argument);
    EXPECT_THROW(coarsen(a, 0), std::invalid_argument);
}

TEST(CoarsenTest, RepeatedHalvingIsBitwiseComposable) {
    const auto fine = generate_increments({3, 3}, 8, 1, 1.0);
    EXPECT_EQ(coarsen(coarsen(fine, 2), 2).values, coarsen(fine, 4).values);
    EXPECT_EQ(coarsen(coarsen(fine, 4), 8).values, coarsen(fine, 32).values);
    const auto h = coarsening_hierarchy(fine, 3);
    ASSERT_EQ(h.size(), 6u);
    for (std::size_t i = 0; i < h.size(); ++i) {
        EXPECT_EQ(h[i].values, coarsen(fine, std::size_t{1} << i).values);
        EXPECT_EQ(h[i].level, 8u - i);
    }
}

TEST(CoarsenTest, TelescopingTerminalValue) {
    const auto fine = generate_increments({11, 0}, 12, 1, 1.0);
    const double w_T = std::accumulate(fine.values.begin(), fine.values.end(), 0.0);
    for (std::size_t f : {2u, 16u, 256u, 4096u}) {
        const auto c = coarsen(fine, f);
        const double s = std::accumulate(c.values.begin(), c.values.end(), 0.0);
        EXPECT_NEAR(s, w_T, 1e-12 * std::max(1.0, std::abs(w_T)));
    }
}

}  // namespace
}  // namespace irrsde
