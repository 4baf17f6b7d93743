#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "depreg/covariance.hpp"
#include "depreg/errors.hpp"
#include "depreg/hurst.hpp"
#include "depreg/processes.hpp"
#include "depreg/rng.hpp"
#include "support/oracles.hpp"

using namespace depreg;

namespace {

struct Moments {
    double mean = 0.0;
    double se = 0.0;
};

Moments moments(std::span<const double> v) {
    const double m = oracle::mean(v);
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    const double n = static_cast<double>(v.size());
    return {m, std::sqrt(ss / (n - 1) / n)};
}

double sample_variance(std::span<const double> v) {
    const double m = oracle::mean(v);
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    return ss / static_cast<double>(v.size() - 1);
}

/// Unbiased lag-k autocovariance with known zero mean.
double acov_unbiased(std::span<const double> x, std::size_t k) {
    double s = 0.0;
    for (std::size_t t = 0; t + k < x.size(); ++t) {
        s += x[t] * x[t + k];
    }
    return s / static_cast<double>(x.size() - k);
}

}  // namespace

TEST_CASE("splitmix64 and seed derivation") {
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
    const Seed base(42);
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        seen.insert(base.derive(i).value());
    }
    CHECK(seen.size() == 1000);
    CHECK(base.derive(3) == Seed(42).derive(3));
    CHECK(Seed(1).derive(0) != Seed(2).derive(0));
}

TEST_CASE("uniform and normal variates") {
    Rng rng(Seed(5));
    std::vector<double> u(200000);
    std::vector<double> z(200000);
    for (double& v : u) {
        v = rng.uniform();
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
    }
    for (double& v : z) {
        v = rng.normal();
    }
    CHECK(std::abs(oracle::mean(u) - 0.5) < 0.003);
    CHECK(std::abs(sample_variance(u) - 1.0 / 12) < 0.001);
    CHECK(std::abs(oracle::mean(z)) < 0.01);
    CHECK(std::abs(sample_variance(z) - 1.0) < 0.01);
    double fourth = 0.0;
    for (double v : z) {
        fourth += v * v * v * v;
    }
    CHECK(std::abs(fourth / z.size() - 3.0) < 0.05);
    Rng a(Seed(9));
    Rng b(Seed(9));
    for (int k = 0; k < 100; ++k) {
        CHECK(a.normal() == b.normal());
    }
}

TEST_CASE("process validation") {
    CHECK_THROWS_AS(validate(Fgn{0.0, 1.0}), InputError);
    CHECK_THROWS_AS(validate(Fgn{0.5, -1.0}), InputError);
    CHECK_THROWS_AS(validate(DmrChain{0.0}), InputError);
    CHECK_THROWS_AS(validate(WhiteNoise{-1.0}), InputError);
    CHECK_NOTHROW(validate(Arma21{}));
    CHECK(describe(Fgn{0.7, 1.0}) == "fgn(H=0.7,sigma2=1)");
}

TEST_CASE("arma(2,1) moments") {
    const auto x = simulate_arma21(100000, Seed(3));
    const auto gamma = oracle::arma21_acv(1);
    CHECK(std::abs(oracle::mean(x)) < 0.02);
    CHECK(sample_variance(x) == doctest::Approx(gamma[0]).epsilon(0.03));

    std::vector<double> rho1;
    for (std::uint64_t r = 0; r < 100; ++r) {
        rho1.push_back(sample_acf(simulate_arma21(2000, Seed(100 + r)), 1)[1]);
    }
    const Moments m = moments(rho1);
    CHECK(std::abs(m.mean - gamma[1] / gamma[0]) <= 3 * m.se);
}

TEST_CASE("fgn with H = 1/2 is white noise") {
    const std::size_t n = 20000;
    const auto x = simulate_fgn(n, 0.5, 2.0, Seed(8));
    for (std::size_t k = 1; k <= 5; ++k) {
        CHECK(std::abs(oracle::acov_zero_mean(x, k)) <= 3.0 / std::sqrt(double(n)) * 2.0);
    }
}

TEST_CASE("fgn sample autocovariances match the closed form") {
    for (double h : {0.2, 0.7}) {
        std::array<std::vector<double>, 6> lags;
        for (std::uint64_t r = 0; r < 200; ++r) {
            const auto x = simulate_fgn(2000, h, 1.0, Seed(7000 + r));
            for (std::size_t k = 0; k < 6; ++k) {
                lags[k].push_back(acov_unbiased(x, k));
            }
        }
        for (std::size_t k = 0; k < 6; ++k) {
            const Moments m = moments(lags[k]);
            CHECK(std::abs(m.mean - fgn_autocovariance(h, 1.0, k)) <= 3 * m.se);
        }
    }
}

TEST_CASE("fgn partial sums follow n^{2H}") {
    for (double h : {0.2, 0.7}) {
        const std::vector<double> sizes{64, 256, 1024};
        std::vector<double> vars;
        for (double size : sizes) {
            std::vector<double> sums;
            for (std::uint64_t r = 0; r < 500; ++r) {
                const auto x = simulate_fgn(static_cast<std::size_t>(size), h, 1.0, Seed(r * 31 + 1));
                double s = 0.0;
                for (double v : x) {
                    s += v;
                }
                sums.push_back(s);
            }
            double ss = 0.0;
            for (double s : sums) {
                ss += s * s;
            }
            vars.push_back(ss / sums.size());
        }
        CHECK(std::abs(oracle::loglog_slope(sizes, vars) - 2 * h) <= 0.1);
    }
}

TEST_CASE("circulant embedding reproduces the target covariance matrix") {
    const std::size_t n = 64;
    const int reps = 10000;
    const double h = 0.75;
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < reps; ++r) {
        const auto x = simulate_fgn(n, h, 1.0, Seed(90000 + static_cast<std::uint64_t>(r)));
        const Eigen::Map<const Eigen::VectorXd> v(x.data(), n);
        const Eigen::MatrixXd outer = v * v.transpose();
        sum += outer;
        sum_sq += outer.cwiseProduct(outer);
    }
    const Eigen::MatrixXd target = oracle::fgn_matrix(h, 1.0, n);
    int outside = 0;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double mean = sum(i, j) / reps;
            const double se = std::sqrt((sum_sq(i, j) / reps - mean * mean) / reps);
            outside += std::abs(mean - target(i, j)) > 4 * se;
        }
    }
    CHECK(outside == 0);
}

TEST_CASE("circulant embedding succeeds for fgn and falls back otherwise") {
    for (double h : {0.05, 0.3, 0.5, 0.8, 0.97}) {
        const auto sim = simulate_stationary_gaussian(fgn_acv(h, 1.0, 999), 1000, Seed(1));
        CHECK(sim.method == GaussianSynthesis::CirculantEmbedding);
        CHECK(sim.values.size() == 1000);
    }
    // Positive definite Toeplitz matrix whose minimal circulant embedding has a
    // negative eigenvalue 1 - 2(0.6) + 0.1.
    const AutocovarianceSequence acv({1.0, 0.6, 0.1}, AcvSource::Empirical);
    CHECK(acv.toeplitz_min_eigenvalue(3) > 0.0);
    const auto sim = simulate_stationary_gaussian(acv, 3, Seed(4));
    CHECK(sim.method == GaussianSynthesis::Cholesky);

    std::array<std::vector<double>, 3> products;
    for (std::uint64_t r = 0; r < 20000; ++r) {
        const auto x = simulate_stationary_gaussian(acv, 3, Seed(r)).values;
        products[0].push_back(x[0] * x[0]);
        products[1].push_back(x[0] * x[1]);
        products[2].push_back(x[0] * x[2]);
    }
    for (std::size_t k = 0; k < 3; ++k) {
        const Moments m = moments(products[k]);
        CHECK(std::abs(m.mean - acv(k)) <= 4 * m.se);
    }

    GaussianSimOptions tight;
    tight.dense_cap = 2;
    CHECK_THROWS_AS(simulate_stationary_gaussian(acv, 3, Seed(4), tight), InputError);
    CHECK_THROWS_AS(simulate_stationary_gaussian(acv, 4, Seed(4)), InputError);
}

TEST_CASE("dmr chain marginal is uniform on [-1/2, 1/2]") {
    for (double a : {0.5, 2.0, 8.0}) {
        const auto x = simulate_dmr_chain(100000, a, Seed(11));
        for (double v : x) {
            REQUIRE(v >= -0.5);
            REQUIRE(v <= 0.5);
        }
        if (a >= 2.0) {
            CHECK(std::abs(oracle::mean(x)) < 0.005);
            CHECK(std::abs(sample_variance(x) - 1.0 / 12) < 0.005);
        }
    }
    // With a = 0.5 the chain mixes too slowly for one path; average paths instead.
    std::vector<double> means;
    for (std::uint64_t r = 0; r < 200; ++r) {
        means.push_back(oracle::mean(simulate_dmr_chain(2000, 0.5, Seed(r))));
    }
    const Moments m = moments(means);
    CHECK(std::abs(m.mean) <= 3 * m.se);
}

TEST_CASE("dmr chain lag-one correlation") {
    // Under the stationary law, with a density a x^{a-1} for Z and (1+a) x^a
    // for fresh draws:
    // E[Z0^a Z1^a] = E[Z^{2a}] - E[Z^{2a+1}] + E[Z^{a+1}] E_fresh[Z^a].
    const double a = 8.0;
    const double cross = 1.0 / 3 - a / (3 * a + 1) + (a / (2 * a + 1)) * ((1 + a) / (2 * a + 1));
    const double rho1 = (cross - 0.25) * 12.0;
    std::vector<double> values;
    for (std::uint64_t r = 0; r < 20; ++r) {
        const auto x = simulate_dmr_chain(50000, a, Seed(400 + r));
        values.push_back(oracle::acov_zero_mean(x, 1) * 12.0);
    }
    const Moments m = moments(values);
    CHECK(std::abs(m.mean - rho1) <= 3 * m.se);
}

TEST_CASE("dmr chain with small a has long memory") {
    const double a = 0.5;
    std::vector<double> sizes;
    for (int p = 8; p <= 13; ++p) {
        sizes.push_back(std::ldexp(1.0, p));
    }
    std::vector<double> sum_sq(sizes.size(), 0.0);
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
        const auto x = simulate_dmr_chain(8192, a, Seed(static_cast<std::uint64_t>(r) + 77));
        double s = 0.0;
        std::size_t next = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += x[i];
            if (i + 1 == static_cast<std::size_t>(sizes[next])) {
                sum_sq[next] += s * s;
                ++next;
            }
        }
    }
    for (double& v : sum_sq) {
        v /= reps;
    }
    CHECK(oracle::loglog_slope(sizes, sum_sq) > 1.0);
}

TEST_CASE("dmr chain holds with probability 1 - Z") {
    const double a = 2.0;
    const auto x = simulate_dmr_chain(1000000, a, Seed(21));
    std::array<double, 10> holds{};
    std::array<double, 10> counts{};
    std::array<double, 10> expected{};
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double z = std::pow(x[i - 1] + 0.5, 1.0 / a);
        const auto bin = std::min<std::size_t>(static_cast<std::size_t>(z * 10), 9);
        counts[bin] += 1;
        expected[bin] += 1 - z;
        holds[bin] += x[i] == x[i - 1];
    }
    for (std::size_t b = 0; b < 10; ++b) {
        if (counts[b] < 1000) {
            continue;
        }
        const double p = expected[b] / counts[b];
        const double se = std::sqrt(p * (1 - p) / counts[b]);
        CHECK(std::abs(holds[b] / counts[b] - p) <= 4 * se);
    }
}

TEST_CASE("target signal") {
    CHECK(target_signal(0.0) == 3.0);
    CHECK(target_signal(1.0) == doctest::Approx(2.4 + std::sin(8.0)));
    CHECK(target_signal(1.0) == doctest::Approx(3.38935).epsilon(1e-5));
    CHECK(target_signal(0.5) == doctest::Approx(2.19320).epsilon(1e-5));
    const auto grid = signal_grid(4);
    CHECK(grid[0] == target_signal(0.25));
    CHECK(grid[3] == target_signal(1.0));
}

TEST_CASE("observations are signal plus noise") {
    const auto clean = generate_observations(500, WhiteNoise{0.0}, Seed(1));
    CHECK(clean == signal_grid(500));
    for (const ProcessSpec& spec :
         {ProcessSpec{Arma21{}}, ProcessSpec{Fgn{0.7, 1.0}}, ProcessSpec{DmrChain{8.0}},
          ProcessSpec{WhiteNoise{1.0}}}) {
        CHECK(generate_observations(300, spec, Seed(12)) == generate_observations(300, spec, Seed(12)));
        CHECK(generate_observations(300, spec, Seed(12)) != generate_observations(300, spec, Seed(13)));
    }
    const std::size_t n = 100000;
    const auto y = generate_observations(n, Arma21{}, Seed(5));
    const auto f = signal_grid(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += y[i] - f[i];
    }
    CHECK(std::abs(s / n) < 0.02);
}
