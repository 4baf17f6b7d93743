#include <doctest.h>

#include <cmath>
#include <random>

#include "depreg/errors.hpp"
#include "depreg/penalties.hpp"
#include "support/oracles.hpp"

using namespace depreg;

TEST_CASE("shape values") {
    CHECK(PenaltyShape::dimension().value(10, 100) == doctest::Approx(0.1));
    CHECK(PenaltyShape::dimension(2).value(10, 100) == doctest::Approx(0.3));
    CHECK(PenaltyShape::power(0.6).value(10, 100) == doctest::Approx(std::pow(0.1, 0.6)));
    CHECK(PenaltyShape::power(0.6).value(10, 100) == doctest::Approx(0.25119).epsilon(1e-4));
    CHECK(PenaltyShape::power_log(1.6).value(10, 100) ==
          doctest::Approx(std::pow(0.1, 1.6) + std::log(10.0) / 100));
    CHECK(PenaltyShape::power_log(1.6).value(10, 100) == doctest::Approx(0.04814).epsilon(1e-3));
    CHECK(PenaltyShape::power_log(1.6).value(1, 100) ==
          doctest::Approx(std::pow(0.01, 1.6) + std::log(2.0) / 100));
}

TEST_CASE("shape domains") {
    CHECK_THROWS_AS(PenaltyShape::power(0.0), InputError);
    CHECK_THROWS_AS(PenaltyShape::power(2.0), InputError);
    CHECK_THROWS_AS(PenaltyShape::power_log(1.0), InputError);
    CHECK_THROWS_AS(PenaltyShape::power_log(2.5), InputError);
    CHECK_THROWS_AS(PenaltyShape::dimension(-1), InputError);
    CHECK_THROWS_AS(PenaltyShape::dimension().value(0, 10), InputError);
}

TEST_CASE("unit power shape equals the dimension shape") {
    const auto p = PenaltyShape::power(1.0);
    const auto d = PenaltyShape::dimension();
    for (std::size_t n : {10, 333, 2000}) {
        for (std::size_t m = 1; m <= n; m += 7) {
            CHECK(p.value(m, n) == doctest::Approx(d.value(m, n)).epsilon(1e-15));
        }
    }
}

TEST_CASE("shapes are positive and nondecreasing in m") {
    const std::size_t n = 1000;
    const std::vector<PenaltyShape> shapes{
        PenaltyShape::dimension(), PenaltyShape::dimension(1), PenaltyShape::power(0.3),
        PenaltyShape::power(1.7, 2), PenaltyShape::power_log(1.2), PenaltyShape::power_log(1.9),
        PenaltyShape::trace_exact(CovarianceModel::toeplitz(fgn_acv(0.7, 1.0, n - 1), n), 1.5,
                                  ModelWeights(std::vector<double>(100, 0.01)))};
    for (const auto& s : shapes) {
        const auto v = s.values(100, n);
        CHECK(v[0] > 0.0);
        for (std::size_t m = 1; m < v.size(); ++m) {
            CHECK(v[m] >= v[m - 1]);
        }
    }
}

TEST_CASE("default weights") {
    CHECK(default_weights(1).values() == std::vector<double>{1.0});
    const auto w2 = default_weights(2);
    CHECK(w2(1) == doctest::Approx(0.8));
    CHECK(w2(2) == doctest::Approx(0.2));
    const auto w3 = default_weights(3);
    CHECK(w3(1) == doctest::Approx(36.0 / 49));
    CHECK(w3(2) == doctest::Approx(9.0 / 49));
    CHECK(w3(3) == doctest::Approx(4.0 / 49));
    double total = 0.0;
    const ModelWeights w200 = default_weights(200);
    for (double p : w200.values()) {
        CHECK(p > 0.0);
        total += p;
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK_THROWS_AS(ModelWeights({0.5, 0.6}), InputError);
    CHECK_THROWS_AS(ModelWeights({1.0, 0.0}), InputError);
}

TEST_CASE("theoretical penalty with white noise") {
    const double n = 100;
    const auto cov = CovarianceModel::identity(100);
    CHECK(theoretical_penalty(PartitionModel(100, 1, 0), 2.0, cov, ModelWeights({1.0})) ==
          doctest::Approx(4.0 / n));
    const double expected = 0.02 * std::pow(std::sqrt(3.0) + std::sqrt(2 * std::log(5.0)), 2);
    CHECK(theoretical_penalty(PartitionModel(100, 2, 0), 2.0, cov, ModelWeights({0.8, 0.2})) ==
          doctest::Approx(expected));
    CHECK(expected == doctest::Approx(0.24870).epsilon(1e-4));
    CHECK_THROWS_AS(theoretical_penalty(PartitionModel(100, 2, 0), 1.0, cov, default_weights(2)),
                    InputError);
}

TEST_CASE("theoretical penalty matches an independent dense evaluation") {
    const std::size_t n = 500;
    const double K = 1.1;
    const Eigen::MatrixXd sigma = oracle::fgn_matrix(0.7, 1.0, n);
    const double rho = oracle::largest_eigenvalue(sigma);
    const double tr = (oracle::projection(oracle::design(n, 10, 0)) * sigma).trace();
    const auto weights = default_weights(100);
    double z = 0.0;
    for (int m = 1; m <= 100; ++m) {
        z += 1.0 / (m * m);
    }
    const double log_inv_pi = std::log(100.0 * z);
    const double root = std::sqrt(tr + rho) + std::sqrt(rho) * std::sqrt(2 * log_inv_pi);
    const double expected = K / static_cast<double>(n) * root * root;
    const auto cov = CovarianceModel::toeplitz(fgn_acv(0.7, 1.0, n - 1), n);
    CHECK(theoretical_penalty(PartitionModel(n, 10, 0), K, cov, weights) ==
          doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("theoretical penalty is linear in K") {
    const std::size_t n = 300;
    const auto cov = CovarianceModel::toeplitz(fgn_acv(0.3, 1.0, n - 1), n);
    const auto w = default_weights(30);
    const PartitionModel model(n, 12, 1);
    const double base = theoretical_penalty(model, 1.5, cov, w);
    double prev = 0.0;
    for (double K : {1.01, 1.5, 2.0, 7.5}) {
        const double v = theoretical_penalty(model, K, cov, w);
        CHECK(v == doctest::Approx(base * K / 1.5));
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("white-noise theoretical penalty lies between the dimension bounds") {
    const std::size_t n = 400;
    const std::size_t m_max = 50;
    const ModelWeights uniform(std::vector<double>(m_max, 1.0 / m_max));
    for (double sigma2 : {0.5, 1.0, 3.0}) {
        const auto cov = CovarianceModel::identity(n, sigma2);
        for (int r : {0, 1}) {
            for (std::size_t m = 1; m <= m_max; m += 3) {
                const PartitionModel model(n, m, r);
                const double K = 2.0;
                const double scaled = theoretical_penalty(model, K, cov, uniform) * n / K;
                const double d = static_cast<double>(model.dimension());
                CHECK(scaled >= sigma2 * d);
                CHECK(scaled <= sigma2 * std::pow(std::sqrt(d + 1) + std::sqrt(2 * std::log(m_max)), 2) *
                                    (1 + 1e-12));
            }
        }
    }
}

TEST_CASE("rho penalty") {
    CHECK(rho_penalty(PartitionModel(10, 1, 0), 2.0, 1.0, ModelWeights({1.0})) ==
          doctest::Approx(0.2));
    const ModelWeights w({0.25, 0.25, 0.25, 0.25});
    const double expected = 0.02 * std::pow(2.0 + std::sqrt(2 * std::log(4.0)), 2);
    CHECK(rho_penalty(PartitionModel(100, 4, 0), 2.0, 1.0, w) == doctest::Approx(expected));
    CHECK(expected == doctest::Approx(0.26868).epsilon(1e-4));
    CHECK_THROWS_AS(rho_penalty(PartitionModel(100, 4, 0), 2.0, 0.0, w), InputError);
}

TEST_CASE("rho penalty dominates the theoretical penalty when the trace is small") {
    std::mt19937_64 gen(17);
    std::normal_distribution<double> dist;
    const std::size_t n = 40;
    for (int rep = 0; rep < 10; ++rep) {
        Eigen::MatrixXd b(n, n / 2);
        for (Eigen::Index i = 0; i < b.size(); ++i) {
            b.data()[i] = dist(gen);
        }
        const auto cov = CovarianceModel::dense(b * b.transpose());
        const double rho = spectral_radius(cov);
        const auto w = default_weights(10);
        for (int r : {0, 1}) {
            for (std::size_t m = 1; m <= 10; ++m) {
                const PartitionModel model(n, m, r);
                const double tr = trace_projection(cov, model);
                if (tr <= (static_cast<double>(model.dimension()) - 1) * rho) {
                    CHECK(rho_penalty(model, 1.3, rho, w) >=
                          theoretical_penalty(model, 1.3, cov, rho, w) * (1 - 1e-12));
                }
            }
        }
    }
}

TEST_CASE("default model collection size") {
    CHECK(default_m_max(2000, 0) == 200);
    CHECK(default_m_max(663, 0) == 132);
    CHECK(default_m_max(2000, 1) == 200);
    CHECK(default_m_max(1000, 1) == 100);
    CHECK(default_m_max(3, 0) == 1);
}
