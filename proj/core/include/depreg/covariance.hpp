#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "depreg/partition_regression.hpp"

namespace depreg {

/// Where an autocovariance sequence came from.
enum class AcvSource { Fgn, Arma, Empirical };

/**
 * Autocovariances gamma(0), gamma(1), ..., gamma(max_lag) of a stationary
 * process. gamma(0) must be positive and |gamma(k)| <= gamma(0).
 */
class AutocovarianceSequence {
public:
    AutocovarianceSequence(std::vector<double> gamma, AcvSource source);

    double operator()(std::size_t lag) const { return gamma_.at(lag); }
    std::size_t max_lag() const noexcept { return gamma_.size() - 1; }
    std::span<const double> values() const noexcept { return gamma_; }
    AcvSource source() const noexcept { return source_; }

    /// Smallest eigenvalue of the k x k Toeplitz matrix, for k <= max_lag + 1.
    double toeplitz_min_eigenvalue(std::size_t k) const;

private:
    std::vector<double> gamma_;
    AcvSource source_;
};

/// (sigma2 / 2) (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}); throws InputError for
/// H outside (0, 1) or non-positive sigma2.
double fgn_autocovariance(double hurst, double sigma2, std::size_t lag);

AutocovarianceSequence fgn_acv(double hurst, double sigma2, std::size_t max_lag);

/// Error covariance of an n-vector: either a dense symmetric matrix or a
/// stationary autocovariance viewed as an implicit Toeplitz matrix.
class CovarianceModel {
public:
    static CovarianceModel dense(Eigen::MatrixXd sigma);
    static CovarianceModel toeplitz(AutocovarianceSequence acv, std::size_t n);
    static CovarianceModel identity(std::size_t n, double sigma2 = 1.0);

    std::size_t size() const noexcept { return n_; }
    bool is_toeplitz() const noexcept {
        return std::holds_alternative<AutocovarianceSequence>(storage_);
    }
    const AutocovarianceSequence* acv() const noexcept {
        return std::get_if<AutocovarianceSequence>(&storage_);
    }

    double entry(std::size_t i, std::size_t j) const;

    /// Sigma * x.
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

    /// Sigma[begin:begin+len, begin:begin+len] * x.
    Eigen::VectorXd apply_block(std::size_t begin, const Eigen::VectorXd& x) const;

    Eigen::MatrixXd to_dense() const;

private:
    CovarianceModel(std::variant<Eigen::MatrixXd, AutocovarianceSequence> storage,
                    std::size_t n);

    std::variant<Eigen::MatrixXd, AutocovarianceSequence> storage_;
    std::size_t n_;
};

/// Exact tr(P_{S_m} Sigma), accumulated cell by cell.
double trace_projection(const CovarianceModel& cov, const PartitionModel& model);

struct PowerIterationOptions {
    double tolerance = 1e-8;
    std::size_t max_iterations = 100000;
};

/// Largest eigenvalue of a symmetric PSD covariance by Krylov-accelerated
/// power iteration from two deterministic starts (all-ones and a fixed
/// non-symmetric vector). `max_iterations` bounds the number of products with
/// the matrix. Throws NumericalError (carrying the last Rayleigh quotient)
/// when the cap is hit.
double spectral_radius(const CovarianceModel& cov, PowerIterationOptions options = {});

/// Var(eps_1 + ... + eps_n) = n gamma(0) + 2 sum_{k<n} (n - k) gamma(k).
double partial_sum_variance(const AutocovarianceSequence& acv, std::size_t n);

}  // namespace depreg
