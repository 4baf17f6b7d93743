#pragma once

#include <cstddef>
#include <memory>
#include <variant>
#include <vector>

#include "depreg/covariance.hpp"
#include "depreg/partition_regression.hpp"

namespace depreg {

/// Probability weights pi_m over the model collection m = 1..m_max.
class ModelWeights {
public:
    explicit ModelWeights(std::vector<double> pi);

    /// Weight of model size m (1-based).
    double operator()(std::size_t m) const { return pi_.at(m - 1); }
    std::size_t size() const noexcept { return pi_.size(); }
    const std::vector<double>& values() const noexcept { return pi_; }

private:
    std::vector<double> pi_;
};

/// pi_m proportional to m^{-2}, normalized over 1..m_max.
ModelWeights default_weights(std::size_t m_max);

/**
 * (K/n) (sqrt(tr(P Sigma) + rho) + sqrt(rho) sqrt(2 log(1/pi_m)))^2, the
 * penalty under which the penalized estimator satisfies an oracle inequality.
 * `rho` is the spectral radius of `cov`; pass it when already known.
 */
double theoretical_penalty(const PartitionModel& model, double K, const CovarianceModel& cov,
                           const ModelWeights& weights);
double theoretical_penalty(const PartitionModel& model, double K, const CovarianceModel& cov,
                           double rho, const ModelWeights& weights);

/// K (rho/n) (sqrt(d_m) + sqrt(2 log(1/pi_m)))^2.
double rho_penalty(const PartitionModel& model, double K, double rho,
                   const ModelWeights& weights);

/**
 * Known m-dependence of a penalty, to be multiplied by a calibrated constant.
 *
 * With d = (degree + 1) m:
 *   dimension          d / n
 *   power(gamma)       (d / n)^gamma,                 gamma in (0, 2)
 *   power_log(gamma)   (d / n)^gamma + log(max(m,2))/n, gamma in (1, 2)
 *   trace_exact        theoretical_penalty for the given covariance
 */
class PenaltyShape {
public:
    struct Dimension {};
    struct Power {
        double gamma;
    };
    struct PowerLog {
        double gamma;
    };
    struct TraceExact {
        std::shared_ptr<const CovarianceModel> cov;
        double K;
        double rho;
        ModelWeights weights;
    };

    static PenaltyShape dimension(int degree = 0);
    static PenaltyShape power(double gamma, int degree = 0);
    static PenaltyShape power_log(double gamma, int degree = 0);
    /// The spectral radius is computed once here.
    static PenaltyShape trace_exact(CovarianceModel cov, double K, ModelWeights weights,
                                    int degree = 0);

    double value(std::size_t m, std::size_t n) const;

    /// Shape values for m = 1..m_max.
    std::vector<double> values(std::size_t m_max, std::size_t n) const;

    int degree() const noexcept { return degree_; }

private:
    using Variant = std::variant<Dimension, Power, PowerLog, TraceExact>;
    PenaltyShape(Variant shape, int degree);

    Variant shape_;
    int degree_;
};

/// Largest default m: floor(n / (5 (degree + 1))) capped at 200.
std::size_t default_m_max(std::size_t n, int degree);

}  // namespace depreg
