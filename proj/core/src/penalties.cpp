#include "depreg/penalties.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "depreg/errors.hpp"

namespace depreg {

ModelWeights::ModelWeights(std::vector<double> pi) : pi_(std::move(pi)) {
    if (pi_.empty()) {
        throw InputError("model weights must cover at least one model");
    }
    double total = 0.0;
    for (double p : pi_) {
        if (!(p > 0.0)) {
            throw InputError("model weights must be positive");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InputError("model weights must sum to one, got " + std::to_string(total));
    }
}

ModelWeights default_weights(std::size_t m_max) {
    if (m_max < 1) {
        throw InputError("default weights need m_max >= 1");
    }
    std::vector<double> pi(m_max);
    double total = 0.0;
    for (std::size_t m = 1; m <= m_max; ++m) {
        const double md = static_cast<double>(m);
        pi[m - 1] = 1.0 / (md * md);
        total += pi[m - 1];
    }
    for (double& p : pi) {
        p /= total;
    }
    return ModelWeights(std::move(pi));
}

namespace {

void check_K(double K) {
    if (!(K > 1.0)) {
        throw InputError("penalty constant K must exceed 1");
    }
}

double log_inverse_weight(const PartitionModel& model, const ModelWeights& weights) {
    if (model.m() > weights.size()) {
        throw InputError("no weight for model m = " + std::to_string(model.m()));
    }
    return std::log(1.0 / weights(model.m()));
}

}  // namespace

double theoretical_penalty(const PartitionModel& model, double K, const CovarianceModel& cov,
                           double rho, const ModelWeights& weights) {
    check_K(K);
    const double trace = trace_projection(cov, model);
    const double root = std::sqrt(trace + rho) +
                        std::sqrt(rho) * std::sqrt(2.0 * log_inverse_weight(model, weights));
    return K / static_cast<double>(model.n()) * root * root;
}

double theoretical_penalty(const PartitionModel& model, double K, const CovarianceModel& cov,
                           const ModelWeights& weights) {
    return theoretical_penalty(model, K, cov, spectral_radius(cov), weights);
}

double rho_penalty(const PartitionModel& model, double K, double rho,
                   const ModelWeights& weights) {
    check_K(K);
    if (!(rho > 0.0)) {
        throw InputError("spectral radius must be positive");
    }
    const double root = std::sqrt(static_cast<double>(model.dimension())) +
                        std::sqrt(2.0 * log_inverse_weight(model, weights));
    return K * rho / static_cast<double>(model.n()) * root * root;
}

PenaltyShape::PenaltyShape(Variant shape, int degree) : shape_(std::move(shape)), degree_(degree) {
    if (degree < 0) {
        throw InputError("polynomial degree must be nonnegative");
    }
}

PenaltyShape PenaltyShape::dimension(int degree) { return {Dimension{}, degree}; }

PenaltyShape PenaltyShape::power(double gamma, int degree) {
    if (!(gamma > 0.0 && gamma < 2.0)) {
        throw InputError("power shape exponent must lie in (0, 2), got " + std::to_string(gamma));
    }
    return {Power{gamma}, degree};
}

PenaltyShape PenaltyShape::power_log(double gamma, int degree) {
    if (!(gamma > 1.0 && gamma < 2.0)) {
        throw InputError("power+log shape exponent must lie in (1, 2), got " +
                         std::to_string(gamma));
    }
    return {PowerLog{gamma}, degree};
}

PenaltyShape PenaltyShape::trace_exact(CovarianceModel cov, double K, ModelWeights weights,
                                       int degree) {
    check_K(K);
    const double rho = spectral_radius(cov);
    return {TraceExact{std::make_shared<const CovarianceModel>(std::move(cov)), K, rho,
                       std::move(weights)},
            degree};
}

double PenaltyShape::value(std::size_t m, std::size_t n) const {
    if (m < 1 || m > n) {
        throw InputError("shape evaluated at invalid m = " + std::to_string(m));
    }
    const double ratio =
        static_cast<double>(static_cast<std::size_t>(degree_ + 1) * m) / static_cast<double>(n);
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Dimension>) {
                return ratio;
            } else if constexpr (std::is_same_v<S, Power>) {
                return std::pow(ratio, s.gamma);
            } else if constexpr (std::is_same_v<S, PowerLog>) {
                const double log_term =
                    std::log(static_cast<double>(std::max<std::size_t>(m, 2)));
                return std::pow(ratio, s.gamma) + log_term / static_cast<double>(n);
            } else {
                const PartitionModel model(n, m, degree_);
                return theoretical_penalty(model, s.K, *s.cov, s.rho, s.weights);
            }
        },
        shape_);
}

std::vector<double> PenaltyShape::values(std::size_t m_max, std::size_t n) const {
    std::vector<double> out(m_max);
    for (std::size_t m = 1; m <= m_max; ++m) {
        out[m - 1] = value(m, n);
    }
    return out;
}

std::size_t default_m_max(std::size_t n, int degree) {
    const std::size_t by_size = n / (5 * static_cast<std::size_t>(degree + 1));
    return std::clamp<std::size_t>(by_size, 1, 200);
}

}  // namespace depreg
