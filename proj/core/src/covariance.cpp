#include "depreg/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "depreg/errors.hpp"
#include "fft.hpp"

namespace depreg {

AutocovarianceSequence::AutocovarianceSequence(std::vector<double> gamma, AcvSource source)
    : gamma_(std::move(gamma)), source_(source) {
    if (gamma_.empty() || !(gamma_[0] > 0.0)) {
        throw InputError("autocovariance sequence needs gamma(0) > 0");
    }
    const double bound = gamma_[0] * (1.0 + 1e-12);
    for (std::size_t k = 1; k < gamma_.size(); ++k) {
        if (!std::isfinite(gamma_[k]) || std::abs(gamma_[k]) > bound) {
            throw InputError("autocovariance at lag " + std::to_string(k) +
                             " exceeds gamma(0) in magnitude");
        }
    }
}

double AutocovarianceSequence::toeplitz_min_eigenvalue(std::size_t k) const {
    if (k == 0 || k > gamma_.size()) {
        throw InputError("Toeplitz size " + std::to_string(k) + " exceeds available lags");
    }
    const auto size = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd t(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
        for (Eigen::Index j = 0; j < size; ++j) {
            t(i, j) = gamma_[static_cast<std::size_t>(std::abs(i - j))];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

double fgn_autocovariance(double hurst, double sigma2, std::size_t lag) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw InputError("Hurst exponent must lie in (0, 1), got " + std::to_string(hurst));
    }
    if (!(sigma2 > 0.0)) {
        throw InputError("FGN variance must be positive");
    }
    if (lag == 0) {
        return sigma2;
    }
    const double k = static_cast<double>(lag);
    const double two_h = 2.0 * hurst;
    return 0.5 * sigma2 *
           (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) + std::pow(k - 1.0, two_h));
}

AutocovarianceSequence fgn_acv(double hurst, double sigma2, std::size_t max_lag) {
    std::vector<double> gamma(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        gamma[k] = fgn_autocovariance(hurst, sigma2, k);
    }
    return AutocovarianceSequence(std::move(gamma), AcvSource::Fgn);
}

CovarianceModel::CovarianceModel(
    std::variant<Eigen::MatrixXd, AutocovarianceSequence> storage, std::size_t n)
    : storage_(std::move(storage)), n_(n) {}

CovarianceModel CovarianceModel::dense(Eigen::MatrixXd sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
        throw InputError("covariance matrix must be square and nonempty");
    }
    const double scale = sigma.cwiseAbs().maxCoeff();
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InputError("covariance matrix must be symmetric");
    }
    const auto n = static_cast<std::size_t>(sigma.rows());
    return CovarianceModel(std::move(sigma), n);
}

CovarianceModel CovarianceModel::toeplitz(AutocovarianceSequence acv, std::size_t n) {
    if (n == 0) {
        throw InputError("covariance dimension must be positive");
    }
    if (acv.max_lag() + 1 < n) {
        throw InputError("Toeplitz covariance of size " + std::to_string(n) +
                         " needs lags up to " + std::to_string(n - 1) + ", have " +
                         std::to_string(acv.max_lag()));
    }
    return CovarianceModel(std::move(acv), n);
}

CovarianceModel CovarianceModel::identity(std::size_t n, double sigma2) {
    std::vector<double> gamma(n, 0.0);
    gamma[0] = sigma2;
    return toeplitz(AutocovarianceSequence(std::move(gamma), AcvSource::Empirical), n);
}

double CovarianceModel::entry(std::size_t i, std::size_t j) const {
    if (const auto* acv = std::get_if<AutocovarianceSequence>(&storage_)) {
        return (*acv)(i > j ? i - j : j - i);
    }
    const auto& sigma = std::get<Eigen::MatrixXd>(storage_);
    return sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

Eigen::VectorXd CovarianceModel::apply_block(std::size_t begin,
                                             const Eigen::VectorXd& x) const {
    const Eigen::Index len = x.size();
    if (begin + static_cast<std::size_t>(len) > n_) {
        throw InputError("covariance block exceeds matrix size");
    }
    if (const auto* acv = std::get_if<AutocovarianceSequence>(&storage_)) {
        const std::span<const double> g = acv->values();
        Eigen::VectorXd y(len);
        for (Eigen::Index i = 0; i < len; ++i) {
            double sum = 0.0;
            for (Eigen::Index j = 0; j < len; ++j) {
                sum += g[static_cast<std::size_t>(std::abs(i - j))] * x(j);
            }
            y(i) = sum;
        }
        return y;
    }
    const auto& sigma = std::get<Eigen::MatrixXd>(storage_);
    const auto b = static_cast<Eigen::Index>(begin);
    return sigma.block(b, b, len, len) * x;
}

Eigen::VectorXd CovarianceModel::apply(const Eigen::VectorXd& x) const {
    if (static_cast<std::size_t>(x.size()) != n_) {
        throw InputError("vector length does not match covariance dimension");
    }
    return apply_block(0, x);
}

Eigen::MatrixXd CovarianceModel::to_dense() const {
    if (const auto* sigma = std::get_if<Eigen::MatrixXd>(&storage_)) {
        return *sigma;
    }
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    return out;
}

double partial_sum_variance(const AutocovarianceSequence& acv, std::size_t n) {
    if (n == 0) {
        return 0.0;
    }
    if (acv.max_lag() + 1 < n) {
        throw InputError("partial-sum variance over " + std::to_string(n) +
                         " terms needs lags up to " + std::to_string(n - 1));
    }
    const std::span<const double> g = acv.values();
    double cross = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        cross += static_cast<double>(n - k) * g[k];
    }
    return static_cast<double>(n) * g[0] + 2.0 * cross;
}

namespace {

// tr(Q^T Sigma_block Q) for the orthonormal local basis of one cell.
double block_trace(const CovarianceModel& cov, std::size_t begin, const LocalBasis& basis) {
    double trace = 0.0;
    for (Eigen::Index k = 0; k < basis.q.cols(); ++k) {
        const Eigen::VectorXd column = basis.q.col(k);
        trace += column.dot(cov.apply_block(begin, column));
    }
    return trace;
}

}  // namespace

double trace_projection(const CovarianceModel& cov, const PartitionModel& model) {
    if (cov.size() != model.n()) {
        throw InputError("covariance dimension " + std::to_string(cov.size()) +
                         " does not match model size " + std::to_string(model.n()));
    }
    const AutocovarianceSequence* acv = cov.acv();
    if (acv && model.degree() == 0) {
        // Projection onto cell indicators: each cell contributes the sum of its
        // covariance block divided by its length.
        std::map<std::size_t, double> by_length;
        double trace = 0.0;
        for (const Cell& cell : model.cells()) {
            auto [it, fresh] = by_length.try_emplace(cell.length(), 0.0);
            if (fresh) {
                it->second = partial_sum_variance(*acv, cell.length()) /
                             static_cast<double>(cell.length());
            }
            trace += it->second;
        }
        return trace;
    }

    std::map<std::size_t, LocalBasis> bases;
    std::map<std::size_t, double> by_length;
    double trace = 0.0;
    for (const Cell& cell : model.cells()) {
        auto basis_it = bases.find(cell.length());
        if (basis_it == bases.end()) {
            basis_it =
                bases.emplace(cell.length(), local_basis(cell.length(), model.degree())).first;
        }
        if (acv) {
            // Stationarity: equal-length cells have identical blocks.
            auto [it, fresh] = by_length.try_emplace(cell.length(), 0.0);
            if (fresh) {
                it->second = block_trace(cov, cell.begin, basis_it->second);
            }
            trace += it->second;
        } else {
            trace += block_trace(cov, cell.begin, basis_it->second);
        }
    }
    return trace;
}

namespace {

struct PowerRun {
    double value = 0.0;
    bool converged = false;
};

Eigen::VectorXd reseed_vector(Eigen::Index n, int attempt) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = std::cos(0.7548776662466927 * static_cast<double>((i + 1) * (attempt + 1)) + 0.3) +
               0.5 * std::sin(static_cast<double>(i) * 1.3247179572447460);
    }
    return v.normalized();
}

using Product = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Sigma * x, through a circulant embedding for large Toeplitz matrices.
Product product_for(const CovarianceModel& cov) {
    const std::size_t n = cov.size();
    const AutocovarianceSequence* acv = cov.acv();
    if (acv == nullptr || n < 128) {
        return [&cov](const Eigen::VectorXd& x) { return cov.apply(x); };
    }
    const std::size_t size = 2 * n;
    const std::span<const double> g = acv->values();
    std::vector<double> c(size, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        c[k] = g[k];
        if (k > 0) {
            c[size - k] = g[k];
        }
    }
    auto spectrum = std::make_shared<const std::vector<std::complex<double>>>(detail::real_dft(c));
    return [n, size, spectrum](const Eigen::VectorXd& x) {
        std::vector<double> padded(size, 0.0);
        std::copy(x.data(), x.data() + x.size(), padded.begin());
        std::vector<std::complex<double>> f = detail::real_dft(padded);
        for (std::size_t j = 0; j < f.size(); ++j) {
            f[j] *= (*spectrum)[j];
        }
        const std::vector<double> back = detail::inverse_real_dft(f, size);
        Eigen::VectorXd y(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            y(static_cast<Eigen::Index>(i)) = back[i] / static_cast<double>(size);
        }
        return y;
    };
}

PowerRun power_run(const Product& apply, Eigen::VectorXd v,
                   const PowerIterationOptions& options) {
    // Thick-restarted Lanczos with full reorthogonalisation. The basis keeps
    // the leading Ritz vectors across restarts, which matters when the top of
    // the spectrum is clustered. Every product with the covariance counts
    // against the iteration budget.
    const auto n = v.size();
    const Eigen::Index block = std::min<Eigen::Index>(n, 64);
    const Eigen::Index keep = std::max<Eigen::Index>(1, block / 2);
    Eigen::MatrixXd basis(n, block);
    Eigen::MatrixXd image(n, block);
    basis.col(0) = v.normalized();
    Eigen::Index filled = 0;
    std::size_t products = 0;
    double theta = 0.0;
    double scale = 0.0;
    while (true) {
        bool exhausted = false;
        Eigen::VectorXd pending;
        while (filled < block) {
            image.col(filled) = apply(basis.col(filled));
            ++products;
            scale = std::max(scale, image.col(filled).norm());
            ++filled;
            Eigen::VectorXd w = image.col(filled - 1);
            for (int pass = 0; pass < 2; ++pass) {
                w -= basis.leftCols(filled) * (basis.leftCols(filled).transpose() * w);
            }
            const double norm = w.norm();
            if (!(scale > 0.0) || norm <= 1e-13 * scale) {
                exhausted = true;
                break;
            }
            if (filled == block || products >= options.max_iterations) {
                pending = w / norm;
                break;
            }
            basis.col(filled) = w / norm;
        }
        const Eigen::MatrixXd projected = basis.leftCols(filled).transpose() * image.leftCols(filled);
        const Eigen::MatrixXd symmetric = 0.5 * (projected + projected.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(symmetric);
        theta = ritz.eigenvalues()(filled - 1);
        const Eigen::VectorXd s = ritz.eigenvectors().col(filled - 1);
        const double residual = (image.leftCols(filled) * s - theta * (basis.leftCols(filled) * s)).norm();
        if (exhausted || residual <= options.tolerance * std::abs(theta)) {
            return {theta, true};
        }
        if (products >= options.max_iterations) {
            return {theta, false};
        }
        const Eigen::Index kept = std::min(keep, filled - 1);
        const Eigen::MatrixXd top = ritz.eigenvectors().rightCols(kept);
        const Eigen::MatrixXd new_basis = basis.leftCols(filled) * top;
        const Eigen::MatrixXd new_image = image.leftCols(filled) * top;
        basis.leftCols(kept) = new_basis;
        image.leftCols(kept) = new_image;
        // Products of the kept vectors are already known.
        basis.col(kept) = pending;
        filled = kept;
    }
}

}  // namespace

double spectral_radius(const CovarianceModel& cov, PowerIterationOptions options) {
    const auto n = static_cast<Eigen::Index>(cov.size());
    // The all-ones start can be orthogonal to the top eigenvector (e.g.
    // skew-symmetric eigenvectors of Toeplitz matrices), so a second
    // deterministic start confirms the result.
    const Product apply = product_for(cov);
    const PowerRun first = power_run(apply, Eigen::VectorXd::Ones(n).normalized(), options);
    const PowerRun second = power_run(apply, reseed_vector(n, 7), options);
    if (!first.converged || !second.converged) {
        const double last = first.converged ? second.value : first.value;
        throw NumericalError("power iteration did not converge after " +
                             std::to_string(options.max_iterations) +
                             " iterations; last Rayleigh quotient " + std::to_string(last));
    }
    return std::max(first.value, second.value);
}

}  // namespace depreg
