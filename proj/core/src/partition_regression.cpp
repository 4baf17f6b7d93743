#include "depreg/partition_regression.hpp"

#include <cmath>
#include <map>
#include <string>

#include "depreg/errors.hpp"

namespace depreg {

std::vector<Cell> cell_bounds(std::size_t n, std::size_t m) {
    if (m < 1 || m > n) {
        throw InputError("invalid partition: m = " + std::to_string(m) +
                         " must lie in [1, " + std::to_string(n) + "]");
    }
    std::vector<Cell> cells;
    cells.reserve(m);
    // Cell j (1-based) ends at floor(j * n / m); products fit easily in 64 bits
    // for any realistic n.
    std::size_t begin = 0;
    for (std::size_t j = 1; j <= m; ++j) {
        const std::size_t end = (j * n) / m;
        cells.push_back({begin, end});
        begin = end;
    }
    return cells;
}

std::size_t PartitionModel::max_cells(std::size_t n, int degree) {
    return n / static_cast<std::size_t>(degree + 1);
}

PartitionModel::PartitionModel(std::size_t n, std::size_t m, int degree)
    : n_(n), m_(m), degree_(degree) {
    if (degree < 0) {
        throw InputError("polynomial degree must be nonnegative");
    }
    cells_ = cell_bounds(n, m);
    const auto need = static_cast<std::size_t>(degree) + 1;
    for (std::size_t j = 0; j < cells_.size(); ++j) {
        if (cells_[j].length() < need) {
            throw InputError("invalid partition: cell " + std::to_string(j + 1) +
                             " of m = " + std::to_string(m) + " has " +
                             std::to_string(cells_[j].length()) +
                             " points, degree " + std::to_string(degree) +
                             " needs " + std::to_string(need));
        }
    }
}

LocalBasis local_basis(std::size_t length, int degree) {
    const auto p = static_cast<Eigen::Index>(degree + 1);
    const auto len = static_cast<Eigen::Index>(length);
    if (len < p) {
        throw NumericalError("local design of length " + std::to_string(length) +
                             " cannot carry degree " + std::to_string(degree));
    }
    // Abscissae rescaled to (0, 1] keep the Vandermonde columns comparable.
    Eigen::MatrixXd v(len, p);
    for (Eigen::Index t = 0; t < len; ++t) {
        const double u = static_cast<double>(t + 1) / static_cast<double>(len);
        double power = 1.0;
        for (Eigen::Index k = 0; k < p; ++k) {
            v(t, k) = power;
            power *= u;
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
    LocalBasis basis;
    basis.length = length;
    basis.degree = degree;
    basis.q = qr.householderQ() * Eigen::MatrixXd::Identity(len, p);
    basis.r_factor = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();

    const Eigen::VectorXd diag = basis.r_factor.diagonal().cwiseAbs();
    if (diag.minCoeff() <= 1e-12 * diag.maxCoeff()) {
        throw NumericalError("rank-deficient local design (length " +
                             std::to_string(length) + ", degree " +
                             std::to_string(degree) + ")");
    }
    return basis;
}

namespace {

// Cells of a regular partition take at most two distinct lengths, so the
// local bases are shared.
class BasisCache {
public:
    explicit BasisCache(int degree) : degree_(degree) {}

    const LocalBasis& get(std::size_t length) {
        auto it = cache_.find(length);
        if (it == cache_.end()) {
            it = cache_.emplace(length, local_basis(length, degree_)).first;
        }
        return it->second;
    }

private:
    int degree_;
    std::map<std::size_t, LocalBasis> cache_;
};

void check_length(std::span<const double> y, std::size_t n) {
    if (y.size() != n) {
        throw InputError("series length " + std::to_string(y.size()) +
                         " does not match model size " + std::to_string(n));
    }
}

// Writes the projection of y onto the model into `fitted`.
void project_into(std::span<const double> y, const PartitionModel& model,
                  BasisCache& cache, std::vector<double>& fitted,
                  std::vector<Eigen::VectorXd>* coefficients) {
    fitted.assign(y.size(), 0.0);
    if (coefficients) {
        coefficients->clear();
        coefficients->reserve(model.m());
    }
    for (std::size_t j = 0; j < model.cells().size(); ++j) {
        const Cell& cell = model.cells()[j];
        const LocalBasis* basis = nullptr;
        try {
            basis = &cache.get(cell.length());
        } catch (const NumericalError& e) {
            throw NumericalError("cell " + std::to_string(j + 1) + ": " + e.what());
        }
        const auto len = static_cast<Eigen::Index>(cell.length());
        Eigen::Map<const Eigen::VectorXd> block(y.data() + cell.begin, len);
        const Eigen::VectorXd scores = basis->q.transpose() * block;
        Eigen::Map<Eigen::VectorXd>(fitted.data() + cell.begin, len) = basis->q * scores;

        if (coefficients) {
            Eigen::VectorXd c =
                basis->r_factor.triangularView<Eigen::Upper>().solve(scores);
            // Undo the abscissa rescaling u = t / length.
            double scale = 1.0;
            for (Eigen::Index k = 0; k < c.size(); ++k) {
                c(k) /= scale;
                scale *= static_cast<double>(len);
            }
            coefficients->push_back(std::move(c));
        }
    }
}

}  // namespace

double PiecewiseFit::evaluate(std::size_t cell, double t) const {
    const Eigen::VectorXd& c = coefficients.at(cell);
    double value = 0.0;
    for (Eigen::Index k = c.size() - 1; k >= 0; --k) {
        value = value * t + c(k);
    }
    return value;
}

PiecewiseFit fit_piecewise(std::span<const double> y, const PartitionModel& model) {
    check_length(y, model.n());
    BasisCache cache(model.degree());
    PiecewiseFit fit{model, {}, {}};
    project_into(y, model, cache, fit.fitted, &fit.coefficients);
    return fit;
}

double squared_norm_n(std::span<const double> v) {
    if (v.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (double x : v) {
        sum += x * x;
    }
    return sum / static_cast<double>(v.size());
}

double empirical_contrast(std::span<const double> y, const PiecewiseFit& fit) {
    check_length(y, fit.fitted.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - fit.fitted[i];
        sum += d * d;
    }
    return sum / static_cast<double>(y.size());
}

std::vector<double> contrast_curve(std::span<const double> y, int degree,
                                   std::size_t m_max) {
    const std::size_t n = y.size();
    if (m_max < 1 || m_max > PartitionModel::max_cells(n, degree)) {
        throw InputError("m_max = " + std::to_string(m_max) +
                         " outside [1, n/(degree+1)] for n = " + std::to_string(n));
    }
    BasisCache cache(degree);
    std::vector<double> curve(m_max);
    std::vector<double> fitted;
    for (std::size_t m = 1; m <= m_max; ++m) {
        const PartitionModel model(n, m, degree);
        project_into(y, model, cache, fitted, nullptr);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = y[i] - fitted[i];
            sum += d * d;
        }
        curve[m - 1] = sum / static_cast<double>(n);
    }
    return curve;
}

}  // namespace depreg
