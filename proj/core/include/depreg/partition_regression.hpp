#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace depreg {

/// Half-open, zero-based index range [begin, end) of one partition cell.
struct Cell {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const noexcept { return end - begin; }
    friend bool operator==(const Cell&, const Cell&) = default;
};

/**
 * Regular partition of the design points 1..n into m cells.
 *
 * Observation i (1-based) belongs to cell j = ceil(i * m / n), i.e. the cells
 * are the right-closed intervals ((j-1)/m, j/m] on the grid i/n. Every cell
 * then has length floor(n/m) or floor(n/m) + 1.
 */
std::vector<Cell> cell_bounds(std::size_t n, std::size_t m);

/// Piecewise polynomials of degree `degree` on the regular m-partition of
/// {1..n}. Construction fails unless every cell holds at least degree + 1
/// points, so the model always has full dimension (degree + 1) * m.
class PartitionModel {
public:
    /// Single constant cell over one point.
    PartitionModel() : PartitionModel(1, 1, 0) {}
    PartitionModel(std::size_t n, std::size_t m, int degree = 0);

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return m_; }
    int degree() const noexcept { return degree_; }
    std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(degree_ + 1) * m_;
    }
    const std::vector<Cell>& cells() const noexcept { return cells_; }

    /// Largest m for which every cell of the m-partition of n points can
    /// carry a degree-`degree` polynomial.
    static std::size_t max_cells(std::size_t n, int degree);

private:
    std::size_t n_;
    std::size_t m_;
    int degree_;
    std::vector<Cell> cells_;
};

/**
 * Orthonormal basis of degree-r polynomials sampled at the local abscissae
 * t = 1..length. The columns of `q` span the same space as the monomials
 * 1, t, ..., t^r; `r_factor` relates them to the rescaled monomials (t/length)^k
 * through V = q * r_factor.
 */
struct LocalBasis {
    std::size_t length = 0;
    int degree = 0;
    Eigen::MatrixXd q;
    Eigen::MatrixXd r_factor;
};

/// Throws NumericalError if the local design is rank deficient.
LocalBasis local_basis(std::size_t length, int degree);

struct PiecewiseFit {
    PartitionModel model;
    /// coefficients[j][k] multiplies t^k on cell j, with t = 1..length.
    std::vector<Eigen::VectorXd> coefficients;
    std::vector<double> fitted;

    /// Cell-local polynomial of cell j evaluated at local index t.
    double evaluate(std::size_t cell, double t) const;
};

/// Least-squares projection of y onto the piecewise-polynomial space.
PiecewiseFit fit_piecewise(std::span<const double> y, const PartitionModel& model);

/// (1/n) * sum (y_i - fitted_i)^2.
double empirical_contrast(std::span<const double> y, const PiecewiseFit& fit);

/// Entry m-1 holds the empirical contrast of the m-cell fit, m = 1..m_max.
std::vector<double> contrast_curve(std::span<const double> y, int degree,
                                   std::size_t m_max);

/// Normalized squared norm (1/n) * sum v_i^2.
double squared_norm_n(std::span<const double> v);

}  // namespace depreg
