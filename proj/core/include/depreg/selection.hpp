#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace depreg {

// Model collections are indexed by model size m = 1..M; entry k of every
// per-model vector describes m = k + 1.

/// argmin_m contrasts[m] + penalties[m], ties broken toward the smaller m.
/// Returns the 1-based model size.
std::size_t select_min(std::span<const double> contrasts, std::span<const double> penalties);

/**
 * Exact piecewise-constant map kappa -> m_hat(kappa) of the penalized
 * criterion contrast(m) + kappa * shape(m) over kappa >= 0.
 *
 * chosen[b] is the minimizer on [breakpoints[b], breakpoints[b+1]), with
 * breakpoints[0] == 0 and the last interval unbounded. At a breakpoint the
 * path is right-continuous: among tied models the one with the smallest shape
 * wins (then the smallest m), which matches select_min whenever the shape is
 * increasing in m.
 */
struct SelectionPath {
    std::vector<double> breakpoints;
    std::vector<std::size_t> chosen;
    std::vector<double> contrasts;
    std::vector<double> shapes;

    /// Model selected at penalty constant kappa >= 0.
    std::size_t at(double kappa) const;
    std::size_t segments() const noexcept { return chosen.size(); }
};

/// Builds the path by walking the lower convex hull of the points
/// (shape(m), contrast(m)) from the largest shape to the smallest.
SelectionPath regularization_path(std::span<const double> contrasts,
                                  std::span<const double> shapes);

struct DimensionJumpResult {
    double kappa_dj = 0.0;
    std::size_t m_selected = 0;
    /// Drop of the model dimension at kappa_dj.
    long long jump = 0;
    SelectionPath path;
};

/**
 * Slope-heuristic calibration: kappa_dj is the breakpoint where the selected
 * dimension dims[m_hat - 1] drops the most (ties toward the larger kappa), and
 * the final model is the path value at 2 * kappa_dj.
 *
 * Throws NumericalError when the path never drops in dimension.
 */
DimensionJumpResult dimension_jump(const SelectionPath& path,
                                   std::span<const std::size_t> dims);

}  // namespace depreg
