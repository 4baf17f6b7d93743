#include "depreg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "depreg/errors.hpp"

namespace depreg {

std::size_t select_min(std::span<const double> contrasts, std::span<const double> penalties) {
    if (contrasts.empty()) {
        throw InputError("model collection is empty");
    }
    if (contrasts.size() != penalties.size()) {
        throw InputError("contrast and penalty vectors differ in length");
    }
    std::size_t best = 0;
    double best_value = contrasts[0] + penalties[0];
    for (std::size_t k = 1; k < contrasts.size(); ++k) {
        const double value = contrasts[k] + penalties[k];
        if (value < best_value) {
            best_value = value;
            best = k;
        }
    }
    return best + 1;
}

std::size_t SelectionPath::at(double kappa) const {
    if (chosen.empty()) {
        throw InputError("empty selection path");
    }
    if (kappa < 0.0) {
        throw InputError("penalty constant must be nonnegative");
    }
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), kappa);
    return chosen[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

SelectionPath regularization_path(std::span<const double> contrasts,
                                  std::span<const double> shapes) {
    const std::size_t count = contrasts.size();
    if (count == 0) {
        throw InputError("model collection is empty");
    }
    if (shapes.size() != count) {
        throw InputError("contrast and shape vectors differ in length");
    }
    for (std::size_t k = 0; k < count; ++k) {
        if (!(shapes[k] > 0.0) || !std::isfinite(shapes[k]) || !std::isfinite(contrasts[k])) {
            throw InputError("shapes must be positive and finite; offending model m = " +
                             std::to_string(k + 1));
        }
    }

    // Preferred model among ties: smaller shape, then smaller m.
    auto preferred = [&](std::size_t a, std::size_t b) {
        return shapes[a] < shapes[b] || (shapes[a] == shapes[b] && a < b);
    };

    std::size_t current = 0;
    for (std::size_t k = 1; k < count; ++k) {
        if (contrasts[k] < contrasts[current] ||
            (contrasts[k] == contrasts[current] && preferred(k, current))) {
            current = k;
        }
    }

    SelectionPath path;
    path.contrasts.assign(contrasts.begin(), contrasts.end());
    path.shapes.assign(shapes.begin(), shapes.end());
    path.breakpoints.push_back(0.0);
    path.chosen.push_back(current + 1);

    double kappa = 0.0;
    std::vector<double> crossing(count);
    while (true) {
        // Each model with a smaller shape overtakes the current one at the
        // slope between their (shape, contrast) points.
        double next = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < count; ++k) {
            crossing[k] = std::numeric_limits<double>::infinity();
            if (shapes[k] < shapes[current]) {
                const double slope =
                    (contrasts[k] - contrasts[current]) / (shapes[current] - shapes[k]);
                crossing[k] = std::max(slope, kappa);
                next = std::min(next, crossing[k]);
            }
        }
        if (!std::isfinite(next)) {
            break;
        }
        const double tie = next + 1e-12 * std::max(std::abs(next), 1e-300);
        std::size_t successor = count;
        for (std::size_t k = 0; k < count; ++k) {
            if (crossing[k] <= tie && (successor == count || preferred(k, successor))) {
                successor = k;
            }
        }
        current = successor;
        if (next == path.breakpoints.back()) {
            path.chosen.back() = current + 1;
        } else {
            path.breakpoints.push_back(next);
            path.chosen.push_back(current + 1);
        }
        kappa = next;
    }
    return path;
}

DimensionJumpResult dimension_jump(const SelectionPath& path,
                                   std::span<const std::size_t> dims) {
    if (path.chosen.empty()) {
        throw InputError("empty selection path");
    }
    if (dims.size() < path.contrasts.size()) {
        throw InputError("dimension vector shorter than the model collection");
    }
    auto dim_of = [&](std::size_t m) { return static_cast<long long>(dims[m - 1]); };

    long long best_drop = 0;
    std::size_t best_index = 0;
    for (std::size_t b = 1; b < path.chosen.size(); ++b) {
        const long long drop = dim_of(path.chosen[b - 1]) - dim_of(path.chosen[b]);
        if (drop > 0 && drop >= best_drop) {
            best_drop = drop;
            best_index = b;
        }
    }
    if (best_index == 0) {
        throw NumericalError("no dimension jump; collection too poor");
    }
    DimensionJumpResult result;
    result.kappa_dj = path.breakpoints[best_index];
    result.jump = best_drop;
    result.m_selected = path.at(2.0 * result.kappa_dj);
    result.path = path;
    return result;
}

}  // namespace depreg
