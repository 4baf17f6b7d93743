#include "depreg/methods.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "depreg/errors.hpp"
#include "depreg/hurst.hpp"
#include "depreg/penalties.hpp"
#include "depreg/selection.hpp"

namespace depreg {

std::string MethodSpec::name() const {
    switch (kind) {
        case MethodKind::Cdj:
            return "cdj";
        case MethodKind::HGiven: {
            std::ostringstream out;
            out << "hgiven(" << hurst << ")";
            return out.str();
        }
        case MethodKind::WhY:
            return "why";
        case MethodKind::CdjWhRes:
            return "cdjwhres";
        case MethodKind::WhYWhRes:
            return "whywhres";
    }
    return "unknown";
}

MethodSpec parse_method(const std::string& text, int degree, std::size_t m_max) {
    std::string key;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '+' && c != '_' && c != '-') {
            key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    MethodSpec spec;
    spec.degree = degree;
    spec.m_max = m_max;
    if (key == "cdj") {
        spec.kind = MethodKind::Cdj;
    } else if (key == "why") {
        spec.kind = MethodKind::WhY;
    } else if (key == "cdjwhres") {
        spec.kind = MethodKind::CdjWhRes;
    } else if (key == "whywhres") {
        spec.kind = MethodKind::WhYWhRes;
    } else if (key.rfind("hgiven", 0) == 0) {
        std::string arg = key.substr(6);
        if (!arg.empty() && (arg.front() == ':' || arg.front() == '=' || arg.front() == '(')) {
            arg.erase(0, 1);
        }
        if (!arg.empty() && arg.back() == ')') {
            arg.pop_back();
        }
        double h = 0.0;
        std::istringstream in(arg);
        if (arg.empty() || !(in >> h) || !in.eof()) {
            throw InputError("method '" + text + "' needs a Hurst value, e.g. hgiven:0.7");
        }
        if (!(h > 0.0 && h < 1.0)) {
            throw InputError("hgiven Hurst value must lie in (0, 1)");
        }
        spec.kind = MethodKind::HGiven;
        spec.hurst = h;
    } else {
        throw InputError("unknown method '" + text +
                         "' (expected cdj, hgiven:H, why, cdjwhres, whywhres)");
    }
    return spec;
}

namespace {

template <typename F>
auto stage(const char* name, F&& body) {
    try {
        return body();
    } catch (const PipelineError&) {
        throw;
    } catch (const NumericalError& e) {
        throw PipelineError(name, e.what());
    }
}

PenaltyShape hurst_shape(double hurst, int degree) {
    const double h = std::clamp(hurst, kHurstClampLow, kHurstClampHigh);
    return PenaltyShape::power(2.0 - 2.0 * h, degree);
}

DimensionJumpResult calibrate(std::span<const double> contrasts, const PenaltyShape& shape,
                              std::size_t n, int degree) {
    const std::size_t m_max = contrasts.size();
    const std::vector<double> shapes = shape.values(m_max, n);
    std::vector<std::size_t> dims(m_max);
    for (std::size_t m = 1; m <= m_max; ++m) {
        dims[m - 1] = static_cast<std::size_t>(degree + 1) * m;
    }
    return dimension_jump(regularization_path(contrasts, shapes), dims);
}

std::vector<double> residuals_of(std::span<const double> y, const PiecewiseFit& fit) {
    std::vector<double> r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        r[i] = y[i] - fit.fitted[i];
    }
    return r;
}

}  // namespace

MethodResult run_method(std::span<const double> y, const MethodSpec& spec,
                        std::span<const double> contrasts) {
    const std::size_t n = y.size();
    const int r = spec.degree;
    if (contrasts.empty()) {
        throw InputError("empty model collection");
    }

    MethodResult result;
    auto fit_at = [&](std::size_t m) { return fit_piecewise(y, PartitionModel(n, m, r)); };
    auto whittle = [&](const char* name, std::span<const double> series) {
        return stage(name, [&] { return whittle_estimate(series).hurst; });
    };

    DimensionJumpResult final_jump;
    switch (spec.kind) {
        case MethodKind::Cdj:
            final_jump = stage("dimension-jump",
                               [&] { return calibrate(contrasts, PenaltyShape::dimension(r), n, r); });
            break;
        case MethodKind::HGiven:
            final_jump = stage("dimension-jump", [&] {
                return calibrate(contrasts, PenaltyShape::power(2.0 - 2.0 * spec.hurst, r), n, r);
            });
            break;
        case MethodKind::WhY: {
            const double h = whittle("whittle(y)", y);
            result.hurst_estimates.push_back(h);
            final_jump = stage("dimension-jump",
                               [&] { return calibrate(contrasts, hurst_shape(h, r), n, r); });
            break;
        }
        case MethodKind::CdjWhRes:
        case MethodKind::WhYWhRes: {
            PenaltyShape pre_shape = PenaltyShape::dimension(r);
            if (spec.kind == MethodKind::WhYWhRes) {
                const double h1 = whittle("whittle(y)", y);
                result.hurst_estimates.push_back(h1);
                pre_shape = hurst_shape(h1, r);
            }
            const DimensionJumpResult pre = stage(
                "dimension-jump(pre)", [&] { return calibrate(contrasts, pre_shape, n, r); });
            result.pre_model = pre.m_selected;
            const PiecewiseFit pre_fit = fit_at(pre.m_selected);
            const std::vector<double> pre_residuals = residuals_of(y, pre_fit);
            const double h2 = whittle("whittle(residuals)", pre_residuals);
            result.hurst_estimates.push_back(h2);
            final_jump = stage("dimension-jump",
                               [&] { return calibrate(contrasts, hurst_shape(h2, r), n, r); });
            break;
        }
    }

    result.m_selected = final_jump.m_selected;
    result.kappa_dj = final_jump.kappa_dj;
    result.fit = fit_at(result.m_selected);
    result.residuals = residuals_of(y, result.fit);
    return result;
}

MethodResult run_method(std::span<const double> y, const MethodSpec& spec) {
    const std::size_t m_max = spec.m_max == 0 ? default_m_max(y.size(), spec.degree) : spec.m_max;
    const std::vector<double> contrasts =
        stage("contrast", [&] { return contrast_curve(y, spec.degree, m_max); });
    return run_method(y, spec, contrasts);
}

}  // namespace depreg
