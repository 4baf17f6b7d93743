#include "series_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "depreg/errors.hpp"

namespace depreg::app {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() ||
        !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

}  // namespace

SeriesFile parse_series(std::istream& in, const std::string& source) {
    SeriesFile series;
    std::vector<double> years;
    int columns = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        auto fail = [&](const std::string& why) {
            return InputError(source + ":" + std::to_string(line_no) + ": " + why + ": '" +
                              std::string(body) + "'");
        };
        const auto comma = body.find(',');
        const int here = comma == std::string_view::npos ? 1 : 2;
        if (columns != 0 && here != columns) {
            throw fail("expected " + std::to_string(columns) + " column(s)");
        }
        columns = here;
        if (here == 1) {
            const auto v = parse_number(body);
            if (!v) {
                throw fail("not a finite number");
            }
            series.values.push_back(*v);
        } else {
            const std::string_view rest = body.substr(comma + 1);
            if (rest.find(',') != std::string_view::npos) {
                throw fail("expected year,value");
            }
            const auto year = parse_number(body.substr(0, comma));
            const auto v = parse_number(rest);
            if (!year || !v) {
                throw fail("expected year,value with finite numbers");
            }
            years.push_back(*year);
            series.values.push_back(*v);
        }
    }
    if (in.bad()) {
        throw IoError("error reading " + source);
    }
    if (series.values.size() < kMinSeriesLength) {
        throw InputError(source + ": series has " + std::to_string(series.values.size()) +
                         " values, need at least " + std::to_string(kMinSeriesLength));
    }
    if (columns == 2) {
        series.years = std::move(years);
    }
    return series;
}

SeriesFile load_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return parse_series(in, path.string());
}

std::string format_exact(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

void write_series(std::ostream& out, std::span<const double> values,
                  std::span<const std::string> comments) {
    for (const std::string& c : comments) {
        out << "# " << c << '\n';
    }
    for (double v : values) {
        out << format_exact(v) << '\n';
    }
}

}  // namespace depreg::app
