#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace depreg::app {

struct SeriesFile {
    std::vector<double> values;
    /// First column of two-column input, when present.
    std::optional<std::vector<double>> years;

    std::size_t size() const noexcept { return values.size(); }
};

inline constexpr std::size_t kMinSeriesLength = 8;

/// One value per line or `year,value` per line; blank lines and lines
/// starting with `#` are skipped. `source` names the input in error messages.
SeriesFile parse_series(std::istream& in, const std::string& source);
SeriesFile load_series(const std::filesystem::path& path);

/// Writes one value per line at round-trip precision, after optional
/// `# ` comment lines.
void write_series(std::ostream& out, std::span<const double> values,
                  std::span<const std::string> comments = {});

/// `%.17g`, enough to read back the identical double.
std::string format_exact(double v);

}  // namespace depreg::app
