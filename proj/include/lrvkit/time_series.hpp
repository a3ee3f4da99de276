#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace lrvkit {

/// A finite real-valued sample path X_1, ..., X_n.
///
/// Values are validated as finite on construction. The `demeaned` flag is
/// set only by `demeaned()` / residualization and records that the sample
/// mean is zero up to rounding.
class TimeSeries {
public:
    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> values, bool demeaned = false);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] bool is_demeaned() const noexcept { return demeaned_; }

    /// Copy with the sample mean subtracted (two-pass, compensated).
    [[nodiscard]] TimeSeries demeaned() const;

    /// Copy with every value multiplied by `c`.
    [[nodiscard]] TimeSeries scaled(double c) const;

    /// Copy with `c` added to every value. Clears the demeaned flag when c != 0.
    [[nodiscard]] TimeSeries shifted(double c) const;

private:
    std::vector<double> values_;
    bool demeaned_ = false;
};

/// Reads a series: one value per line with optional `#` comments, or a CSV
/// whose header contains a `value` column.
[[nodiscard]] TimeSeries read_series(std::istream& in);
[[nodiscard]] TimeSeries read_series(const std::filesystem::path& path);

/// Writes one value per line at round-trip precision.
void write_series(std::ostream& out, std::span<const double> values);
void write_series(const std::filesystem::path& path, std::span<const double> values);

}  // namespace lrvkit
