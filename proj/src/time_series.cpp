#include "lrvkit/time_series.hpp"

#include "lrvkit/error.hpp"
#include "lrvkit/numeric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace lrvkit {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values, bool demeaned)
    : values_(std::move(values)), demeaned_(demeaned) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorCode::NonFiniteInput, "value at index " + std::to_string(i) + " is not finite");
        }
    }
}

TimeSeries TimeSeries::demeaned() const {
    if (values_.empty()) throw Error(ErrorCode::InvalidLength, "cannot demean an empty series");
    std::vector<double> out(values_);
    // Second pass removes the rounding residue left by the first.
    for (int pass = 0; pass < 2; ++pass) {
        const double mu = mean(out);
        for (double& x : out) x -= mu;
    }
    return TimeSeries(std::move(out), true);
}

TimeSeries TimeSeries::scaled(double c) const {
    std::vector<double> out(values_);
    for (double& x : out) x *= c;
    return TimeSeries(std::move(out), demeaned_);
}

TimeSeries TimeSeries::shifted(double c) const {
    std::vector<double> out(values_);
    for (double& x : out) x += c;
    return TimeSeries(std::move(out), demeaned_ && c == 0.0);
}

TimeSeries read_series(std::istream& in) {
    std::vector<double> values;
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    long value_column = -1;  // >= 0 once a CSV header has been read

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        if (!header_seen) {
            header_seen = true;
            double probe = 0.0;
            if (!parse_double(line, probe)) {
                const auto fields = split_csv(line);
                const auto it = std::find(fields.begin(), fields.end(), "value");
                if (it == fields.end()) {
                    throw Error(ErrorCode::IoError, "line " + std::to_string(line_no) +
                                                        ": expected a number or a CSV header with a `value` column");
                }
                value_column = it - fields.begin();
                continue;
            }
        }

        double x = 0.0;
        bool ok = false;
        if (value_column >= 0) {
            const auto fields = split_csv(line);
            ok = static_cast<std::size_t>(value_column) < fields.size() && parse_double(fields[value_column], x);
        } else {
            ok = parse_double(line, x);
        }
        if (!ok) throw Error(ErrorCode::IoError, "line " + std::to_string(line_no) + ": cannot parse value");
        values.push_back(x);
    }
    return TimeSeries(std::move(values));
}

TimeSeries read_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_series(in);
}

void write_series(std::ostream& out, std::span<const double> values) {
    const auto old_precision = out.precision(17);
    for (double x : values) out << x << '\n';
    out.precision(old_precision);
}

void write_series(const std::filesystem::path& path, std::span<const double> values) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    write_series(out, values);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace lrvkit
