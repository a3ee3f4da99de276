#include "lrvkit/experiment_config.hpp"

#include "lrvkit/error.hpp"
#include "lrvkit/numeric.hpp"
#include "lrvkit/spectral.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lrvkit {

namespace {

struct Entry {
    std::string value;
    std::size_t line = 0;
};

using Block = std::multimap<std::string, Entry>;

const std::set<std::string, std::less<>> kKnownKeys = {
    "kind",   "process", "variance", "d",     "coefficients", "alpha0", "alpha1",    "beta1",
    "sv_alpha", "phi",   "sigma_w2", "n",     "m_exponent",   "m",      "reps",      "full_reps",
    "master_seed", "delta", "theta", "levels", "anchor",      "lower",  "upper",     "ratios",
    "statistic",
};

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::ConfigError, message); }

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& text, const std::string& key) {
    double v = 0.0;
    const std::string t = trim(text);
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc{} || ptr != end) fail("key '" + key + "': '" + t + "' is not a number");
    return v;
}

std::uint64_t to_uint(const std::string& text, const std::string& key) {
    std::uint64_t v = 0;
    const std::string t = trim(text);
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc{} || ptr != end) {
        fail("key '" + key + "': '" + t + "' is not a nonnegative integer");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

std::vector<double> to_doubles(const std::string& text, const std::string& key) {
    std::vector<double> out;
    for (const auto& p : split(text, ',')) out.push_back(to_double(p, key));
    if (out.empty()) fail("key '" + key + "' needs at least one value");
    return out;
}

class Reader {
public:
    explicit Reader(const Block& block) : block_(block) {}

    [[nodiscard]] const std::string* find(const std::string& key) const {
        const auto it = block_.find(key);
        return it == block_.end() ? nullptr : &it->second.value;
    }
    [[nodiscard]] std::string text(const std::string& key) const {
        const auto* v = find(key);
        if (!v) fail("missing required key '" + key + "'");
        return trim(*v);
    }
    [[nodiscard]] double number(const std::string& key, double fallback) const {
        const auto* v = find(key);
        return v ? to_double(*v, key) : fallback;
    }
    [[nodiscard]] double number(const std::string& key) const { return to_double(text(key), key); }
    [[nodiscard]] std::vector<std::string> all(const std::string& key) const {
        std::vector<std::string> out;
        const auto [lo, hi] = block_.equal_range(key);
        for (auto it = lo; it != hi; ++it) out.push_back(it->second.value);
        return out;
    }

private:
    const Block& block_;
};

ExperimentKind parse_kind(const std::string& text) {
    if (text == "clt_qn") return ExperimentKind::CltQn;
    if (text == "clt_whittle") return ExperimentKind::CltWhittle;
    if (text == "size_table") return ExperimentKind::SizeTable;
    if (text == "density") return ExperimentKind::DensitySamples;
    if (text == "bias_rate") return ExperimentKind::BiasRate;
    fail("unknown experiment kind '" + text + "'");
}

ProcessSpec parse_process(const Reader& r) {
    const std::string name = r.text("process");
    try {
        if (name == "iid") return ProcessSpec::iid(r.number("variance", 1.0));
        if (name == "linear") {
            if (const auto* coef = r.find("coefficients")) {
                return ProcessSpec::linear(to_doubles(*coef, "coefficients"), r.number("variance", 1.0));
            }
            return ProcessSpec::linear_power_decay(r.number("d"), r.number("variance", 1.0));
        }
        if (name == "garch11") return ProcessSpec::garch11(r.number("alpha0"), r.number("alpha1"), r.number("beta1"));
        if (name == "sv") return ProcessSpec::stoch_vol(r.number("sv_alpha", 0.0), r.number("phi"), r.number("sigma_w2"));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        fail(std::string("invalid process parameters: ") + e.what());
    }
    fail("unknown process '" + name + "' (expected iid, linear, garch11 or sv)");
}

ExperimentConfig build_experiment(const std::string& name, const Block& block) {
    for (const auto& [key, entry] : block) {
        if (!kKnownKeys.contains(key)) fail("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
    const Reader r(block);
    ExperimentConfig c;
    c.name = name;
    c.kind = parse_kind(r.text("kind"));
    c.process = parse_process(r);
    for (double v : to_doubles(r.text("n"), "n")) {
        if (v != std::floor(v) || v < 0) fail("sample sizes must be nonnegative integers");
        c.n_values.push_back(static_cast<std::size_t>(v));
    }
    if (const auto* m = r.find("m")) c.explicit_m = to_uint(*m, "m");
    if (const auto* b = r.find("m_exponent")) c.m_exponents = to_doubles(*b, "m_exponent");
    c.reps = to_uint(r.text("reps"), "reps");
    if (const auto* f = r.find("full_reps")) c.full_reps = to_uint(*f, "full_reps");
    c.master_seed = to_uint(r.text("master_seed"), "master_seed");
    c.bounds.lower = r.number("lower", c.bounds.lower);
    c.bounds.upper = r.number("upper", c.bounds.upper);
    if (const auto* ratios = r.find("ratios")) c.bias_ratios = to_doubles(*ratios, "ratios");

    if (r.find("delta") || r.find("theta") || r.find("levels")) {
        SizeParams sp;
        if (const auto* d = r.find("delta")) sp.deltas = to_doubles(*d, "delta");
        if (const auto* t = r.find("theta")) sp.thetas = to_doubles(*t, "theta");
        sp.levels = r.find("levels") ? to_doubles(*r.find("levels"), "levels") : std::vector<double>{0.01, 0.05, 0.10};
        c.size_params = sp;
    }
    for (const auto& a : r.all("anchor")) {
        const auto parts = split(a, ' ');
        if (parts.size() != 4) fail("anchor needs 'delta theta m_exponent n', got '" + a + "'");
        c.anchors.push_back({to_double(parts[0], "anchor"), to_double(parts[1], "anchor"),
                             to_double(parts[2], "anchor"), static_cast<std::size_t>(to_uint(parts[3], "anchor"))});
    }
    if (const auto* s = r.find("statistic")) {
        const std::string v = trim(*s);
        if (v == "lwe") {
            c.statistic = DensityStatistic::NormalizedLwe;
        } else if (v == "t_r") {
            c.statistic = DensityStatistic::ResidualStatistic;
        } else {
            fail("statistic must be 'lwe' or 't_r'");
        }
    }
    validate(c);
    return c;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
    switch (kind) {
        case ExperimentKind::CltQn: return "clt_qn";
        case ExperimentKind::CltWhittle: return "clt_whittle";
        case ExperimentKind::SizeTable: return "size_table";
        case ExperimentKind::DensitySamples: return "density";
        case ExperimentKind::BiasRate: return "bias_rate";
    }
    return "unknown";
}

void validate(const ExperimentConfig& c) {
    const std::string where = "experiment '" + c.name + "': ";
    if (c.name.empty()) fail("experiment name must not be empty");
    if (c.reps < 1) throw Error(ErrorCode::InsufficientReps, where + "reps must be >= 1");
    if (c.full_reps && *c.full_reps < 1) throw Error(ErrorCode::InsufficientReps, where + "full_reps must be >= 1");
    if (c.n_values.empty()) fail(where + "at least one sample size n is required");
    for (auto n : c.n_values) {
        if (n < 4) fail(where + "every n must be >= 4");
    }
    if (c.kind != ExperimentKind::BiasRate && !c.explicit_m && c.m_exponents.empty()) {
        fail(where + "set m_exponent or m");
    }
    for (double b : c.m_exponents) {
        if (!(b > 0.0 && b < 1.0)) fail(where + "m_exponent values must lie in (0,1)");
    }
    if (!(c.bounds.lower > 0.0 && c.bounds.lower < c.bounds.upper && c.bounds.upper < 1.0)) {
        fail(where + "bounds must satisfy 0 < lower < upper < 1");
    }
    for (double r : c.bias_ratios) {
        if (!(r > 0.0 && r < 0.5)) fail(where + "bias ratios must lie in (0, 0.5)");
    }
    const bool needs_shift = c.kind == ExperimentKind::SizeTable ||
                             (c.kind == ExperimentKind::DensitySamples &&
                              c.statistic == DensityStatistic::ResidualStatistic);
    if (needs_shift) {
        if (!c.size_params || c.size_params->deltas.empty() || c.size_params->thetas.empty()) {
            fail(where + "delta and theta are required");
        }
        for (double t : c.size_params->thetas) {
            if (!(t > 0.0 && t < 1.0)) fail(where + "theta must lie in (0,1)");
        }
        for (double d : c.size_params->deltas) {
            if (!std::isfinite(d)) fail(where + "delta must be finite");
        }
        for (double a : c.size_params->levels) {
            if (!(a > 0.0 && a < 1.0)) fail(where + "levels must lie in (0,1)");
        }
    }
    if (c.kind == ExperimentKind::SizeTable) {
        const auto k = c.process.kind();
        if (k != ProcessKind::Garch11 && k != ProcessKind::StochVol) {
            fail(where + "size tables are defined for garch11 and sv processes");
        }
    }
    for (auto n : c.n_values) {
        for (auto m : bandwidths_for(c, n)) {
            if (c.kind != ExperimentKind::BiasRate && (m < 1 || m > max_bandwidth(n))) {
                fail(where + "bandwidth " + std::to_string(m) + " invalid for n=" + std::to_string(n));
            }
        }
    }
}

std::vector<std::size_t> bandwidths_for(const ExperimentConfig& c, std::size_t n) {
    if (c.explicit_m) return {*c.explicit_m};
    std::vector<std::size_t> out;
    for (double b : c.m_exponents) out.push_back(static_cast<std::size_t>(bandwidth_from_exponent(static_cast<long>(n), b)));
    return out;
}

RunConfig parse_run_config(std::string_view text) {
    RunConfig run;
    run.source_text = std::string(text);

    Block defaults;
    std::vector<std::pair<std::string, Block>> blocks;
    Block* current = &defaults;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("line " + std::to_string(line_no) + ": unterminated section header");
            const auto parts = split(line.substr(1, line.size() - 2), ' ');
            if (parts.size() != 2 || parts[0] != "experiment") {
                fail("line " + std::to_string(line_no) + ": expected [experiment NAME]");
            }
            for (const auto& [existing, block] : blocks) {
                if (existing == parts[1]) fail("duplicate experiment name '" + parts[1] + "'");
            }
            blocks.emplace_back(parts[1], Block{});
            current = &blocks.back().second;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("line " + std::to_string(line_no) + ": empty key");
        if (key == "threads") {
            if (current != &defaults) fail("line " + std::to_string(line_no) + ": threads is a global setting");
            run.threads = to_uint(value, key);
            continue;
        }
        if (key != "anchor" && current->count(key)) {
            fail("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        current->emplace(key, Entry{value, line_no});
    }
    if (blocks.empty()) fail("no [experiment NAME] blocks found");

    for (const auto& [name, block] : blocks) {
        Block merged = block;
        for (const auto& [key, entry] : defaults) {
            if (!merged.count(key)) merged.emplace(key, entry);
        }
        run.experiments.push_back(build_experiment(name, merged));
    }
    return run;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

}  // namespace lrvkit
