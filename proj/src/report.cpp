#include "lrvkit/report.hpp"

#include "lrvkit/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace lrvkit {

namespace {

std::string cell_label(const SampleCell& c) {
    std::ostringstream s;
    s << "n=" << c.n << " m=" << c.m;
    if (c.m_exponent) s << " m_exponent=" << *c.m_exponent;
    if (c.delta) s << " delta=" << *c.delta;
    if (c.theta) s << " theta=" << *c.theta;
    return s.str();
}

std::string optional_field(const std::optional<double>& v) {
    if (!v) return "";
    std::ostringstream s;
    s << *v;
    return s.str();
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

}  // namespace

std::string content_hash(std::string_view content) {
    const std::string header = "blob " + std::to_string(content.size()) + '\0';
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
        EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
        throw Error(ErrorCode::IoError, "SHA-1 digest failed");
    }
    std::ostringstream hex;
    hex << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
    return hex.str();
}

void write_metadata(std::ostream& out, const ExperimentConfig& config, const RunOptions& options,
                    std::string_view config_text) {
    out << "# experiment: " << config.name << '\n';
    out << "# kind: " << to_string(config.kind) << '\n';
    out << "# process: " << config.process.describe() << '\n';
    out << "# master_seed: " << config.master_seed << '\n';
    out << "# seed_rule: " << kSeedRule << '\n';
    out << "# reps: " << effective_reps(config, options) << '\n';
    out << "# full: " << (options.full ? "true" : "false") << '\n';
    out << "# config_hash: " << content_hash(config_text) << '\n';
    std::istringstream lines{std::string(config_text)};
    std::string line;
    while (std::getline(lines, line)) out << "# config| " << line << '\n';
}

void write_summary_csv(std::ostream& out, const SampleExperiment& result) {
    out << "n,m,m_exponent,delta,theta,reps,mean,variance,skewness,ks_distance,variance_defined\n";
    out << std::setprecision(10);
    for (const auto& c : result.cells) {
        const auto& s = c.summary;
        out << c.n << ',' << c.m << ',' << optional_field(c.m_exponent) << ',' << optional_field(c.delta) << ','
            << optional_field(c.theta) << ',' << s.count << ',' << s.mean << ',' << s.variance << ',' << s.skewness
            << ',' << s.ks_distance << ',' << (s.variance_defined ? 1 : 0) << '\n';
    }
}

void write_samples(std::ostream& out, const SampleExperiment& result) {
    out << std::setprecision(17);
    for (const auto& c : result.cells) {
        out << "# cell " << cell_label(c) << '\n';
        for (double x : c.samples) out << x << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const SampleExperiment& result) {
    out << "n,m,m_exponent,delta,theta,bin_left,bin_right,density\n";
    out << std::setprecision(12);
    for (const auto& c : result.cells) {
        const Histogram h = make_histogram(c.samples);
        for (std::size_t b = 0; b < h.density.size(); ++b) {
            out << c.n << ',' << c.m << ',' << optional_field(c.m_exponent) << ',' << optional_field(c.delta) << ','
                << optional_field(c.theta) << ',' << h.edges[b] << ',' << h.edges[b + 1] << ',' << h.density[b]
                << '\n';
        }
    }
}

void write_size_table_csv(std::ostream& out, const SizeTable& table) {
    out << "delta,theta,m_exponent,n,m,alpha,reps,rejections,reject_pct,std_error\n";
    out << std::setprecision(10);
    for (const auto& c : table.cells) {
        out << c.delta << ',' << c.theta << ',' << c.m_exponent << ',' << c.n << ',' << c.m << ',' << c.alpha << ','
            << c.reps << ',' << c.rejections << ',' << c.reject_pct << ',' << c.std_error << '\n';
    }
}

void write_bias_csv(std::ostream& out, const BiasReport& report) {
    out << "n,m,ratio,f0,exact_mean,exact_bias,mc_mean,mc_std_error,mc_bias\n";
    out << std::setprecision(12);
    for (const auto& r : report.rows) {
        out << r.n << ',' << r.m << ',' << r.ratio << ',' << r.f0 << ',' << r.exact_mean << ',' << r.exact_bias << ','
            << r.mc_mean << ',' << r.mc_std_error << ',' << r.mc_bias << '\n';
    }
    for (const auto& s : report.slopes) {
        out << "# slope n=" << s.n << " exact=" << s.exact << " monte_carlo=" << s.monte_carlo << '\n';
    }
}

ExperimentOutput run_experiment(const ExperimentConfig& config, const RunOptions& options,
                                std::string_view config_text, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

    ExperimentOutput output;
    const auto base = out_dir / config.name;
    auto emit = [&](const std::filesystem::path& path, auto&& body) {
        auto out = open_output(path);
        write_metadata(out, config, options, config_text);
        body(out);
        output.files.push_back(path);
    };
    const auto csv = std::filesystem::path(base.string() + ".csv");

    switch (config.kind) {
        case ExperimentKind::SizeTable: {
            const SizeTable table = run_size_table(config, options);
            emit(csv, [&](std::ostream& o) { write_size_table_csv(o, table); });
            break;
        }
        case ExperimentKind::BiasRate: {
            const BiasReport report = check_bias_rate(config, options);
            emit(csv, [&](std::ostream& o) { write_bias_csv(o, report); });
            break;
        }
        case ExperimentKind::CltQn:
        case ExperimentKind::CltWhittle:
        case ExperimentKind::DensitySamples: {
            SampleExperiment result = config.kind == ExperimentKind::CltQn       ? run_clt_qn(config, options)
                                      : config.kind == ExperimentKind::CltWhittle ? run_clt_whittle(config, options)
                                                                                  : run_density_samples(config, options);
            emit(csv, [&](std::ostream& o) { write_summary_csv(o, result); });
            emit(base.string() + ".samples", [&](std::ostream& o) { write_samples(o, result); });
            emit(base.string() + ".hist.csv", [&](std::ostream& o) { write_histogram_csv(o, result); });
            output.warnings = std::move(result.warnings);
            break;
        }
    }
    return output;
}

}  // namespace lrvkit
