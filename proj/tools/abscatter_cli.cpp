// abscatter: single-point evaluation, sweeps and self-checks for hard-disk
// Aharonov-Bohm scattering.
//
// Exit codes: 0 success, 1 truncation failure (point), 2 argument error,
// 3 sweep finished with poisoned rows, 4 check battery failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "abscatter/abscatter.hpp"

namespace {

namespace ab = abscatter;

constexpr int exit_ok = 0;
constexpr int exit_truncation = 1;
constexpr int exit_usage = 2;
constexpr int exit_poisoned = 3;
constexpr int exit_check_failed = 4;

struct OutputOptions {
    std::string format = "csv";
    std::string path;
};

struct TruncationOptions {
    std::optional<int> m_max;
    double tail_tol = ab::TruncationPolicy::default_tail_tol;

    ab::TruncationPolicy policy() const
    {
        if (m_max) {
            auto p = ab::TruncationPolicy::fixed(*m_max);
            p.tail_tol = tail_tol;
            return p;
        }
        return ab::TruncationPolicy::automatic(tail_tol);
    }
};

struct PointOptions {
    double ka = 0.0;
    double mu0 = 0.0;
    std::string statistics = "distinguishable";
    bool channels = false;
    bool references = false;
    std::vector<double> phi;
};

struct SweepOptions {
    std::string preset;
    std::string axis;
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool log = false;
    std::optional<double> ka;
    double mu0 = 0.0;
    std::string statistics = "distinguishable";
    unsigned threads = 0;
};

struct CheckCliOptions {
    std::optional<double> ka;
    std::optional<double> mu0;
    std::uint64_t seed = 1;
    int random = 0;
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Writes to a sibling temp file and renames, so a failed run never leaves a partial file.
void emit(const OutputOptions& out, const std::string& text)
{
    if (out.path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    const std::filesystem::path target(out.path);
    auto tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << text;
        f.flush();
        if (!f) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("write to " + tmp.string() + " failed");
        }
    }
    std::filesystem::rename(tmp, target);
}

ab::Statistics statistics_from(const std::string& name)
{
    auto s = ab::parse_statistics(name);
    if (!s) throw UsageError("unknown statistics '" + name + "'");
    return *s;
}

int cmd_point(const PointOptions& opt, const TruncationOptions& trunc, const OutputOptions& out)
{
    if (!(opt.ka > 0.0) || !std::isfinite(opt.ka)) throw UsageError("--ka must be positive");
    if (!std::isfinite(opt.mu0)) throw UsageError("--mu0 must be finite");
    const auto stats = statistics_from(opt.statistics);
    const ab::ScatteringPoint point{opt.ka, ab::FluxParameter{opt.mu0}, stats, trunc.policy()};

    ab::ChannelSet set;
    try {
        set = ab::resolve_channels(point);
    } catch (const ab::TruncationError& e) {
        std::cerr << "abscatter: " << e.what() << '\n';
        return exit_truncation;
    }
    const auto result = ab::cross_section_from_channels(set, opt.ka, stats);
    const ab::ScatteringAmplitude amp(set, opt.ka, stats);

    ab::SweepRow row;
    row.ka = opt.ka;
    row.mu0 = opt.mu0;
    row.statistics = stats;
    row.sigma_over_a = result.sigma_t;
    row.sigma_normalized = result.normalized;
    row.m_used = result.m_used;
    row.tail_bound = result.tail_bound;

    std::ostringstream text;
    if (out.format == "json") {
        auto j = ab::row_to_json(row);
        if (opt.channels) {
            auto arr = nlohmann::json::array();
            for (const auto& c : result.channels) {
                arr.push_back({{"m", c.m}, {"alpha", c.alpha}, {"delta", c.delta}, {"sin2", c.sin2}});
            }
            j["channels"] = std::move(arr);
        }
        if (!opt.phi.empty()) {
            auto arr = nlohmann::json::array();
            for (double phi : opt.phi) {
                arr.push_back({{"phi", phi}, {"dsigma_dphi", amp.differential(phi)}});
            }
            j["differential"] = std::move(arr);
        }
        if (opt.references) {
            const auto r = ab::asymptotic_references(opt.ka);
            j["references"] = {{"low_energy_sigma_over_a", r.low_energy_sigma},
                               {"low_energy_valid", r.low_energy_valid},
                               {"low_energy_alt_sigma_over_a", r.low_energy_sigma_alt},
                               {"high_energy_sigma_over_a", r.high_energy_sigma}};
        }
        text << j.dump(2) << '\n';
    } else {
        const ab::SweepRow rows[] = {row};
        ab::write_csv(text, rows);
        if (opt.channels) {
            text << "\nm,alpha,delta,sin2\n";
            for (const auto& c : result.channels) {
                text << c.m << ',' << ab::format_real(c.alpha) << ',' << ab::format_real(c.delta) << ','
                     << ab::format_real(c.sin2) << '\n';
            }
        }
        if (!opt.phi.empty()) {
            text << "\nphi,dsigma_dphi\n";
            for (double phi : opt.phi) {
                text << ab::format_real(phi) << ',' << ab::format_real(amp.differential(phi)) << '\n';
            }
        }
        if (opt.references) {
            const auto r = ab::asymptotic_references(opt.ka);
            text << "\nreference,sigma_over_a,valid\n"
                 << "low_energy," << ab::format_real(r.low_energy_sigma) << ',' << (r.low_energy_valid ? 1 : 0)
                 << '\n'
                 << "low_energy_alt," << ab::format_real(r.low_energy_sigma_alt) << ','
                 << (r.low_energy_valid ? 1 : 0) << '\n'
                 << "high_energy," << ab::format_real(r.high_energy_sigma) << ",1\n";
        }
    }
    emit(out, text.str());
    return exit_ok;
}

std::vector<ab::SweepGrid> grids_from(const SweepOptions& opt, const ab::TruncationPolicy& policy)
{
    if (!opt.preset.empty()) {
        auto grids = ab::preset(opt.preset, policy);
        if (!grids) throw UsageError("unknown preset '" + opt.preset + "' (expected fig1..fig6)");
        return *grids;
    }
    if (opt.axis.empty()) throw UsageError("sweep needs --preset or --axis");
    ab::SweepGrid g;
    g.axis = opt.axis == "ka" ? ab::SweepAxis::ka : ab::SweepAxis::mu0;
    g.start = opt.from;
    g.stop = opt.to;
    g.points = opt.points;
    g.spacing = opt.log ? ab::Spacing::log : ab::Spacing::linear;
    g.statistics = statistics_from(opt.statistics);
    g.truncation = policy;
    if (g.axis == ab::SweepAxis::ka) {
        if (opt.ka) throw UsageError("--ka is the swept axis; hold --mu0 instead");
        g.fixed_value = opt.mu0;
    } else {
        if (!opt.ka) throw UsageError("sweeping mu0 needs a fixed --ka");
        g.fixed_value = *opt.ka;
    }
    g.validate();
    return {g};
}

int cmd_sweep(const SweepOptions& opt, const TruncationOptions& trunc, const OutputOptions& out)
{
    std::vector<ab::SweepGrid> grids;
    try {
        grids = grids_from(opt, trunc.policy());
    } catch (const ab::GridError& e) {
        throw UsageError(e.what());
    }
    const auto rows = ab::run_sweeps(grids, opt.threads);
    std::ostringstream text;
    if (out.format == "json") {
        ab::write_json(text, rows);
    } else {
        ab::write_csv(text, rows);
    }
    emit(out, text.str());
    const auto poisoned = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.poisoned(); });
    if (poisoned > 0) {
        std::cerr << "abscatter: " << poisoned << " of " << rows.size() << " rows flagged\n";
        return exit_poisoned;
    }
    return exit_ok;
}

int cmd_check(const CheckCliOptions& opt)
{
    if (opt.random < 0) throw UsageError("--random must be non-negative");
    if (opt.ka && !(*opt.ka > 0.0)) throw UsageError("--ka must be positive");
    ab::checks::CheckOptions co;
    co.ka = opt.ka;
    co.mu0 = opt.mu0;
    co.seed = opt.seed;
    co.random_points = opt.random;
    const auto items = ab::checks::run_battery(co);
    bool all = true;
    for (const auto& item : items) {
        all = all && item.passed;
        std::cout << (item.passed ? "PASS " : "FAIL ") << item.name << "  worst=" << ab::format_real(item.worst)
                  << "  tol=" << ab::format_real(item.tolerance) << "  (" << item.detail << ")\n";
    }
    std::cout << (all ? "all checks passed\n" : "consistency battery FAILED\n");
    return all ? exit_ok : exit_check_failed;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Partial-wave cross sections for a hard disk threaded by an Aharonov-Bohm flux line.\n"
                 "Lengths are in units of the disk radius a; mu0 = -Phi/Phi0."};
    app.require_subcommand(1, 1);

    OutputOptions out;
    TruncationOptions trunc;
    auto add_truncation = [&](CLI::App* sub) {
        sub->add_option("--m-max", trunc.m_max, "Fixed channel window m in [-M, M] (default: automatic)");
        sub->add_option("--tail-tol", trunc.tail_tol, "Automatic truncation tail tolerance on sum sin^2")
            ->envname("AB_SCATTER_TAIL_TOL")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", out.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        sub->add_option("--out", out.path, "Output file (default: standard output)");
    };

    PointOptions point;
    auto* point_cmd = app.add_subcommand("point", "Evaluate one (ka, mu0) point");
    point_cmd->add_option("--ka", point.ka, "Wavenumber times disk radius")->required();
    point_cmd->add_option("--mu0", point.mu0, "Dimensionless flux")->capture_default_str();
    point_cmd->add_option("--statistics", point.statistics, "distinguishable | boson | fermion")
        ->check(CLI::IsMember({"distinguishable", "boson", "fermion"}))
        ->capture_default_str();
    point_cmd->add_flag("--channels", point.channels, "Append the per-channel table (m, alpha, delta, sin2)");
    point_cmd->add_option("--phi", point.phi, "Angles (rad) at which to print the differential cross section");
    point_cmd->add_flag("--references", point.references, "Append the low/high-energy closed-form references");
    add_truncation(point_cmd);
    add_output(point_cmd);

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep ka or mu0 and emit a table");
    auto* preset_opt = sweep_cmd->add_option("--preset", sweep.preset, "fig1 .. fig6")
                           ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"}));
    auto* axis_opt = sweep_cmd->add_option("--axis", sweep.axis, "Swept parameter: ka | mu0")
                         ->check(CLI::IsMember({"ka", "mu0"}));
    auto* from_opt = sweep_cmd->add_option("--from", sweep.from, "Axis start");
    auto* to_opt = sweep_cmd->add_option("--to", sweep.to, "Axis stop");
    auto* points_opt = sweep_cmd->add_option("--points", sweep.points, "Number of axis points (>= 2)");
    auto* log_opt = sweep_cmd->add_flag("--log", sweep.log, "Log-spaced axis (default linear)");
    auto* ka_opt = sweep_cmd->add_option("--ka", sweep.ka, "Held ka when sweeping mu0");
    auto* mu0_opt = sweep_cmd->add_option("--mu0", sweep.mu0, "Held mu0 when sweeping ka")->capture_default_str();
    auto* stats_opt = sweep_cmd->add_option("--statistics", sweep.statistics, "distinguishable | boson | fermion")
                          ->check(CLI::IsMember({"distinguishable", "boson", "fermion"}))
                          ->capture_default_str();
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (0 = all cores)")->capture_default_str();
    for (auto* o : {axis_opt, from_opt, to_opt, points_opt, log_opt, ka_opt, mu0_opt, stats_opt}) {
        preset_opt->excludes(o);
    }
    axis_opt->needs(from_opt)->needs(to_opt)->needs(points_opt);
    add_truncation(sweep_cmd);
    add_output(sweep_cmd);

    CheckCliOptions check;
    auto* check_cmd = app.add_subcommand("check", "Run the built-in consistency battery");
    check_cmd->add_option("--ka", check.ka, "Also check this ka");
    check_cmd->add_option("--mu0", check.mu0, "Also check this mu0");
    check_cmd->add_option("--seed", check.seed, "Seed for --random")->capture_default_str();
    check_cmd->add_option("--random", check.random, "Random (ka, mu0) pairs in [0.05,50]x[-2,2]")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*point_cmd) return cmd_point(point, trunc, out);
        if (*sweep_cmd) return cmd_sweep(sweep, trunc, out);
        return cmd_check(check);
    } catch (const std::exception& e) {
        std::cerr << "abscatter: " << e.what() << '\n';
        return exit_usage;
    }
}
