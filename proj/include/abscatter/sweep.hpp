#pragma once

// Cross-section sweeps over ka or mu0, figure presets and CSV/JSON emitters.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "abscatter/errors.hpp"
#include "abscatter/partial_wave.hpp"

namespace abscatter {

enum class SweepAxis { ka, mu0 };
enum class Spacing { linear, log };

class GridError : public std::invalid_argument {
  public:
    explicit GridError(const std::string& what) : std::invalid_argument(what) {}
};

struct SweepGrid {
    SweepAxis axis = SweepAxis::ka;
    double start = 0.01;
    double stop = 20.0;
    int points = 2;
    Spacing spacing = Spacing::linear;
    double fixed_value = 0.0;  // mu0 when sweeping ka, ka when sweeping mu0
    Statistics statistics = Statistics::distinguishable;
    TruncationPolicy truncation{};

    void validate() const
    {
        if (points < 2) throw GridError("a sweep needs at least 2 points");
        if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop)) {
            throw GridError("sweep range must satisfy start < stop");
        }
        if (spacing == Spacing::log && start <= 0.0) throw GridError("log spacing requires start > 0");
        if (axis == SweepAxis::ka && start <= 0.0) throw GridError("ka must be positive");
        if (!std::isfinite(fixed_value)) throw GridError("held parameter must be finite");
        if (axis == SweepAxis::mu0 && fixed_value <= 0.0) throw GridError("ka must be positive");
    }

    std::vector<double> axis_values() const
    {
        validate();
        std::vector<double> v(static_cast<std::size_t>(points));
        const double last = points - 1;
        for (int i = 0; i < points; ++i) {
            if (spacing == Spacing::linear) {
                v[i] = start + (stop - start) * i / last;
            } else {
                const double l0 = std::log(start);
                const double l1 = std::log(stop);
                v[i] = std::exp(l0 + (l1 - l0) * i / last);
            }
        }
        v.front() = start;
        v.back() = stop;
        return v;
    }
};

struct SweepRow {
    double ka = 0.0;
    double mu0 = 0.0;
    Statistics statistics = Statistics::distinguishable;
    double sigma_over_a = 0.0;
    double sigma_normalized = 0.0;  // sigma / 4a
    int m_used = 0;
    double tail_bound = 0.0;
    std::string flags = "ok";

    bool poisoned() const noexcept { return flags != "ok"; }
};

/// One grid point. Failures are recorded in the row's flags, never thrown.
template <PhaseShiftProvider P = HardDisk>
SweepRow evaluate_row(double ka, double mu0, Statistics statistics, const TruncationPolicy& truncation,
                      const P& provider = {})
{
    SweepRow row;
    row.ka = ka;
    row.mu0 = mu0;
    row.statistics = statistics;
    const ScatteringPoint point{ka, FluxParameter{mu0}, statistics, truncation};
    try {
        const auto set = resolve_channels(point, provider);
        const auto r = cross_section_from_channels(set, ka, statistics);
        row.sigma_over_a = r.sigma_t;
        row.sigma_normalized = r.normalized;
        row.m_used = r.m_used;
        row.tail_bound = r.tail_bound;
    } catch (const TruncationError& e) {
        row.sigma_over_a = row.sigma_normalized = std::nan("");
        row.m_used = e.m_reached();
        row.tail_bound = std::nan("");
        row.flags = "truncation_failure";
    } catch (const std::exception&) {
        row.sigma_over_a = row.sigma_normalized = std::nan("");
        row.tail_bound = std::nan("");
        row.flags = "evaluation_error";
    }
    return row;
}

namespace detail {

inline unsigned resolve_threads(unsigned requested, std::size_t work)
{
    unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work, 1)));
}

struct PendingPoint {
    double ka;
    double mu0;
    Statistics statistics;
    TruncationPolicy truncation;
};

template <class P>
std::vector<SweepRow> evaluate_all(const std::vector<PendingPoint>& pending, unsigned threads, const P& provider)
{
    std::vector<SweepRow> rows(pending.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < pending.size(); i = next++) {
            const auto& p = pending[i];
            rows[i] = evaluate_row(p.ka, p.mu0, p.statistics, p.truncation, provider);
        }
    };
    const unsigned n = resolve_threads(threads, pending.size());
    if (n <= 1) {
        worker();
        return rows;
    }
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back(worker);
    }
    pool.clear();  // joins
    return rows;
}

inline void append_grid(std::vector<PendingPoint>& out, const SweepGrid& grid)
{
    for (double v : grid.axis_values()) {
        if (grid.axis == SweepAxis::ka) {
            out.push_back({v, grid.fixed_value, grid.statistics, grid.truncation});
        } else {
            out.push_back({grid.fixed_value, v, grid.statistics, grid.truncation});
        }
    }
}

}  // namespace detail

/// Rows in axis order; points are evaluated concurrently but independently,
/// so the result does not depend on the thread count. threads = 0 uses all cores.
template <PhaseShiftProvider P = HardDisk>
std::vector<SweepRow> run_sweep(const SweepGrid& grid, unsigned threads = 0, const P& provider = {})
{
    std::vector<detail::PendingPoint> pending;
    detail::append_grid(pending, grid);
    return detail::evaluate_all(pending, threads, provider);
}

/// Concatenation of several grids, in the order given.
template <PhaseShiftProvider P = HardDisk>
std::vector<SweepRow> run_sweeps(std::span<const SweepGrid> grids, unsigned threads = 0, const P& provider = {})
{
    std::vector<detail::PendingPoint> pending;
    for (const auto& g : grids) {
        detail::append_grid(pending, g);
    }
    return detail::evaluate_all(pending, threads, provider);
}

inline constexpr std::string_view preset_names[] = {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"};

/// Figure presets. fig1/3/5 sweep ka log-spaced over [0.01, 20] at
/// mu0 in {0, 0.1, 0.25, 0.5, 0.75, 1}; fig2/4/6 sweep mu0 over [-3, 3] at
/// ka in {0.1, 0.3, 0.5}. Odd presets are distinguishable / boson / fermion
/// in turn, and so are the even ones.
inline std::optional<std::vector<SweepGrid>> preset(std::string_view name,
                                                    const TruncationPolicy& truncation = {})
{
    static constexpr double ka_curves_mu0[] = {0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
    static constexpr double mu0_curves_ka[] = {0.1, 0.3, 0.5};

    Statistics stats{};
    bool ka_axis = false;
    if (name == "fig1") {
        stats = Statistics::distinguishable;
        ka_axis = true;
    } else if (name == "fig2") {
        stats = Statistics::distinguishable;
    } else if (name == "fig3") {
        stats = Statistics::boson;
        ka_axis = true;
    } else if (name == "fig4") {
        stats = Statistics::boson;
    } else if (name == "fig5") {
        stats = Statistics::fermion;
        ka_axis = true;
    } else if (name == "fig6") {
        stats = Statistics::fermion;
    } else {
        return std::nullopt;
    }

    std::vector<SweepGrid> grids;
    if (ka_axis) {
        for (double mu0 : ka_curves_mu0) {
            grids.push_back({SweepAxis::ka, 0.01, 20.0, 200, Spacing::log, mu0, stats, truncation});
        }
    } else {
        for (double ka : mu0_curves_ka) {
            grids.push_back({SweepAxis::mu0, -3.0, 3.0, 601, Spacing::linear, ka, stats, truncation});
        }
    }
    return grids;
}

inline constexpr std::string_view csv_header = "ka,mu0,statistics,sigma_over_a,sigma_over_4a,m_used,tail_bound,flags";

/// Decimal with 15 significant digits.
inline std::string format_real(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
    return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& out, std::span<const SweepRow> rows)
{
    out << csv_header << '\n';
    for (const auto& r : rows) {
        out << format_real(r.ka) << ',' << format_real(r.mu0) << ',' << to_string(r.statistics) << ','
            << format_real(r.sigma_over_a) << ',' << format_real(r.sigma_normalized) << ',' << r.m_used << ','
            << format_real(r.tail_bound) << ',' << r.flags << '\n';
    }
}

inline nlohmann::json row_to_json(const SweepRow& r)
{
    auto real = [](double v) -> nlohmann::json {
        if (!std::isfinite(v)) return nullptr;
        return v;
    };
    return {
        {"ka", real(r.ka)},
        {"mu0", real(r.mu0)},
        {"statistics", std::string(to_string(r.statistics))},
        {"sigma_over_a", real(r.sigma_over_a)},
        {"sigma_over_4a", real(r.sigma_normalized)},
        {"m_used", r.m_used},
        {"tail_bound", real(r.tail_bound)},
        {"flags", r.flags},
    };
}

inline void write_json(std::ostream& out, std::span<const SweepRow> rows)
{
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back(row_to_json(r));
    }
    out << arr.dump(2) << '\n';
}

}  // namespace abscatter
