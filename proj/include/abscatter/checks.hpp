#pragma once

// Built-in consistency battery: identities that must hold for any correct
// build, independent of reference data.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "abscatter/partial_wave.hpp"
#include "abscatter/specfun.hpp"

namespace abscatter::checks {

inline constexpr double wronskian_tol = 1e-9;
inline constexpr double closed_form_tol = 1e-12;
inline constexpr double symmetry_tol = 1e-10;
inline constexpr double partition_tol = 1e-12;
inline constexpr double parseval_tol = 1e-8;
inline constexpr double optical_tol = 1e-10;
inline constexpr int parseval_nodes = 4096;

struct CheckItem {
    std::string name;
    bool passed = false;
    double worst = 0.0;  // worst relative residual seen
    double tolerance = 0.0;
    std::string detail;
};

struct CheckOptions {
    std::optional<double> ka;
    std::optional<double> mu0;
    std::uint64_t seed = 1;
    int random_points = 0;
};

inline double relative_difference(double a, double b) noexcept
{
    const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
    return std::abs(a - b) / scale;
}

inline double sigma(double ka, double mu0, Statistics s)
{
    return total_cross_section(ScatteringPoint{ka, FluxParameter{mu0}, s, {}}).sigma_t;
}

/// 4096-node trapezoid of sigma(phi) over (-pi, pi] against the channel sum, at matched truncation.
inline double parseval_residual(double ka, double mu0, Statistics s = Statistics::distinguishable)
{
    const ScatteringAmplitude amp(ScatteringPoint{ka, FluxParameter{mu0}, s, {}});
    const double h = 2.0 * std::numbers::pi / parseval_nodes;
    specfun::detail::CompensatedSum quad;
    for (int i = 0; i < parseval_nodes; ++i) {
        quad.add(amp.differential(-std::numbers::pi + (i + 1) * h));
    }
    const double summed = cross_section_from_channels(amp.channels(), ka, s).sigma_t;
    return relative_difference(h * quad.value(), summed);
}

inline double partition_residual(double ka, double mu0)
{
    const auto set = resolve_channels(ScatteringPoint{ka, FluxParameter{mu0}, Statistics::distinguishable, {}});
    const double d = cross_section_from_channels(set, ka, Statistics::distinguishable).sigma_t;
    const double b = cross_section_from_channels(set, ka, Statistics::boson).sigma_t;
    const double f = cross_section_from_channels(set, ka, Statistics::fermion).sigma_t;
    return relative_difference(b + f, 4.0 * d);
}

/// Worst of: period-1 (distinguishable), period-2 (boson, fermion) and mu0 -> -mu0 reflection.
inline double periodicity_residual(double ka, double mu0)
{
    double worst = 0.0;
    worst = std::max(worst, relative_difference(sigma(ka, mu0, Statistics::distinguishable),
                                                sigma(ka, mu0 + 1.0, Statistics::distinguishable)));
    for (auto s : {Statistics::boson, Statistics::fermion}) {
        worst = std::max(worst, relative_difference(sigma(ka, mu0, s), sigma(ka, mu0 + 2.0, s)));
    }
    return worst;
}

inline double reflection_residual(double ka, double mu0)
{
    double worst = 0.0;
    for (auto s : {Statistics::distinguishable, Statistics::boson, Statistics::fermion}) {
        worst = std::max(worst, relative_difference(sigma(ka, mu0, s), sigma(ka, -mu0, s)));
    }
    return worst;
}

inline double optical_residual(double ka, double mu0)
{
    return optical_theorem_check(ScatteringPoint{ka, FluxParameter{mu0}, Statistics::distinguishable, {}}).residual;
}

namespace detail {

// Explicit trigonometric forms of J and N for orders 1/2, 3/2, 5/2, in long double.
inline void half_integer_reference(int twice_order, long double x, long double& j, long double& n)
{
    const long double pref = std::sqrt(2.0L / (std::numbers::pi_v<long double> * x));
    const long double s = std::sin(x);
    const long double c = std::cos(x);
    switch (twice_order) {
        case 1:
            j = pref * s;
            n = -pref * c;
            break;
        case 3:
            j = pref * (s / x - c);
            n = -pref * (c / x + s);
            break;
        default:
            j = pref * ((3.0L / (x * x) - 1.0L) * s - 3.0L * c / x);
            n = pref * ((1.0L - 3.0L / (x * x)) * c - 3.0L * s / x);
            break;
    }
}

template <class Fn>
CheckItem scan(std::string name, double tolerance, const std::vector<std::pair<double, double>>& points, Fn&& fn)
{
    CheckItem item{std::move(name), true, 0.0, tolerance, {}};
    for (const auto& [ka, mu0] : points) {
        double r = 0.0;
        try {
            r = fn(ka, mu0);
        } catch (const std::exception& e) {
            item.passed = false;
            item.detail = std::string("exception: ") + e.what();
            return item;
        }
        if (!(r <= tolerance)) {
            item.passed = false;
            if (item.detail.empty()) {
                item.detail = "first failure at ka=" + std::to_string(ka) + " mu0=" + std::to_string(mu0);
            }
        }
        item.worst = std::max(item.worst, std::isnan(r) ? std::numeric_limits<double>::infinity() : r);
    }
    item.detail = std::to_string(points.size()) + " points" + (item.detail.empty() ? "" : "; " + item.detail);
    return item;
}

}  // namespace detail

/// Wronskian on an n x n grid, alpha in [0, 50], x log-spaced in [0.01, 500].
inline CheckItem wronskian_item(int n = 50)
{
    CheckItem item{"wronskian", true, 0.0, wronskian_tol, {}};
    for (int i = 0; i < n; ++i) {
        const double alpha = 50.0 * i / (n - 1);
        for (int k = 0; k < n; ++k) {
            const double x = 0.01 * std::pow(5e4, static_cast<double>(k) / (n - 1));
            const double r = specfun::detail::wronskian_residual(alpha, x);
            item.worst = std::max(item.worst, std::isnan(r) ? std::numeric_limits<double>::infinity() : r);
        }
    }
    item.passed = item.worst <= wronskian_tol;
    item.detail = std::to_string(n) + "x" + std::to_string(n) + " grid";
    return item;
}

/// Orders 1/2, 3/2, 5/2 against their elementary forms for x in [0.1, 100].
/// Error is measured relative to max(|C|, 1e-3 sqrt(J^2 + N^2)) so isolated zeros do not count.
inline CheckItem closed_form_item(int samples = 400)
{
    CheckItem item{"half_integer_closed_forms", true, 0.0, closed_form_tol, {}};
    for (int twice : {1, 3, 5}) {
        for (int k = 0; k < samples; ++k) {
            const double x = 0.1 * std::pow(1000.0, static_cast<double>(k) / (samples - 1));
            long double j_ref = 0;
            long double n_ref = 0;
            detail::half_integer_reference(twice, x, j_ref, n_ref);
            const auto p = specfun::bessel_pair(0.5 * twice, x);
            const double env = std::sqrt(static_cast<double>(j_ref * j_ref + n_ref * n_ref));
            const double ej = std::abs(p.j - static_cast<double>(j_ref))
                              / std::max(std::abs(static_cast<double>(j_ref)), 1e-3 * env);
            const double en = std::abs(p.n - static_cast<double>(n_ref))
                              / std::max(std::abs(static_cast<double>(n_ref)), 1e-3 * env);
            item.worst = std::max({item.worst, ej, en});
        }
    }
    item.passed = item.worst <= closed_form_tol;
    item.detail = "orders 1/2, 3/2, 5/2";
    return item;
}

inline std::vector<std::pair<double, double>> default_points()
{
    std::vector<std::pair<double, double>> pts;
    for (double ka : {0.1, 0.5, 2.0, 10.0, 40.0}) {
        for (double mu0 : {-1.7, -0.5, 0.0, 0.3, 1.25}) {
            pts.emplace_back(ka, mu0);
        }
    }
    return pts;
}

/// The full battery. A point (ka, mu0) adds point-specific items; random_points adds
/// that many random pairs in [0.05, 50] x [-2, 2] drawn from seed.
inline std::vector<CheckItem> run_battery(const CheckOptions& opts = {})
{
    std::vector<CheckItem> items;
    items.push_back(wronskian_item());
    items.push_back(closed_form_item());

    const auto pts = default_points();
    items.push_back(detail::scan("flux_periodicity", symmetry_tol, pts, periodicity_residual));
    items.push_back(detail::scan("reflection_symmetry", symmetry_tol, pts, reflection_residual));
    items.push_back(detail::scan("partition_identity", partition_tol, pts, partition_residual));
    items.push_back(detail::scan("parseval", parseval_tol, {{2.0, 0.3}, {10.0, 0.7}},
                                 [](double ka, double mu0) { return parseval_residual(ka, mu0); }));
    items.push_back(detail::scan("optical_theorem", optical_tol, pts, optical_residual));

    if (opts.ka || opts.mu0) {
        const std::vector<std::pair<double, double>> one{{opts.ka.value_or(1.0), opts.mu0.value_or(0.0)}};
        const std::string tag = "[ka=" + std::to_string(one[0].first) + ",mu0=" + std::to_string(one[0].second) + "]";
        items.push_back(detail::scan("optical_theorem" + tag, optical_tol, one, optical_residual));
        items.push_back(detail::scan("flux_periodicity" + tag, symmetry_tol, one, periodicity_residual));
        items.push_back(detail::scan("reflection_symmetry" + tag, symmetry_tol, one, reflection_residual));
        items.push_back(detail::scan("partition_identity" + tag, partition_tol, one, partition_residual));
        items.push_back(detail::scan("parseval" + tag, parseval_tol, one,
                                     [](double ka, double mu0) { return parseval_residual(ka, mu0); }));
    }

    if (opts.random_points > 0) {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> ka_dist(0.05, 50.0);
        std::uniform_real_distribution<double> mu_dist(-2.0, 2.0);
        std::vector<std::pair<double, double>> rnd;
        for (int i = 0; i < opts.random_points; ++i) {
            const double ka = ka_dist(rng);
            rnd.emplace_back(ka, mu_dist(rng));
        }
        items.push_back(detail::scan("random:flux_periodicity", symmetry_tol, rnd, periodicity_residual));
        items.push_back(detail::scan("random:reflection_symmetry", symmetry_tol, rnd, reflection_residual));
        items.push_back(detail::scan("random:partition_identity", partition_tol, rnd, partition_residual));
        items.push_back(detail::scan("random:optical_theorem", optical_tol, rnd, optical_residual));
    }
    return items;
}

}  // namespace abscatter::checks
