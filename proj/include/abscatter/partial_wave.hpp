#pragma once

// Partial-wave scattering of a charged particle from a hard disk threaded by
// an Aharonov-Bohm flux line. The flux enters only through the channel order
// alpha = |m + mu0|. All lengths are in units of the disk radius a, so the
// wavenumber k equals ka.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abscatter/errors.hpp"
#include "abscatter/specfun.hpp"

namespace abscatter {

enum class Statistics { distinguishable, boson, fermion };

inline constexpr std::string_view to_string(Statistics s) noexcept
{
    switch (s) {
        case Statistics::distinguishable: return "distinguishable";
        case Statistics::boson: return "boson";
        case Statistics::fermion: return "fermion";
    }
    return "unknown";
}

inline std::optional<Statistics> parse_statistics(std::string_view name) noexcept
{
    if (name == "distinguishable") return Statistics::distinguishable;
    if (name == "boson") return Statistics::boson;
    if (name == "fermion") return Statistics::fermion;
    return std::nullopt;
}

/// Dimensionless flux mu0 = -Phi/Phi0. Any finite value is allowed.
struct FluxParameter {
    double mu0 = 0.0;

    double order_for_channel(int m) const noexcept { return std::abs(m + mu0); }
};

enum class TruncationMode { automatic, fixed };

/// How the doubly infinite channel sum is cut to m in [-M, M].
struct TruncationPolicy {
    static constexpr double default_tail_tol = 1e-12;

    TruncationMode mode = TruncationMode::automatic;
    int m_max = 0;
    double tail_tol = default_tail_tol;

    static TruncationPolicy automatic(double tol = default_tail_tol)
    {
        return {TruncationMode::automatic, 0, tol};
    }
    static TruncationPolicy fixed(int m_max) { return {TruncationMode::fixed, m_max, default_tail_tol}; }
};

struct ScatteringPoint {
    double ka = 1.0;
    FluxParameter flux{};
    Statistics statistics = Statistics::distinguishable;
    TruncationPolicy truncation{};
};

/// One angular channel. delta is the principal branch (-pi/2, pi/2] of
/// tan(delta) = J/N and is diagnostic; observables use sin2 and sin_cos,
/// both evaluated from the J/N ratio.
struct ChannelShift {
    int m = 0;
    double alpha = 0.0;
    double delta = 0.0;
    double sin2 = 0.0;     // sin^2(delta)
    double sin_cos = 0.0;  // sin(delta) cos(delta)
};

/// Anything mapping (m, mu0, ka) to a ChannelShift can stand in for the hard disk.
template <class P>
concept PhaseShiftProvider = requires(const P& p, int m, FluxParameter flux, double ka) {
    { p(m, flux, ka) } -> std::convertible_to<ChannelShift>;
};

namespace detail {

inline void require_ka(double ka)
{
    if (!std::isfinite(ka) || ka <= 0.0) {
        throw DomainError("ka must be finite and positive, got " + std::to_string(ka));
    }
}

inline void require_point(const ScatteringPoint& point)
{
    require_ka(point.ka);
    if (!std::isfinite(point.flux.mu0)) {
        throw DomainError("mu0 must be finite");
    }
    const auto& t = point.truncation;
    if (t.mode == TruncationMode::fixed && t.m_max < 0) {
        throw DomainError("fixed truncation needs m_max >= 0");
    }
    if (t.mode == TruncationMode::automatic && !(t.tail_tol > 0.0)) {
        throw DomainError("tail_tol must be positive");
    }
}

inline bool channel_included(int m, Statistics s) noexcept
{
    const bool even = (m & 1) == 0;
    switch (s) {
        case Statistics::boson: return even;
        case Statistics::fermion: return !even;
        default: return true;
    }
}

inline double channel_weight(int m, Statistics s) noexcept
{
    if (s == Statistics::distinguishable) return 1.0;
    return channel_included(m, s) ? 2.0 : 0.0;
}

inline double prefactor(Statistics s) noexcept { return s == Statistics::distinguishable ? 4.0 : 16.0; }

}  // namespace detail

/// Builds a ChannelShift from the radial solution values J_alpha(ka), N_alpha(ka).
inline ChannelShift channel_from_pair(int m, double alpha, double j, double n) noexcept
{
    ChannelShift c;
    c.m = m;
    c.alpha = alpha;
    if (n == 0.0) {
        c.delta = std::numbers::pi / 2;
    } else {
        c.delta = std::atan(j / n);
        if (c.delta <= -std::numbers::pi / 2) c.delta += std::numbers::pi;
    }
    if (std::abs(j) <= std::abs(n)) {
        const double t = j / n;  // tan(delta)
        const double d = 1.0 + t * t;
        c.sin2 = t * t / d;
        c.sin_cos = t / d;
    } else {
        const double t = n / j;  // cot(delta)
        const double d = 1.0 + t * t;
        c.sin2 = 1.0 / d;
        c.sin_cos = t / d;
    }
    return c;
}

/// Hard-disk phase shift from R(a) = 0: tan(delta_alpha) = J_alpha(ka) / N_alpha(ka).
inline ChannelShift hard_disk_phase_shift(int m, FluxParameter flux, double ka)
{
    detail::require_ka(ka);
    const double alpha = flux.order_for_channel(m);
    const auto pair = specfun::bessel_pair(alpha, ka);
    return channel_from_pair(m, alpha, pair.j, pair.n);
}

/// sin^2(delta) = J^2 / (J^2 + N^2), always in [0, 1].
inline double channel_sin2(int m, FluxParameter flux, double ka) { return hard_disk_phase_shift(m, flux, ka).sin2; }

struct HardDisk {
    ChannelShift operator()(int m, FluxParameter flux, double ka) const { return hard_disk_phase_shift(m, flux, ka); }
};

/// The channels m in [-M, M] of a resolved truncation.
struct ChannelSet {
    std::vector<ChannelShift> channels;  // ordered by m
    int m_used = 0;
    double tail_bound = 0.0;  // bound on the omitted part of sum_m sin^2(delta)
};

namespace detail {

// Geometric majorant of one side's omitted tail given the last kept and first dropped channel.
inline double side_tail(double last_kept, double first_dropped) noexcept
{
    if (first_dropped == 0.0) return 0.0;
    if (last_kept <= 0.0) return std::numeric_limits<double>::infinity();
    const double ratio = first_dropped / last_kept;
    if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
    return first_dropped / (1.0 - ratio);
}

inline int automatic_cap(double ka) { return static_cast<int>(std::min(10.0 * ka + 1000.0, 1e6)); }

}  // namespace detail

/// Resolves the truncation policy of a point into a concrete channel window.
/// Throws TruncationError if automatic mode cannot meet tail_tol within M <= 10 ka + 1000.
template <PhaseShiftProvider P = HardDisk>
ChannelSet resolve_channels(const ScatteringPoint& point, const P& provider = {})
{
    detail::require_point(point);
    const double ka = point.ka;
    const FluxParameter flux = point.flux;
    const auto& policy = point.truncation;

    // non-negative and negative m kept separately, merged at the end
    std::vector<ChannelShift> pos;
    std::vector<ChannelShift> neg;
    pos.push_back(provider(0, flux, ka));
    auto extend_to = [&](int m_top) {
        for (int m = static_cast<int>(pos.size()); m <= m_top; ++m) {
            pos.push_back(provider(m, flux, ka));
            neg.push_back(provider(-m, flux, ka));
        }
    };

    int big_m = 0;
    double tail = 0.0;
    if (policy.mode == TruncationMode::fixed) {
        big_m = policy.m_max;
        extend_to(big_m + 1);
        const auto& plus_last = pos[big_m];
        const auto& minus_last = big_m == 0 ? pos[0] : neg[big_m - 1];
        tail = detail::side_tail(plus_last.sin2, pos[big_m + 1].sin2)
               + detail::side_tail(minus_last.sin2, neg[big_m].sin2);
    } else {
        const int cap = detail::automatic_cap(ka);
        big_m = static_cast<int>(std::ceil(ka)) + 8;
        for (;;) {
            if (big_m > cap) {
                throw TruncationError("automatic truncation did not reach tail_tol "
                                          + std::to_string(policy.tail_tol) + " within M = "
                                          + std::to_string(cap) + " at ka = " + std::to_string(ka),
                                      cap);
            }
            extend_to(big_m + 1);
            const double plus_last = pos[big_m].sin2;
            const double minus_last = neg[big_m - 1].sin2;
            const bool decreasing = plus_last <= pos[big_m - 1].sin2
                                    && minus_last <= (big_m >= 2 ? neg[big_m - 2].sin2 : pos[0].sin2);
            tail = detail::side_tail(plus_last, pos[big_m + 1].sin2)
                   + detail::side_tail(minus_last, neg[big_m].sin2);
            if (decreasing && tail <= policy.tail_tol) {
                break;
            }
            ++big_m;
        }
    }

    ChannelSet out;
    out.m_used = big_m;
    out.tail_bound = tail;
    out.channels.reserve(2 * static_cast<std::size_t>(big_m) + 1);
    for (int m = big_m; m >= 1; --m) {
        out.channels.push_back(neg[m - 1]);
    }
    for (int m = 0; m <= big_m; ++m) {
        out.channels.push_back(pos[m]);
    }
    return out;
}

struct CrossSectionResult {
    double sigma_t = 0.0;     // sigma_t / a
    double normalized = 0.0;  // sigma_t / 4a
    std::vector<ChannelShift> channels;
    int m_used = 0;
    double tail_bound = 0.0;
};

/// sigma_t/a = (4/ka) sum sin^2 (distinguishable), (16/ka) over even m (bosons) or odd m (fermions).
inline CrossSectionResult cross_section_from_channels(const ChannelSet& set, double ka, Statistics statistics)
{
    detail::require_ka(ka);
    specfun::detail::CompensatedSum sum;
    for (const auto& c : set.channels) {
        if (detail::channel_included(c.m, statistics)) {
            sum.add(c.sin2);
        }
    }
    CrossSectionResult r;
    r.sigma_t = detail::prefactor(statistics) / ka * sum.value();
    r.normalized = r.sigma_t / 4.0;
    r.channels = set.channels;
    r.m_used = set.m_used;
    r.tail_bound = set.tail_bound;
    return r;
}

template <PhaseShiftProvider P = HardDisk>
CrossSectionResult total_cross_section(const ScatteringPoint& point, const P& provider = {})
{
    return cross_section_from_channels(resolve_channels(point, provider), point.ka, point.statistics);
}

struct AmplitudeSample {
    double phi = 0.0;            // reduced to (-pi, pi]
    std::complex<double> f{};    // units of sqrt(a)
};

inline double reduce_angle(double phi) noexcept
{
    double r = std::remainder(phi, 2.0 * std::numbers::pi);
    if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
    return r;
}

/// Scattering amplitude over a fixed channel window. For identical particles
/// evaluates f(phi) +- f(phi + pi), i.e. the parity-filtered, doubled sum.
class ScatteringAmplitude {
  public:
    ScatteringAmplitude(ChannelSet set, double ka, Statistics statistics)
        : set_(std::move(set)), ka_(ka), statistics_(statistics)
    {
        detail::require_ka(ka);
    }

    template <PhaseShiftProvider P = HardDisk>
    explicit ScatteringAmplitude(const ScatteringPoint& point, const P& provider = {})
        : ScatteringAmplitude(resolve_channels(point, provider), point.ka, point.statistics)
    {
    }

    AmplitudeSample operator()(double phi) const
    {
        using namespace std::complex_literals;
        const double reduced = reduce_angle(phi);
        std::complex<double> acc{};
        for (const auto& c : set_.channels) {
            const double w = detail::channel_weight(c.m, statistics_);
            if (w == 0.0) continue;
            // e^{i delta} sin(delta) = sin cos + i sin^2
            acc += w * std::complex<double>(c.sin_cos, c.sin2) * std::polar(1.0, c.m * reduced);
        }
        const std::complex<double> lead = 2.0i * std::polar(1.0, -std::numbers::pi / 4)
                                          / std::sqrt(2.0 * std::numbers::pi * ka_);
        return {reduced, lead * acc};
    }

    /// sigma(phi) = |f|^2, or |f(phi) +- f(phi + pi)|^2 for identical particles.
    double differential(double phi) const { return std::norm((*this)(phi).f); }

    const ChannelSet& channels() const noexcept { return set_; }
    double ka() const noexcept { return ka_; }
    Statistics statistics() const noexcept { return statistics_; }

  private:
    ChannelSet set_;
    double ka_;
    Statistics statistics_;
};

inline AmplitudeSample amplitude(const ScatteringPoint& point, double phi) { return ScatteringAmplitude(point)(phi); }

inline double differential_cross_section(const ScatteringPoint& point, double phi)
{
    return ScatteringAmplitude(point).differential(phi);
}

struct OpticalTheoremCheck {
    double lhs = 0.0;       // sigma_t from the channel sum
    double rhs = 0.0;       // (2 sqrt(2 pi) / sqrt(k)) Im[e^{-i pi/4} f(0)]
    double residual = 0.0;  // |lhs - rhs| / lhs
};

/// Optical theorem with the forward amplitude rotated by e^{-i pi/4}, which
/// makes it an identity for f(phi) = (2/sqrt(2 pi k)) sum e^{i(delta - pi/4)} i sin(delta) e^{i m phi}.
inline OpticalTheoremCheck optical_theorem_check(const ScatteringPoint& point)
{
    if (point.statistics != Statistics::distinguishable) {
        throw DomainError("optical theorem check requires distinguishable statistics");
    }
    const ScatteringAmplitude amp(point);
    const double k = point.ka;
    OpticalTheoremCheck out;
    out.lhs = cross_section_from_channels(amp.channels(), k, point.statistics).sigma_t;
    const std::complex<double> forward = std::polar(1.0, -std::numbers::pi / 4) * amp(0.0).f;
    out.rhs = 2.0 * std::sqrt(2.0 * std::numbers::pi) / std::sqrt(k) * forward.imag();
    out.residual = out.lhs > 0.0 ? std::abs(out.lhs - out.rhs) / out.lhs : std::abs(out.rhs);
    return out;
}

/// Closed-form limits of the flux-free hard disk, in units of a.
struct AsymptoticReferences {
    /// pi^2 / (ka ln^2(ka/2)): the m = 0 channel with tan(delta0) ~ pi / (2 ln(ka/2)).
    double low_energy_sigma = 0.0;
    /// Only meaningful for ka < 0.5.
    bool low_energy_valid = false;
    /// 8 / (pi ka ln(ka)), the alternative printed form; kept for side-by-side output.
    double low_energy_sigma_alt = 0.0;
    /// Short-wavelength limit sigma_t -> 4a.
    double high_energy_sigma = 4.0;
};

inline constexpr double low_energy_validity_limit = 0.5;

inline AsymptoticReferences asymptotic_references(double ka)
{
    detail::require_ka(ka);
    AsymptoticReferences r;
    const double log_half = std::log(ka / 2.0);
    r.low_energy_sigma = std::numbers::pi * std::numbers::pi / (ka * log_half * log_half);
    r.low_energy_valid = ka < low_energy_validity_limit;
    r.low_energy_sigma_alt = 8.0 / (std::numbers::pi * ka * std::log(ka));
    return r;
}

}  // namespace abscatter
