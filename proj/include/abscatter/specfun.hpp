#pragma once

// Cylindrical Bessel functions J_nu(x) and N_nu(x) (Neumann / Y) for real
// order nu >= 0 and real argument x > 0.
//
// Evaluation regimes:
//   closed_form         half-integer order, trigonometric seeds plus upward
//                       recurrence (used while the recurrence is stable)
//   asymptotic          Hankel large-argument expansion, x >= 30 and nu^2 <= x
//   series              x <= 2: ascending series for J; Temme's series for
//                       N_mu, N_{mu+1} (|mu| <= 1/2) near integer order
//   connection          x <= 2 away from integer order: N from the
//                       J_{+nu}/J_{-nu} connection formula
//   continued_fraction  everything else: CF1 + Miller-style downward
//                       recurrence for J, Steed's CF2 for N, normalised by
//                       the Wronskian
// In the series/connection regimes N is carried from the reduced order mu to
// nu by upward recurrence, which is stable for the second kind.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include "abscatter/errors.hpp"

namespace abscatter::specfun {

enum class OrderClass { integer, half_integer, generic };

enum class BesselRegime { series, connection, continued_fraction, asymptotic, closed_form };

inline constexpr std::string_view to_string(BesselRegime r) noexcept
{
    switch (r) {
        case BesselRegime::series: return "series";
        case BesselRegime::connection: return "connection";
        case BesselRegime::continued_fraction: return "continued_fraction";
        case BesselRegime::asymptotic: return "asymptotic";
        case BesselRegime::closed_form: return "closed_form";
    }
    return "unknown";
}

/// Orders within this distance of an integer / half-integer are classified as such.
inline constexpr double classification_tolerance = 1e-12;

/// The connection formula is never used within this distance of an integer order.
inline constexpr double integer_guard_band = 1e-3;

inline constexpr double series_argument_limit = 2.0;
inline constexpr double asymptotic_argument_floor = 30.0;

class BesselOrder {
  public:
    explicit BesselOrder(double alpha) : alpha_(alpha)
    {
        if (!std::isfinite(alpha) || alpha < 0.0) {
            throw DomainError("Bessel order must be finite and non-negative, got "
                              + std::to_string(alpha));
        }
    }

    double value() const noexcept { return alpha_; }

    double distance_to_integer() const noexcept { return std::abs(alpha_ - std::round(alpha_)); }

    OrderClass classify() const noexcept
    {
        if (distance_to_integer() < classification_tolerance) {
            return OrderClass::integer;
        }
        const double shifted = alpha_ - 0.5;
        if (std::abs(shifted - std::round(shifted)) < classification_tolerance) {
            return OrderClass::half_integer;
        }
        return OrderClass::generic;
    }

  private:
    double alpha_;
};

struct BesselPair {
    double j;
    double n;
    BesselRegime regime;
};

namespace detail {

using std::numbers::pi;

inline constexpr double eps = std::numeric_limits<double>::epsilon();
inline constexpr double tiny = 1e-300;
inline constexpr int max_iterations = 200000;

inline void require_argument(double x)
{
    if (!std::isfinite(x) || x <= 0.0) {
        throw DomainError("Bessel argument must be finite and positive, got " + std::to_string(x));
    }
}

/// Neumaier compensated summation.
class CompensatedSum {
  public:
    void add(double v) noexcept
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// sin(pi*nu), cos(pi*nu) with the integer part removed exactly first
inline void sincos_pi(double nu, double& s, double& c) noexcept
{
    const double whole = std::round(nu);
    const double frac = nu - whole;
    const double sign = std::fmod(whole, 2.0) == 0.0 ? 1.0 : -1.0;
    s = sign * std::sin(pi * frac);
    c = sign * std::cos(pi * frac);
}

/// (x/2)^nu / Gamma(nu + 1); nu may be a negative non-integer.
inline double series_leading_term(double nu, double x)
{
    const double half = 0.5 * x;
    if (nu < 170.0) {
        return std::pow(half, nu) / std::tgamma(nu + 1.0);
    }
    return std::exp(nu * std::log(half) - std::lgamma(nu + 1.0));
}

/// Ascending power series for J_nu(x), valid for any real non-negative-integer-free nu.
/// Only well conditioned for small x (x <= 2 here).
inline double ascending_series(double nu, double x)
{
    double term = series_leading_term(nu, x);
    if (term == 0.0 || !std::isfinite(term)) {
        return term;
    }
    const double q = -0.25 * x * x;
    CompensatedSum sum;
    sum.add(term);
    for (int k = 1; k < 1000; ++k) {
        term *= q / (k * (k + nu));
        sum.add(term);
        if (k > -nu && std::abs(term) <= 0.25 * eps * std::abs(sum.value())) {
            break;
        }
    }
    return sum.value();
}

/// N_nu(x) = (J_nu cos(nu pi) - J_{-nu}) / sin(nu pi). Refuses orders inside the guard band.
inline double connection_neumann(double nu, double x)
{
    if (std::abs(nu - std::round(nu)) < integer_guard_band) {
        throw PrecisionError("connection formula requested within the integer guard band (order "
                             + std::to_string(nu) + ")");
    }
    double s = 0.0;
    double c = 0.0;
    sincos_pi(nu, s, c);
    return (ascending_series(nu, x) * c - ascending_series(-nu, x)) / s;
}

// Taylor coefficients of 1/Gamma(1 + z) about z = 0.
inline constexpr std::array<double, 29> rgamma1p_taylor = {
    1.0,
    0.5772156649015328606065121,
    -0.6558780715202538810770195,
    -0.04200263503409523552900393,
    0.1665386113822914895017008,
    -0.0421977345555443367482083,
    -0.009621971527876973562114922,
    0.00721894324666309954239501,
    -0.001165167591859065112113971,
    -0.00021524167411495097281573,
    0.0001280502823881161861531986,
    -0.00002013485478078823865568939,
    -0.000001250493482142670657345359,
    0.00000113302723198169588237413,
    -0.0000002056338416977607103450154,
    6.116095104481415817862499e-9,
    5.002007644469222930055665e-9,
    -1.181274570487020144588127e-9,
    1.04342671169110051049154e-10,
    7.782263439905071254049937e-12,
    -3.696805618642205708187816e-12,
    5.100370287454475979015481e-13,
    -2.05832605356650678322243e-14,
    -5.348122539423017982370017e-15,
    1.226778628238260790158894e-15,
    -1.181259301697458769513765e-16,
    1.186692254751600332579777e-18,
    1.412380655318031781555804e-18,
    -2.298745684435370206592479e-19,
};

struct NeumannSeeds {
    double n_mu;
    double n_mu1;
};

/// Temme's series for N_mu(x) and N_{mu+1}(x), |mu| <= 1/2, small x.
/// Uniform through mu = 0, so integer orders need no special casing.
inline NeumannSeeds temme_neumann(double mu, double x)
{
    // even / odd parts of 1/Gamma(1+mu) in mu
    const double mu2 = mu * mu;
    double even = 0.0;
    double odd = 0.0;
    for (int k = static_cast<int>(rgamma1p_taylor.size()) - 1; k >= 0; --k) {
        if (k % 2 == 0) {
            even = even * mu2 + rgamma1p_taylor[k];
        } else {
            odd = odd * mu2 + rgamma1p_taylor[k];
        }
    }
    const double gam1 = -odd;
    const double gam2 = even;
    const double gampl = even + mu * odd;  // 1/Gamma(1+mu)
    const double gammi = even - mu * odd;  // 1/Gamma(1-mu)

    const double x2 = 0.5 * x;
    const double pimu = pi * mu;
    const double fact = std::abs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
    const double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < eps ? 1.0 : std::sinh(e) / e;
    double ff = 2.0 / pi * fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    e = std::exp(e);
    double p = e / (gampl * pi);
    double q = 1.0 / (e * pi * gammi);
    const double pimu2 = 0.5 * pimu;
    const double fact3 = std::abs(pimu2) < eps ? 1.0 : std::sin(pimu2) / pimu2;
    const double r = pi * pimu2 * fact3 * fact3;
    double c = 1.0;
    const double dd = -x2 * x2;
    CompensatedSum sum;
    sum.add(ff + r * q);
    CompensatedSum sum1;
    sum1.add(p);
    for (int i = 1; i < 1000; ++i) {
        ff = (i * ff + p + q) / (i * i - mu2);
        c *= dd / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * (ff + r * q);
        sum.add(del);
        sum1.add(c * p - i * del);
        if (std::abs(del) < (1.0 + std::abs(sum.value())) * 0.25 * eps) {
            break;
        }
    }
    return {-sum.value(), -2.0 / x * sum1.value()};
}

inline double recur_neumann_upward(double mu, int steps, double x, NeumannSeeds seeds)
{
    double lo = seeds.n_mu;
    double hi = seeds.n_mu1;
    for (int i = 1; i <= steps; ++i) {
        const double next = 2.0 * (mu + i) / x * hi - lo;
        if (!std::isfinite(next) && i < steps) {
            return next;  // |N| only grows with order from here
        }
        lo = hi;
        hi = next;
    }
    return lo;
}

inline BesselPair small_argument_pair(double nu, double x)
{
    const int steps = static_cast<int>(std::floor(nu + 0.5));
    const double mu = nu - steps;
    NeumannSeeds seeds{};
    BesselRegime regime = BesselRegime::series;
    if (std::abs(mu) >= integer_guard_band) {
        seeds = {connection_neumann(mu, x), connection_neumann(mu + 1.0, x)};
        regime = BesselRegime::connection;
    } else {
        seeds = temme_neumann(mu, x);
    }
    return {ascending_series(nu, x), recur_neumann_upward(mu, steps, x, seeds), regime};
}

/// Half-integer order from the elementary closed forms of order +-1/2 and upward recurrence.
inline BesselPair half_integer_pair(double nu, double x)
{
    const int steps = static_cast<int>(std::lround(nu - 0.5));
    const double pref = std::sqrt(2.0 / (pi * x));
    const double s = std::sin(x);
    const double c = std::cos(x);
    double j_lo = pref * c;  // J_{-1/2}
    double j_hi = pref * s;  // J_{1/2}
    double n_lo = pref * s;  // N_{-1/2}
    double n_hi = -pref * c; // N_{1/2}
    for (int k = 0; k < steps; ++k) {
        const double factor = (2.0 * k + 1.0) / x;
        const double j_next = factor * j_hi - j_lo;
        const double n_next = factor * n_hi - n_lo;
        j_lo = j_hi;
        j_hi = j_next;
        n_lo = n_hi;
        n_hi = n_next;
    }
    return {j_hi, n_hi, BesselRegime::closed_form};
}

/// Hankel's large-argument expansion. Caller guarantees x >= 30 and nu^2 <= x.
inline BesselPair hankel_pair(double nu, double x)
{
    const double mu4 = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    for (int k = 1; k < 100; ++k) {
        const double prev = std::abs(term);
        const double odd = 2.0 * k - 1.0;
        term *= (mu4 - odd * odd) / (8.0 * k * x);
        if (std::abs(term) > prev) {
            break;
        }
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            default: p += term; break;
        }
        if (std::abs(term) < 1e-3 * eps) {
            break;
        }
    }
    // chi = x - (nu/2 + 1/4) pi, with the pi-multiple reduced before scaling
    double t = 0.5 * nu + 0.25;
    t -= 2.0 * std::floor(0.5 * t);
    const double cphi = std::cos(pi * t);
    const double sphi = std::sin(pi * t);
    const double sx = std::sin(x);
    const double cx = std::cos(x);
    const double cchi = cx * cphi + sx * sphi;
    const double schi = sx * cphi - cx * sphi;
    const double pref = std::sqrt(2.0 / (pi * x));
    return {pref * (p * cchi - q * schi), pref * (p * schi + q * cchi), BesselRegime::asymptotic};
}

/// CF1 for J'/J, downward recurrence to mu <= x + 1/2, Steed's CF2 at mu, Wronskian normalisation.
inline BesselPair steed_pair(double nu, double x)
{
    const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
    const double mu = nu - nl;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    const double w = xi2 / pi;

    // CF1 (modified Lentz): h = J'_nu / J_nu
    int isign = 1;
    double h = std::max(nu * xi, tiny);
    double b = xi2 * nu;
    double d = 0.0;
    double c = h;
    bool converged = false;
    for (int i = 0; i < max_iterations; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < tiny) d = tiny;
        c = b - 1.0 / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0) isign = -isign;
        if (std::abs(del - 1.0) <= eps) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw PrecisionError("Bessel CF1 failed to converge for x = " + std::to_string(x));
    }

    // unnormalised downward recurrence nu -> mu, rescaled to stay in range
    constexpr double seed = 1e-30;
    constexpr double ceiling = 1e250;
    constexpr double shrink = 1e-250;
    double jl = isign * seed;
    double jpl = h * jl;
    const double j_nu_seed = jl;
    int rescales = 0;
    double fact = nu * xi;
    for (int l = nl - 1; l >= 0; --l) {
        const double jt = fact * jl + jpl;
        fact -= xi;
        jpl = fact * jt - jl;
        jl = jt;
        if (std::abs(jl) > ceiling) {
            jl *= shrink;
            jpl *= shrink;
            ++rescales;
        }
    }
    if (jl == 0.0) jl = eps;
    const double f = jpl / jl;

    // CF2 (Steed): p + iq = (J' + iN') / (J + iN) at order mu
    double a = 0.25 - mu * mu;
    double p = -0.5 * xi;
    double q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    double fct = a * xi / (p * p + q * q);
    double cr = br + q * fct;
    double ci = bi + p * fct;
    double den = br * br + bi * bi;
    double dr = br / den;
    double di = -bi / den;
    double dlr = cr * dr - ci * di;
    double dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    converged = false;
    for (int i = 2; i < max_iterations; ++i) {
        a += 2 * (i - 1);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if (std::abs(dr) + std::abs(di) < tiny) dr = tiny;
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if (std::abs(cr) + std::abs(ci) < tiny) cr = tiny;
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (std::abs(dlr - 1.0) + std::abs(dli) < eps) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw PrecisionError("Bessel CF2 failed to converge for x = " + std::to_string(x));
    }

    const double gam = (p - f) / q;
    const double jmu = std::copysign(std::sqrt(w / ((p - f) * gam + q)), jl);
    const double nmu = jmu * gam;
    const double nmup = nmu * (p + q / gam);
    const double nmu1 = mu * xi * nmu - nmup;

    double j = j_nu_seed * (jmu / jl);
    for (int r = 0; r < rescales && j != 0.0; ++r) {
        j *= shrink;
    }
    return {j, recur_neumann_upward(mu, nl, x, {nmu, nmu1}), BesselRegime::continued_fraction};
}

}  // namespace detail

/// J_nu(x) and N_nu(x) together; the regime tag records which path produced them.
/// Values outside the double range saturate (J -> 0, N -> -inf) for nu >> x.
inline BesselPair bessel_pair(BesselOrder order, double x)
{
    detail::require_argument(x);
    const double nu = order.value();
    if (order.classify() == OrderClass::half_integer) {
        const double exact = std::round(nu - 0.5) + 0.5;
        if (exact < 1.0 || exact <= x) {
            return detail::half_integer_pair(exact, x);
        }
    }
    if (x >= asymptotic_argument_floor && nu * nu <= x) {
        return detail::hankel_pair(nu, x);
    }
    if (x <= series_argument_limit) {
        return detail::small_argument_pair(nu, x);
    }
    return detail::steed_pair(nu, x);
}

inline BesselPair bessel_pair(double alpha, double x) { return bessel_pair(BesselOrder{alpha}, x); }

inline double bessel_j(BesselOrder order, double x) { return bessel_pair(order, x).j; }
inline double bessel_j(double alpha, double x) { return bessel_pair(BesselOrder{alpha}, x).j; }

inline double bessel_n(BesselOrder order, double x) { return bessel_pair(order, x).n; }
inline double bessel_n(double alpha, double x) { return bessel_pair(BesselOrder{alpha}, x).n; }

namespace detail {

/// Relative Wronskian residual |J N' - J' N - 2/(pi x)| / (2/(pi x)).
/// Derivatives come from the three-term recurrences, so every value is an independent evaluation.
inline double wronskian_residual(double nu, double x)
{
    const BesselPair c = bessel_pair(nu, x);
    const BesselPair up = bessel_pair(nu + 1.0, x);
    double jd = 0.0;
    double nd = 0.0;
    if (nu >= 1.0) {
        const BesselPair down = bessel_pair(nu - 1.0, x);
        jd = 0.5 * (down.j - up.j);
        nd = 0.5 * (down.n - up.n);
    } else {
        jd = nu / x * c.j - up.j;
        nd = nu / x * c.n - up.n;
    }
    const double target = 2.0 / (pi * x);
    return std::abs(c.j * nd - jd * c.n - target) / target;
}

}  // namespace detail

}  // namespace abscatter::specfun
