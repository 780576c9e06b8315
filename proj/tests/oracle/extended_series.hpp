#pragma once

// Test-only oracle: ascending-series Bessel functions in 50-digit arithmetic.
// Integer orders use the series with the logarithmic term; other orders use
// the J_{+nu}/J_{-nu} connection, which is harmless at this precision.

#include <cmath>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

inline Real pi() { return boost::math::constants::pi<Real>(); }
inline Real euler_gamma() { return boost::math::constants::euler<Real>(); }

/// J_nu(x) by its ascending series, any real nu not a negative integer.
inline Real bessel_j(const Real& nu, const Real& x)
{
    const Real half = x / 2;
    const Real q = -half * half;
    Real term = pow(half, nu) / boost::math::tgamma(nu + 1);
    Real sum = term;
    for (int k = 1; k < 2000; ++k) {
        term *= q / (k * (k + nu));
        sum += term;
        if (k > 10 && abs(term) < abs(sum) * Real("1e-48")) break;
    }
    return sum;
}

/// N_n(x) for integer n >= 0 from the logarithmic series.
inline Real bessel_n_integer(int n, const Real& x)
{
    const Real half = x / 2;
    const Real g = euler_gamma();
    // finite sum
    Real finite = 0;
    for (int k = 0; k < n; ++k) {
        finite += boost::math::factorial<Real>(n - k - 1) / boost::math::factorial<Real>(k) * pow(half, 2 * k - n);
    }
    // digamma(m + 1) = H_m - gamma
    auto psi1 = [&](int m) {
        Real h = 0;
        for (int i = 1; i <= m; ++i) h += Real(1) / i;
        return h - g;
    };
    const Real q = -half * half;
    Real infinite = 0;
    Real power = pow(half, n) / boost::math::factorial<Real>(n);  // (x/2)^n (-x^2/4)^k / (k!(n+k)!)
    for (int k = 0; k < 2000; ++k) {
        if (k > 0) power *= q / (k * Real(n + k));
        const Real t = (psi1(k) + psi1(n + k)) * power;
        infinite += t;
        if (k > 10 && abs(t) < Real("1e-48") * (1 + abs(infinite))) break;
    }
    return -finite / pi() + 2 / pi() * log(half) * bessel_j(Real(n), x) - infinite / pi();
}

/// N_nu(x): integer orders via the log series, others via the connection formula.
inline Real bessel_n(const Real& nu, const Real& x)
{
    const Real r = round(nu);
    if (nu == r) return bessel_n_integer(static_cast<int>(r), x);
    return (bessel_j(nu, x) * cos(nu * pi()) - bessel_j(-nu, x)) / sin(nu * pi());
}

}  // namespace oracle
