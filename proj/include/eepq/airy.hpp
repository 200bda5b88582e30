#pragma once

namespace eepq::airy {

/// Ai, Ai', Bi, Bi' at one real argument.
struct AiryValue {
    double x = 0.0;
    double ai = 0.0;
    double ai_prime = 0.0;
    double bi = 0.0;
    double bi_prime = 0.0;

    /// ai * bi' - ai' * bi; equals 1/pi analytically.
    [[nodiscard]] double wronskian() const noexcept { return ai * bi_prime - ai_prime * bi; }
};

/// Maclaurin series is used for |x| <= kSeriesLimit.
inline constexpr double kSeriesLimit = 5.0;
/// Asymptotic expansions are used directly for |x| >= kAsymptoticLimit; the band
/// in between is reached by Taylor continuation of y'' = x y.
inline constexpr double kAsymptoticLimit = 9.0;
/// Bi overflows a double beyond this argument.
inline constexpr double kBiOverflow = 104.0;

double ai(double x);
double ai_prime(double x);
/// Throws NumericError for x > kBiOverflow.
double bi(double x);
double bi_prime(double x);
/// All four values. Throws NumericError where Bi overflows.
AiryValue evaluate(double x);

/// n-th negative zero of Ai (n = 1 gives -2.33810741...), 1 <= n <= 50.
double ai_negative_zero(int n);

/// Integral of Ai(t)^2 from x to infinity, via Ai'(x)^2 - x Ai(x)^2.
double ai_squared_tail(double x);

} // namespace eepq::airy
