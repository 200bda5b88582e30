#include "eepq/airy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "eepq/core.hpp"

namespace eepq::airy {
namespace {

// Ai(0) and -Ai'(0).
constexpr double kC1 = 0.355028053887817239260063186004;
constexpr double kC2 = 0.258819403792806798405183560189;
constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kSqrtPi = 1.772453850905516027298167483341;
constexpr int kMaxSeriesTerms = 400;
// Above this the Maclaurin form of Ai loses digits to cancellation between f and g.
constexpr double kAiCancellationLimit = 2.0;

struct Pair {
    double y = 0.0;
    double dy = 0.0;
};

struct Maclaurin {
    double f = 0.0, df = 0.0, g = 0.0, dg = 0.0;
};

// f = sum 3^k (1/3)_k x^{3k} / (3k)!,  g = sum 3^k (2/3)_k x^{3k+1} / (3k+1)!
Maclaurin maclaurin(double x) {
    const double x3 = x * x * x;
    Maclaurin s{1.0, 0.0, x, 1.0};
    double tf = 1.0;       // x^{3k} term of f
    double tdf = x * x / 2; // x^{3k+2} term of f' (k >= 1)
    double tg = x;
    double tdg = 1.0;
    s.df = tdf;
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
        const double kk = 3.0 * k;
        tf *= x3 / ((kk + 2.0) * (kk + 3.0));
        tg *= x3 / ((kk + 3.0) * (kk + 4.0));
        tdg *= x3 / ((kk + 1.0) * (kk + 3.0));
        tdf *= x3 / ((kk + 3.0) * (kk + 5.0));
        s.f += tf;
        s.g += tg;
        s.dg += tdg;
        s.df += tdf;
        const double scale = std::abs(s.f) + std::abs(s.g) + std::abs(s.df) + std::abs(s.dg);
        if (std::abs(tf) + std::abs(tg) + std::abs(tdf) + std::abs(tdg) <= 1e-18 * scale) break;
    }
    return s;
}

// Coefficients of the large-argument expansions:
// u_k = (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k) u_{k-1},  v_k = -(6k+1)/(6k-1) u_k.
struct AsymptoticSums {
    double u_alt = 0.0; // sum (-1)^k u_k / zeta^k
    double v_alt = 0.0;
    double u = 0.0;     // sum u_k / zeta^k
    double v = 0.0;
    double u_even = 0.0; // sum (-1)^k u_{2k} / zeta^{2k}
    double u_odd = 0.0;  // sum (-1)^k u_{2k+1} / zeta^{2k+1}
    double v_even = 0.0;
    double v_odd = 0.0;
};

AsymptoticSums asymptotic_sums(double zeta) {
    AsymptoticSums s;
    double uk = 1.0;
    double zk = 1.0;
    double previous = 2.0;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            uk *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
            zk /= zeta;
        }
        const double vk = k == 0 ? 1.0 : -(6.0 * k + 1.0) / (6.0 * k - 1.0) * uk;
        const double tu = uk * zk;
        const double tv = vk * zk;
        const double magnitude = std::max(std::abs(tu), std::abs(tv));
        // optimal truncation: stop once terms stop shrinking
        if (k >= 6 && magnitude > previous) break;
        previous = magnitude;
        const double alt = (k % 2 == 0) ? 1.0 : -1.0;
        s.u_alt += alt * tu;
        s.v_alt += alt * tv;
        s.u += tu;
        s.v += tv;
        const double quarter = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            s.u_even += quarter * tu;
            s.v_even += quarter * tv;
        } else {
            s.u_odd += quarter * tu;
            s.v_odd += quarter * tv;
        }
        if (k >= 6 && magnitude < 1e-18) break;
    }
    return s;
}

Pair ai_asymptotic_positive(double x) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const auto s = asymptotic_sums(zeta);
    const double q = std::sqrt(std::sqrt(x));
    const double e = std::exp(-zeta);
    return {e / (2.0 * kSqrtPi * q) * s.u_alt, -q * e / (2.0 * kSqrtPi) * s.v_alt};
}

Pair bi_asymptotic_positive(double x) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const auto s = asymptotic_sums(zeta);
    const double q = std::sqrt(std::sqrt(x));
    const double e = std::exp(zeta);
    return {e / (kSqrtPi * q) * s.u, q * e / kSqrtPi * s.v};
}

// x <= -kAsymptoticLimit; returns {Ai, Ai'} and {Bi, Bi'}.
std::pair<Pair, Pair> asymptotic_negative(double x) {
    const double z = -x;
    const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    const auto s = asymptotic_sums(zeta);
    const double phase = zeta - std::numbers::pi / 4.0;
    const double c = std::cos(phase);
    const double sn = std::sin(phase);
    const double q = std::sqrt(std::sqrt(z));
    Pair ai{(c * s.u_even + sn * s.u_odd) / (kSqrtPi * q), q * (sn * s.v_even - c * s.v_odd) / kSqrtPi};
    Pair bi{(-sn * s.u_even + c * s.u_odd) / (kSqrtPi * q), q * (c * s.v_even + sn * s.v_odd) / kSqrtPi};
    return {ai, bi};
}

// Integrates y'' = x y from x0 to x1 by local Taylor series.
Pair continue_solution(double x0, Pair start, double x1) {
    constexpr double kMaxStep = 0.5;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(x1 - x0) / kMaxStep)));
    const double h = (x1 - x0) / steps;
    Pair cur = start;
    double xc = x0;
    for (int s = 0; s < steps; ++s) {
        // a_{k+2} = (xc a_k + a_{k-1}) / ((k+2)(k+1))
        double a_km1 = 0.0;
        double a_k = cur.y;
        double a_kp1 = cur.dy;
        double y = a_k + a_kp1 * h;
        double dy = a_kp1;
        double hpow = h; // h^{k+1}
        for (int k = 0; k < 80; ++k) {
            const double a_kp2 = (xc * a_k + a_km1) / ((k + 2.0) * (k + 1.0));
            const double term_dy = (k + 2.0) * a_kp2 * hpow;
            hpow *= h;
            const double term_y = a_kp2 * hpow;
            y += term_y;
            dy += term_dy;
            a_km1 = a_k;
            a_k = a_kp1;
            a_kp1 = a_kp2;
            if (k > 4 && std::abs(term_y) + std::abs(term_dy) <= 1e-18 * (std::abs(y) + std::abs(dy))) break;
        }
        cur = {y, dy};
        xc += h;
    }
    return cur;
}

Pair ai_series(double x) {
    const auto s = maclaurin(x);
    return {kC1 * s.f - kC2 * s.g, kC1 * s.df - kC2 * s.dg};
}

Pair bi_series(double x) {
    const auto s = maclaurin(x);
    return {kSqrt3 * (kC1 * s.f + kC2 * s.g), kSqrt3 * (kC1 * s.df + kC2 * s.dg)};
}

void require_finite(double x) {
    if (!std::isfinite(x)) throw ParameterError("Airy argument must be finite");
}

Pair ai_pair(double x) {
    require_finite(x);
    if (x >= kAsymptoticLimit) return ai_asymptotic_positive(x);
    if (x > kAiCancellationLimit) {
        // Ai is dominant when integrating toward smaller x
        return continue_solution(kAsymptoticLimit, ai_asymptotic_positive(kAsymptoticLimit), x);
    }
    if (std::abs(x) <= kSeriesLimit) return ai_series(x);
    if (x <= -kAsymptoticLimit) return asymptotic_negative(x).first;
    return continue_solution(-kSeriesLimit, ai_series(-kSeriesLimit), x);
}

Pair bi_pair(double x) {
    require_finite(x);
    if (x > kBiOverflow) throw NumericError("Bi overflows for x = " + std::to_string(x));
    if (x >= kAsymptoticLimit) return bi_asymptotic_positive(x);
    // all series terms are positive for x > 0, so no cancellation up to the asymptotic limit
    if (x >= -kSeriesLimit) return bi_series(x);
    if (x <= -kAsymptoticLimit) return asymptotic_negative(x).second;
    return continue_solution(-kSeriesLimit, bi_series(-kSeriesLimit), x);
}

} // namespace

double ai(double x) { return ai_pair(x).y; }
double ai_prime(double x) { return ai_pair(x).dy; }
double bi(double x) { return bi_pair(x).y; }
double bi_prime(double x) { return bi_pair(x).dy; }

AiryValue evaluate(double x) {
    const Pair a = ai_pair(x);
    const Pair b = bi_pair(x);
    return {x, a.y, a.dy, b.y, b.dy};
}

double ai_negative_zero(int n) {
    if (n < 1 || n > 50) throw ParameterError("Airy zero index must be in [1, 50], got " + std::to_string(n));
    const double t = 3.0 * std::numbers::pi * (4.0 * n - 1.0) / 8.0;
    const double seed = -std::pow(t, 2.0 / 3.0);
    const double lo = seed - 0.5;
    const double hi = seed + 0.5;

    double x = seed;
    for (int it = 0; it < 50; ++it) {
        const Pair p = ai_pair(x);
        const double step = p.y / p.dy;
        const double next = x - step;
        if (!(next >= lo && next <= hi)) break;
        x = next;
        if (std::abs(step) <= 1e-15 * std::abs(x)) return x;
    }

    // Newton left the bracket or stalled: bisect.
    double a = lo;
    double b = hi;
    double fa = ai(a);
    if (fa * ai(b) > 0.0) throw NumericError("no sign change bracketing Airy zero " + std::to_string(n));
    for (int it = 0; it < 200 && (b - a) > 1e-15 * std::abs(a); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = ai(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double ai_squared_tail(double x) {
    const Pair p = ai_pair(x);
    return std::max(0.0, p.dy * p.dy - x * p.y * p.y);
}

} // namespace eepq::airy
