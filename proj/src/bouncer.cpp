#include "eepq/bouncer.hpp"

#include <cmath>
#include <string>

#include "eepq/airy.hpp"

namespace eepq::bouncer {
namespace {

void require_bound_system(const PhysicalSystem& system) {
    system.validate();
    if (!(system.m_g > 0.0)) throw ParameterError("gravitational mass must be positive for a bound spectrum");
    if (!(system.g > 0.0)) throw ParameterError("g must be positive for a bound spectrum");
}

void require_index(int n) {
    if (n < 1 || n > 50) throw ParameterError("level index must be in [1, 50], got " + std::to_string(n));
}

} // namespace

double alpha(const PhysicalSystem& system) {
    require_bound_system(system);
    return std::cbrt(2.0 * system.m_i * system.force() / (system.hbar * system.hbar));
}

double energy_scale(const PhysicalSystem& system) {
    require_bound_system(system);
    const double f = system.force();
    return std::cbrt(system.hbar * system.hbar * f * f / (2.0 * system.m_i));
}

double probability_outside(int n) {
    require_index(n);
    const double e_tilde = -airy::ai_negative_zero(n);
    return airy::ai_squared_tail(0.0) / airy::ai_squared_tail(-e_tilde);
}

BouncerLevel level(const PhysicalSystem& system, int n) {
    require_index(n);
    const double scale = energy_scale(system);
    BouncerLevel lv;
    lv.n = n;
    lv.e_tilde = -airy::ai_negative_zero(n);
    lv.energy = lv.e_tilde * scale;
    const double a_squared = 1.0 / airy::ai_squared_tail(-lv.e_tilde);
    lv.norm_const = std::sqrt(a_squared);
    lv.p_outside = airy::ai_squared_tail(0.0) * a_squared;
    return lv;
}

double eigenfunction(const BouncerLevel& level, double z_tilde) {
    if (z_tilde < 0.0) return 0.0;
    return level.norm_const * airy::ai(z_tilde - level.e_tilde);
}

cplx stationary_state(const BouncerLevel& level, double z_tilde, double t, const PhysicalSystem& system) {
    return eigenfunction(level, z_tilde) * std::polar(1.0, -level.energy * t / system.hbar);
}

} // namespace eepq::bouncer
