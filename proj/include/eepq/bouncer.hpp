#pragma once

#include "eepq/core.hpp"

namespace eepq::bouncer {

/// One bound state of a particle above an infinite floor in the potential V = F z.
struct BouncerLevel {
    int n = 0;
    double e_tilde = 0.0;    ///< dimensionless energy, minus the n-th zero of Ai
    double energy = 0.0;     ///< e_tilde * (hbar^2 F^2 / 2 m_i)^(1/3)
    double norm_const = 0.0; ///< A_n in the dimensionless coordinate z~ = alpha z
    double p_outside = 0.0;  ///< probability of z~ > e_tilde (beyond the classical turning point)
};

/// alpha = (2 m_i F / hbar^2)^(1/3) with F = m_g g. Requires m_g, g > 0.
double alpha(const PhysicalSystem& system);

/// Energy unit (hbar^2 F^2 / 2 m_i)^(1/3).
double energy_scale(const PhysicalSystem& system);

/// Requires 1 <= n <= 50.
BouncerLevel level(const PhysicalSystem& system, int n);

/// Ratio of the Ai^2 tails from 0 and from -e_tilde; independent of F.
double probability_outside(int n);

/// A_n Ai(z~ - e_tilde); exactly 0 for z~ < 0 (behind the wall).
double eigenfunction(const BouncerLevel& level, double z_tilde);

/// eigenfunction(z~) * exp(-i E_n t / hbar).
cplx stationary_state(const BouncerLevel& level, double z_tilde, double t, const PhysicalSystem& system);

} // namespace eepq::bouncer
