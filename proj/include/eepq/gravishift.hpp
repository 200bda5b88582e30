#pragma once

#include <complex>

#include "eepq/core.hpp"

namespace eepq::gravishift {

/// Parameters of the map between the free-fall frame (z', t') and the
/// stationary frame (z, t), z' = z + v t + a t^2 / 2, t' = t.
struct FrameTransform {
    double v = 0.0;
    double a = 0.0;
    double m_i = 1.0;
    double hbar = 1.0;

    static FrameTransform from(const PhysicalSystem& system);

    /// z' - z at time t.
    [[nodiscard]] double shift(double t) const noexcept { return v * t + 0.5 * a * t * t; }
};

/// Interferometer with beams separated by `height` over `horizontal_length`.
class InterferometerGeometry {
public:
    InterferometerGeometry(double wavelength, double height, double horizontal_length);

    [[nodiscard]] double wavelength() const noexcept { return wavelength_; }
    [[nodiscard]] double height() const noexcept { return height_; }
    [[nodiscard]] double horizontal_length() const noexcept { return length_; }
    [[nodiscard]] double area() const noexcept { return height_ * length_; }

private:
    double wavelength_;
    double height_;
    double length_;
};

/// Free-frame plane wave exp(i (k' z' - w' t')) with hbar w' = p'^2 / (2 m_i).
struct PlaneWaveState {
    double p_prime = 0.0;
    double omega_prime = 0.0;

    static PlaneWaveState from_momentum(double p_prime, double m_i, double hbar);
};

/// Phase S(z', t') carried by the free-frame solution:
/// S = -(m v / hbar)(z' - v t'/2) - (m a t' / hbar)(z' - v t' - a t'^2 / 3).
double phase_s(const FrameTransform& ft, double z_prime, double t_prime);

/// Phase in stationary coordinates:
/// -(1/hbar) [m v (z + v t/2) + m a t (z + v t/2 + a t^2/6)].
double stationary_phase(const FrameTransform& ft, double z, double t);

/// Samples the free solution at the shifted points, psi_free(z + v t + a t^2/2, t).
template <class FreeFn>
ComplexField sample_shifted(const FrameTransform& ft, const Grid& grid, double t, FreeFn&& psi_free) {
    const double s = ft.shift(t);
    return ComplexField::sample(grid, [&](double z) { return cplx(psi_free(z + s, t)); });
}

/// Multiplies a field already sampled as psi_free(z + v t + a t^2/2, t) by
/// exp(i stationary_phase(z, t)). Preserves |psi| pointwise.
ComplexField to_stationary_frame(const FrameTransform& ft, const ComplexField& shifted_free, double t);

/// As above, but throws ParameterError unless the field lives on `stationary`.
ComplexField to_stationary_frame(const FrameTransform& ft, const ComplexField& shifted_free, double t,
                                 const Grid& stationary);

/// The a = 0 special case; throws ParameterError if ft.a != 0.
ComplexField galilean_boost(const FrameTransform& ft, const ComplexField& shifted_free, double t);

/// Stationary-frame solution psi(z, t) built from a free-frame solution psi_free(z', t').
template <class FreeFn>
auto stationary_solution(const FrameTransform& ft, FreeFn psi_free) {
    return [ft, psi_free](double z, double t) {
        return cplx(psi_free(z + ft.shift(t), t)) * std::polar(1.0, stationary_phase(ft, z, t));
    };
}

/// exp(i (k' z' - w' t')) in the free frame.
cplx plane_wave_free(const PlaneWaveState& pw, double hbar, double z_prime, double t_prime);

/// The transformed plane wave in stationary coordinates, written out term by term:
/// (k' - m v/hbar) z - (w' - v [k' - m v/(2 hbar)]) t - (m a t/hbar) z + (a t^2/2)(k' - m v/hbar - m a t/(3 hbar)).
cplx plane_wave_stationary(const PlaneWaveState& pw, const FrameTransform& ft, double z, double t);

/// p(t) = p' - m_i (v + a t).
double momentum_eigenvalue(const PlaneWaveState& pw, const FrameTransform& ft, double t);

/// E(z, t) = p(t)^2 / (2 m_i) + m_i a z.
double energy_eigenvalue(const PlaneWaveState& pw, const FrameTransform& ft, const PhysicalSystem& system, double z,
                         double t);

/// Frequency difference between detectors separated by z: m_i a z / hbar.
double frequency_shift(const PhysicalSystem& system, double z);

/// Mass attributed to a quantum of energy hbar w': hbar w' / c^2.
/// This imports a relativistic relation into the nonrelativistic result.
double effective_mass(double omega_prime, double hbar, double c);

/// Delta w / w' = a z / c^2, obtained from frequency_shift with m_i replaced by effective_mass.
double redshift_ratio(double a, double z, double c);

/// Interferometer phase m_i^2 a lambda A / (2 pi hbar^2), radians.
double cow_phase_shift(const InterferometerGeometry& geom, const PhysicalSystem& system);

/// Horizontal speed 2 pi hbar / (m_i lambda) of the beam particles.
double beam_velocity(const InterferometerGeometry& geom, const PhysicalSystem& system);

/// Same phase via |m_i a t z / hbar| with transit time t = d / v.
double cow_phase_shift_transit(const InterferometerGeometry& geom, const PhysicalSystem& system);

/// Falling-box eigenstate in stationary coordinates; 0 outside the moving window
/// [-v t - a t^2/2, L - v t - a t^2/2]. Throws ParameterError for n <= 0 or L <= 0.
cplx falling_box_state(int n, double box_length, const FrameTransform& ft, const PhysicalSystem& system, double z,
                       double t);

struct BoxEigenvalues {
    double momentum = 0.0; ///< n h / 2L - m_i (v + a t)
    double energy = 0.0;   ///< momentum^2 / 2 m_i + m_i a z
};

BoxEigenvalues box_eigenvalues(int n, double box_length, const FrameTransform& ft, const PhysicalSystem& system,
                               double z, double t);

} // namespace eepq::gravishift
