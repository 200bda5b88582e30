#include "eepq/gravishift.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace eepq::gravishift {
namespace {

void require_box(int n, double box_length) {
    if (n <= 0) throw ParameterError("box level must be positive, got " + std::to_string(n));
    if (!(box_length > 0.0) || !std::isfinite(box_length)) throw ParameterError("box length must be positive");
}

} // namespace

FrameTransform FrameTransform::from(const PhysicalSystem& system) {
    system.validate();
    return {system.v, system.a, system.m_i, system.hbar};
}

InterferometerGeometry::InterferometerGeometry(double wavelength, double height, double horizontal_length)
    : wavelength_(wavelength), height_(height), length_(horizontal_length) {
    for (double x : {wavelength, height, horizontal_length})
        if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError("interferometer dimensions must be positive");
}

PlaneWaveState PlaneWaveState::from_momentum(double p_prime, double m_i, double hbar) {
    if (!(m_i > 0.0) || !(hbar > 0.0)) throw ParameterError("plane wave needs positive m_i and hbar");
    return {p_prime, p_prime * p_prime / (2.0 * m_i * hbar)};
}

double phase_s(const FrameTransform& ft, double z_prime, double t_prime) {
    const double m = ft.m_i / ft.hbar;
    return -m * ft.v * (z_prime - 0.5 * ft.v * t_prime) -
           m * ft.a * t_prime * (z_prime - ft.v * t_prime - ft.a * t_prime * t_prime / 3.0);
}

double stationary_phase(const FrameTransform& ft, double z, double t) {
    const double m = ft.m_i / ft.hbar;
    const double drift = z + 0.5 * ft.v * t;
    return -m * (ft.v * drift + ft.a * t * (drift + ft.a * t * t / 6.0));
}

ComplexField to_stationary_frame(const FrameTransform& ft, const ComplexField& shifted_free, double t) {
    ComplexField out = shifted_free;
    const Grid& grid = out.grid();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= std::polar(1.0, stationary_phase(ft, grid.z(k), t));
    return out;
}

ComplexField to_stationary_frame(const FrameTransform& ft, const ComplexField& shifted_free, double t,
                                 const Grid& stationary) {
    if (!shifted_free.grid().same_space(stationary))
        throw ParameterError("free-frame field is not sampled on the stationary grid");
    return to_stationary_frame(ft, shifted_free, t);
}

ComplexField galilean_boost(const FrameTransform& ft, const ComplexField& shifted_free, double t) {
    if (ft.a != 0.0) throw ParameterError("Galilean boost requires a = 0");
    return to_stationary_frame(ft, shifted_free, t);
}

cplx plane_wave_free(const PlaneWaveState& pw, double hbar, double z_prime, double t_prime) {
    return std::polar(1.0, pw.p_prime / hbar * z_prime - pw.omega_prime * t_prime);
}

cplx plane_wave_stationary(const PlaneWaveState& pw, const FrameTransform& ft, double z, double t) {
    const double k = pw.p_prime / ft.hbar;
    const double mv = ft.m_i * ft.v / ft.hbar;
    const double mat = ft.m_i * ft.a * t / ft.hbar;
    const double arg = (k - mv) * z - (pw.omega_prime - ft.v * (k - 0.5 * mv)) * t - mat * z +
                       0.5 * ft.a * t * t * (k - mv - mat / 3.0);
    return std::polar(1.0, arg);
}

double momentum_eigenvalue(const PlaneWaveState& pw, const FrameTransform& ft, double t) {
    return pw.p_prime - ft.m_i * (ft.v + ft.a * t);
}

double energy_eigenvalue(const PlaneWaveState& pw, const FrameTransform& ft, const PhysicalSystem& system, double z,
                         double t) {
    system.validate();
    if (system.m_i != ft.m_i) throw ParameterError("frame transform and system disagree on m_i");
    const double p = momentum_eigenvalue(pw, ft, t);
    return p * p / (2.0 * ft.m_i) + ft.m_i * ft.a * z;
}

double frequency_shift(const PhysicalSystem& system, double z) {
    system.validate();
    return system.m_i * system.a * z / system.hbar;
}

double effective_mass(double omega_prime, double hbar, double c) {
    if (!(c > 0.0)) throw ParameterError("speed of light must be positive");
    return hbar * omega_prime / (c * c);
}

double redshift_ratio(double a, double z, double c) {
    if (!(c > 0.0)) throw ParameterError("speed of light must be positive");
    return a * z / (c * c);
}

double cow_phase_shift(const InterferometerGeometry& geom, const PhysicalSystem& system) {
    system.validate();
    const double m = system.m_i;
    return m * m * system.a * geom.wavelength() * geom.area() /
           (2.0 * std::numbers::pi * system.hbar * system.hbar);
}

double beam_velocity(const InterferometerGeometry& geom, const PhysicalSystem& system) {
    system.validate();
    return 2.0 * std::numbers::pi * system.hbar / (system.m_i * geom.wavelength());
}

double cow_phase_shift_transit(const InterferometerGeometry& geom, const PhysicalSystem& system) {
    const double t = geom.horizontal_length() / beam_velocity(geom, system);
    return std::abs(system.m_i * system.a * t * geom.height() / system.hbar);
}

cplx falling_box_state(int n, double box_length, const FrameTransform& ft, const PhysicalSystem& system, double z,
                       double t) {
    require_box(n, box_length);
    system.validate();
    const double z_prime = z + ft.shift(t);
    if (z_prime < 0.0 || z_prime > box_length) return {0.0, 0.0};
    const double m = ft.m_i;
    const double k = n * std::numbers::pi / box_length;
    const double box_energy = (k * ft.hbar) * (k * ft.hbar) / (2.0 * m);
    const double bracket =
        m * ft.v * z + t * (box_energy + 0.5 * m * ft.v * ft.v + m * ft.a * (z + 0.5 * ft.v * t + ft.a * t * t / 6.0));
    return std::sqrt(2.0 / box_length) * std::sin(k * z_prime) * std::polar(1.0, -bracket / ft.hbar);
}

BoxEigenvalues box_eigenvalues(int n, double box_length, const FrameTransform& ft, const PhysicalSystem& system,
                               double z, double t) {
    require_box(n, box_length);
    system.validate();
    // n h / 2L = n pi hbar / L
    const double p = n * std::numbers::pi * ft.hbar / box_length - ft.m_i * (ft.v + ft.a * t);
    return {p, p * p / (2.0 * ft.m_i) + ft.m_i * ft.a * z};
}

} // namespace eepq::gravishift
