#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "eepq/core.hpp"

namespace eepq::dynamics {

/// The packet reached the Dirichlet walls; carries the simulation time of contact.
class BoundaryContactError : public NumericError {
public:
    BoundaryContactError(double time, double amplitude);
    [[nodiscard]] double time() const noexcept { return time_; }
    [[nodiscard]] double amplitude() const noexcept { return amplitude_; }

private:
    double time_;
    double amplitude_;
};

struct Moments {
    double mean_z = 0.0;
    double mean_p = 0.0;
    double sigma_z = 0.0;
    double sigma_p = 0.0;
};

struct MomentSample {
    double t = 0.0;
    Moments m;
};

struct PropagationReport {
    ComplexField final_field;
    double slope = 0.0; ///< F of the potential V = F z used for the run
    double norm_drift = 0.0;
    double max_frame_mismatch = 0.0; ///< filled by frame comparisons; 0 for a plain run
    std::vector<MomentSample> moment_series;
};

struct PropagationOptions {
    /// Record moments every this many steps (0: only initial and final state).
    std::size_t sample_every = 1;
    /// Amplitude above which the outermost `edge_width` points count as wall contact.
    double edge_tolerance = 1e-6;
    std::size_t edge_width = 5;
};

/// Position/momentum expectation values and widths. Momentum uses an eighth-order
/// central difference of psi. Throws ParameterError unless |norm^2 - 1| <= 1e-8.
Moments moments(const ComplexField& psi, double hbar);

/// Normalized Gaussian with position spread sigma (of |psi|^2) and carrier wavenumber k0.
ComplexField gaussian_packet(const Grid& grid, double center, double sigma, double k0 = 0.0);

/// Crank-Nicolson evolution under H = p^2/2m_i + slope * z with zero Dirichlet walls.
///
/// The kinetic operator is the fourth-order compact (Numerov) Laplacian
/// M^{-1} D / h^2 with M = 1 + D/12, which keeps each step a single complex
/// tridiagonal solve and the propagator exactly unitary. Time step and step
/// count come from `grid`, which must share psi0's spatial layout.
PropagationReport propagate_linear_potential(const ComplexField& psi0, const PhysicalSystem& system, double slope,
                                             const Grid& grid, const PropagationOptions& options = {});

/// Uniform (z, t) sample stencil centred on (z_center, t_center).
struct Stencil {
    double z_center = 0.0;
    double t_center = 0.0;
    double dz = 1e-3;
    double dt = 1e-3;
    std::size_t nz = 5;
    std::size_t nt = 5;
};

using SpaceTimeFunction = std::function<cplx(double z, double t)>;

/// max |i hbar psi_t + (hbar^2/2m) psi_zz - slope z psi| over interior stencil points,
/// divided by max |psi| on the stencil (so the result is an energy). Fourth-order
/// differences; throws ParameterError for fewer than 5 points per axis.
double pde_residual(const SpaceTimeFunction& psi, const PhysicalSystem& system, double slope, const Stencil& stencil);

/// psi multiplied by exp(i phi), phi = arg <psi, reference>.
ComplexField align_global_phase(const ComplexField& psi, const ComplexField& reference);

/// max_k |a_k - b_k| after aligning a's global phase to b.
double max_mismatch_mod_phase(const ComplexField& a, const ComplexField& b);

/// Band-limited evaluation of a sampled field at arbitrary z (8-point Lagrange);
/// zero outside the grid.
cplx interpolate(const ComplexField& f, double z);

struct FrameEquivalence {
    double max_mismatch = 0.0;
    ComplexField via_free_frame;  ///< free evolution, then shift and phase map
    ComplexField direct;          ///< evolution in the potential m_g g z
    double norm_drift_free = 0.0;
    double norm_drift_direct = 0.0;
};

/// Evolves psi0 freely and maps it into the stationary frame with the system's
/// (v, a), and independently evolves the mapped initial state in the potential
/// m_g g z. Both runs use `grid` and execute concurrently.
FrameEquivalence frame_equivalence(const ComplexField& psi0_free, const PhysicalSystem& system, const Grid& grid);

/// frame_equivalence(...).max_mismatch
double frame_equivalence_test(const ComplexField& psi0_free, const PhysicalSystem& system, const Grid& grid);

struct HeisenbergCheck {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct HeisenbergSummary {
    std::vector<HeisenbergCheck> checks;
    [[nodiscard]] bool all_passed() const noexcept;
};

struct HeisenbergTolerances {
    double momentum_slope_rel = 1e-6;
    double position_curvature_rel = 1e-5;
    double momentum_spread_drift = 1e-8;
    double uncertainty_slack = 1e-9;
};

/// Checks a moment series from a linear-potential run:
/// <p> slope = -m_g g, <z> curvature = -m_g g / 2 m_i, constant sigma_p,
/// sigma_z(t) sigma_z(0) >= hbar t / 2 m_i and sigma_z sigma_p >= hbar / 2.
HeisenbergSummary heisenberg_checks(const PropagationReport& report, const PhysicalSystem& system,
                                    const HeisenbergTolerances& tol = {});

/// Reference configuration: natural units, m = g = 1 (frame in free fall),
/// Gaussian sigma = 0.5 at z = 8, domain [-20, 30], 4096 points, dt = 1e-4, T = 1.
struct ReferenceSetup {
    PhysicalSystem system;
    Grid grid;
    ComplexField psi0;
};

ReferenceSetup reference_setup();

} // namespace eepq::dynamics
