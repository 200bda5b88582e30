#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eepq {

using cplx = std::complex<double>;

/// Invalid input parameters (bad mass, mismatched grids, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation failed numerically (NaN input, non-convergence, boundary contact).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Masses, field strength, frame kinematics and Planck constant.
///
/// Units are whatever the caller chooses: natural units (hbar = 1) or SI
/// with constants supplied by the caller. Sign convention: z points up,
/// gravity acts along -z, and a > 0 is a frame accelerating downward so
/// that z' = z + v t + a t^2 / 2.
struct PhysicalSystem {
    double m_i = 1.0;
    double m_g = 1.0;
    double g = 0.0;
    double v = 0.0;
    double a = 0.0;
    double hbar = 1.0;

    /// Throws ParameterError unless m_i > 0, hbar > 0, m_g >= 0 and g, v, a finite.
    void validate() const;

    /// Force magnitude F = m_g g of the linear potential V = F z.
    [[nodiscard]] double force() const noexcept { return m_g * g; }

    /// True iff |a m_i - m_g g| <= rel_tol * max(|a m_i|, |m_g g|).
    [[nodiscard]] bool free_fall_condition(double rel_tol = 1e-12) const noexcept;

    [[nodiscard]] PhysicalSystem with_gravity(double g_new) const;
    [[nodiscard]] PhysicalSystem with_frame(double v_new, double a_new) const;
    /// Sets a = m_g g / m_i.
    [[nodiscard]] PhysicalSystem in_free_fall() const;
};

/// hbar = 1, m_i = m_g = mass_scale, all kinematics zero.
PhysicalSystem make_natural_system(double mass_scale);

/// Uniform 1-D grid plus time-stepping parameters.
class Grid {
public:
    Grid(double z_min, double z_max, std::size_t n_points, double dt = 0.0, std::size_t n_steps = 0);

    [[nodiscard]] double z_min() const noexcept { return z_min_; }
    [[nodiscard]] double z_max() const noexcept { return z_max_; }
    [[nodiscard]] std::size_t n_points() const noexcept { return n_points_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] std::size_t n_steps() const noexcept { return n_steps_; }
    [[nodiscard]] double dz() const noexcept { return dz_; }
    [[nodiscard]] double z(std::size_t k) const noexcept { return z_min_ + dz_ * static_cast<double>(k); }
    [[nodiscard]] double duration() const noexcept { return dt_ * static_cast<double>(n_steps_); }
    [[nodiscard]] std::vector<double> positions() const;

    /// Same spatial layout; time parameters may differ.
    [[nodiscard]] bool same_space(const Grid& other) const noexcept;
    [[nodiscard]] Grid with_time(double dt, std::size_t n_steps) const;

private:
    double z_min_;
    double z_max_;
    std::size_t n_points_;
    double dt_;
    std::size_t n_steps_;
    double dz_;
};

/// Complex wave function sampled on a Grid.
class ComplexField {
public:
    explicit ComplexField(Grid grid);
    ComplexField(Grid grid, std::vector<cplx> values);

    /// Samples fn(z) at every grid point.
    template <class Fn>
    static ComplexField sample(const Grid& grid, Fn&& fn) {
        std::vector<cplx> values(grid.n_points());
        for (std::size_t k = 0; k < values.size(); ++k) values[k] = cplx(fn(grid.z(k)));
        return ComplexField(grid, std::move(values));
    }

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const cplx> values() const noexcept { return values_; }
    [[nodiscard]] std::span<cplx> values() noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] const cplx& operator[](std::size_t k) const noexcept { return values_[k]; }
    [[nodiscard]] cplx& operator[](std::size_t k) noexcept { return values_[k]; }

    /// Set only by normalized(); any mutable access is the caller's responsibility.
    [[nodiscard]] bool flagged_normalized() const noexcept { return normalized_; }

    /// Copy rescaled to unit trapezoidal norm and flagged normalized.
    [[nodiscard]] ComplexField normalized() const;
    [[nodiscard]] ComplexField scaled(cplx c) const;

private:
    Grid grid_;
    std::vector<cplx> values_;
    bool normalized_ = false;
};

/// Trapezoidal integral of |psi|^2 over the grid. Throws NumericError on NaN/inf samples.
double norm_squared(const ComplexField& f);

/// Trapezoidal weights h * {1/2, 1, ..., 1, 1/2}.
std::vector<double> trapezoid_weights(const Grid& grid);

} // namespace eepq
