#include "eepq/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eepq {

void PhysicalSystem::validate() const {
    if (!(m_i > 0.0) || !std::isfinite(m_i)) throw ParameterError("inertial mass must be positive and finite");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ParameterError("hbar must be positive and finite");
    if (!(m_g >= 0.0) || !std::isfinite(m_g)) throw ParameterError("gravitational mass must be non-negative and finite");
    if (!std::isfinite(g) || !std::isfinite(v) || !std::isfinite(a))
        throw ParameterError("g, v and a must be finite");
}

bool PhysicalSystem::free_fall_condition(double rel_tol) const noexcept {
    const double inertial = a * m_i;
    const double gravitational = m_g * g;
    return std::abs(inertial - gravitational) <= rel_tol * std::max(std::abs(inertial), std::abs(gravitational));
}

PhysicalSystem PhysicalSystem::with_gravity(double g_new) const {
    PhysicalSystem s = *this;
    s.g = g_new;
    s.validate();
    return s;
}

PhysicalSystem PhysicalSystem::with_frame(double v_new, double a_new) const {
    PhysicalSystem s = *this;
    s.v = v_new;
    s.a = a_new;
    s.validate();
    return s;
}

PhysicalSystem PhysicalSystem::in_free_fall() const {
    validate();
    PhysicalSystem s = *this;
    s.a = m_g * g / m_i;
    return s;
}

PhysicalSystem make_natural_system(double mass_scale) {
    if (!(mass_scale > 0.0) || !std::isfinite(mass_scale))
        throw ParameterError("mass scale must be positive, got " + std::to_string(mass_scale));
    return PhysicalSystem{.m_i = mass_scale, .m_g = mass_scale, .g = 0.0, .v = 0.0, .a = 0.0, .hbar = 1.0};
}

Grid::Grid(double z_min, double z_max, std::size_t n_points, double dt, std::size_t n_steps)
    : z_min_(z_min), z_max_(z_max), n_points_(n_points), dt_(dt), n_steps_(n_steps), dz_(0.0) {
    if (!std::isfinite(z_min) || !std::isfinite(z_max) || !(z_max > z_min))
        throw ParameterError("grid requires finite z_min < z_max");
    if (n_points < 3) throw ParameterError("grid requires at least 3 points");
    if (n_steps > 0 && (!(dt > 0.0) || !std::isfinite(dt)))
        throw ParameterError("dt must be positive when n_steps > 0");
    dz_ = (z_max - z_min) / static_cast<double>(n_points - 1);
}

std::vector<double> Grid::positions() const {
    std::vector<double> z(n_points_);
    for (std::size_t k = 0; k < n_points_; ++k) z[k] = this->z(k);
    return z;
}

bool Grid::same_space(const Grid& other) const noexcept {
    return z_min_ == other.z_min_ && z_max_ == other.z_max_ && n_points_ == other.n_points_;
}

Grid Grid::with_time(double dt, std::size_t n_steps) const {
    return Grid(z_min_, z_max_, n_points_, dt, n_steps);
}

ComplexField::ComplexField(Grid grid) : grid_(grid), values_(grid.n_points()) {}

ComplexField::ComplexField(Grid grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.n_points())
        throw ParameterError("field has " + std::to_string(values_.size()) + " samples but grid has " +
                             std::to_string(grid_.n_points()) + " points");
}

ComplexField ComplexField::normalized() const {
    const double n2 = norm_squared(*this);
    if (!(n2 > 0.0)) throw NumericError("cannot normalize a zero field");
    ComplexField out = scaled(1.0 / std::sqrt(n2));
    out.normalized_ = true;
    return out;
}

ComplexField ComplexField::scaled(cplx c) const {
    ComplexField out(grid_, values_);
    for (auto& v : out.values_) v *= c;
    return out;
}

std::vector<double> trapezoid_weights(const Grid& grid) {
    std::vector<double> w(grid.n_points(), grid.dz());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

double norm_squared(const ComplexField& f) {
    const auto vals = f.values();
    double interior = 0.0;
    for (std::size_t k = 1; k + 1 < vals.size(); ++k) interior += std::norm(vals[k]);
    const double total = f.grid().dz() * (interior + 0.5 * (std::norm(vals.front()) + std::norm(vals.back())));
    if (!std::isfinite(total)) throw NumericError("field contains non-finite samples");
    return total;
}

} // namespace eepq
