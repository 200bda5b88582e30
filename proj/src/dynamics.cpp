#include "eepq/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include "eepq/gravishift.hpp"

namespace eepq::dynamics {
namespace {

constexpr double kNormTolerance = 1e-8;

// Eighth-order central first derivative, weights for offsets 1..4.
constexpr std::array<double, 4> kD1 = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};

std::vector<cplx> derivative(std::span<const cplx> psi, double h) {
    const auto n = static_cast<std::ptrdiff_t>(psi.size());
    auto at = [&](std::ptrdiff_t k) { return (k < 0 || k >= n) ? cplx{} : psi[static_cast<std::size_t>(k)]; };
    std::vector<cplx> d(psi.size());
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::ptrdiff_t j = 1; j <= 4; ++j) acc += kD1[static_cast<std::size_t>(j - 1)] * (at(k + j) - at(k - j));
        d[static_cast<std::size_t>(k)] = acc / h;
    }
    return d;
}

double edge_amplitude(std::span<const cplx> psi, std::size_t width) {
    double worst = 0.0;
    const std::size_t w = std::min(width, psi.size() / 2);
    for (std::size_t k = 0; k < w; ++k) {
        worst = std::max(worst, std::abs(psi[k]));
        worst = std::max(worst, std::abs(psi[psi.size() - 1 - k]));
    }
    return worst;
}

/// Factorized Crank-Nicolson step for the interior points 1..n-2.
class CrankNicolson {
public:
    CrankNicolson(const Grid& grid, const PhysicalSystem& system, double slope) {
        const std::size_t n = grid.n_points();
        m_ = n - 2;
        const double h = grid.dz();
        const double tau = grid.dt() / (2.0 * system.hbar);
        const double c = system.hbar * system.hbar / (2.0 * system.m_i * h * h);
        const cplx i_tau(0.0, tau);
        potential_.resize(m_);
        for (std::size_t j = 0; j < m_; ++j) potential_[j] = slope * grid.z(j + 1);

        // Left operator M + i tau (-c D + M V); M = tridiag(1, 10, 1)/12, D = tridiag(1, -2, 1).
        lower_.resize(m_);
        diag_.resize(m_);
        upper_.resize(m_);
        for (std::size_t j = 0; j < m_; ++j) {
            diag_[j] = 10.0 / 12.0 + i_tau * (2.0 * c + 10.0 / 12.0 * potential_[j]);
            if (j > 0) lower_[j] = 1.0 / 12.0 + i_tau * (-c + potential_[j - 1] / 12.0);
            if (j + 1 < m_) upper_[j] = 1.0 / 12.0 + i_tau * (-c + potential_[j + 1] / 12.0);
        }
        i_tau_ = i_tau;
        c_ = c;

        // Thomas forward elimination, done once.
        modified_upper_.resize(m_);
        inv_pivot_.resize(m_);
        cplx pivot = diag_[0];
        inv_pivot_[0] = 1.0 / pivot;
        modified_upper_[0] = upper_[0] * inv_pivot_[0];
        for (std::size_t j = 1; j < m_; ++j) {
            pivot = diag_[j] - lower_[j] * modified_upper_[j - 1];
            if (std::abs(pivot) < 1e-300) throw NumericError("singular Crank-Nicolson system");
            inv_pivot_[j] = 1.0 / pivot;
            modified_upper_[j] = upper_[j] * inv_pivot_[j];
        }
        rhs_.resize(m_);
    }

    /// psi includes the two wall points, which stay zero.
    void step(std::span<cplx> psi) {
        const std::size_t m = m_;
        auto interior = [&](std::size_t j) { return psi[j + 1]; };
        // Right operator M - i tau (-c D + M V) applied to psi.
        for (std::size_t j = 0; j < m; ++j) {
            const cplx left = j > 0 ? interior(j - 1) : cplx{};
            const cplx right = j + 1 < m ? interior(j + 1) : cplx{};
            const double v_left = j > 0 ? potential_[j - 1] : 0.0;
            const double v_right = j + 1 < m ? potential_[j + 1] : 0.0;
            const cplx centre = interior(j);
            const cplx mass = (left + right) / 12.0 + 10.0 / 12.0 * centre;
            const cplx lap = left - 2.0 * centre + right;
            const cplx mass_v = (v_left * left + v_right * right) / 12.0 + 10.0 / 12.0 * potential_[j] * centre;
            rhs_[j] = mass + i_tau_ * (c_ * lap - mass_v);
        }
        // Forward substitution, then back substitution.
        rhs_[0] *= inv_pivot_[0];
        for (std::size_t j = 1; j < m; ++j) rhs_[j] = (rhs_[j] - lower_[j] * rhs_[j - 1]) * inv_pivot_[j];
        for (std::size_t j = m - 1; j-- > 0;) rhs_[j] -= modified_upper_[j] * rhs_[j + 1];
        for (std::size_t j = 0; j < m; ++j) psi[j + 1] = rhs_[j];
        psi[0] = 0.0;
        psi[m + 1] = 0.0;
    }

private:
    std::size_t m_ = 0;
    double c_ = 0.0;
    cplx i_tau_{};
    std::vector<double> potential_;
    std::vector<cplx> lower_, diag_, upper_;
    std::vector<cplx> modified_upper_, inv_pivot_;
    std::vector<cplx> rhs_;
};

void require_normalized(const ComplexField& psi, const char* what) {
    const double n2 = norm_squared(psi);
    if (std::abs(n2 - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg << what << " requires a normalized field (norm^2 = " << n2 << ")";
        throw ParameterError(msg.str());
    }
}

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
};

LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
    const double n = static_cast<double>(t.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
    }
    const double tm = st / n;
    const double ym = sy / n;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        sty += (t[i] - tm) * (y[i] - ym);
    }
    const double slope = sty / stt;
    return {ym - slope * tm, slope};
}

/// Least-squares coefficient of t^2 in y = c0 + c1 t + c2 t^2.
double fit_curvature(const std::vector<double>& t, const std::vector<double>& y) {
    // Shift and scale t to [-1, 1] for conditioning, solve the 3x3 normal equations.
    const double lo = *std::min_element(t.begin(), t.end());
    const double hi = *std::max_element(t.begin(), t.end());
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::array<std::array<double, 4>, 3> a{};
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double s = (t[i] - mid) / half;
        const std::array<double, 3> basis = {1.0, s, s * s};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) a[r][c] += basis[r] * basis[c];
            a[r][3] += basis[r] * y[i];
        }
    }
    for (int p = 0; p < 3; ++p) {
        for (int r = p + 1; r < 3; ++r) {
            const double f = a[r][p] / a[p][p];
            for (int c = p; c < 4; ++c) a[r][c] -= f * a[p][c];
        }
    }
    const double c2_scaled = a[2][3] / a[2][2];
    return c2_scaled / (half * half);
}

} // namespace

BoundaryContactError::BoundaryContactError(double time, double amplitude)
    : NumericError([&] {
          std::ostringstream msg;
          msg << "wave packet reached the domain boundary at t = " << time << " (edge amplitude " << amplitude << ")";
          return msg.str();
      }()),
      time_(time), amplitude_(amplitude) {}

Moments moments(const ComplexField& psi, double hbar) {
    require_normalized(psi, "moments");
    const Grid& grid = psi.grid();
    const auto w = trapezoid_weights(grid);
    const auto vals = psi.values();
    const auto d = derivative(vals, grid.dz());

    double mz = 0.0, mz2 = 0.0, mp = 0.0, mp2 = 0.0;
    for (std::size_t k = 0; k < vals.size(); ++k) {
        const double rho = std::norm(vals[k]) * w[k];
        const double z = grid.z(k);
        mz += z * rho;
        mz2 += z * z * rho;
        // <p> = Re sum w psi* (-i hbar psi')
        mp += w[k] * (std::conj(vals[k]) * cplx(0.0, -hbar) * d[k]).real();
        mp2 += w[k] * hbar * hbar * std::norm(d[k]);
    }
    Moments m;
    m.mean_z = mz;
    m.mean_p = mp;
    m.sigma_z = std::sqrt(std::max(0.0, mz2 - mz * mz));
    m.sigma_p = std::sqrt(std::max(0.0, mp2 - mp * mp));
    return m;
}

ComplexField gaussian_packet(const Grid& grid, double center, double sigma, double k0) {
    if (!(sigma > 0.0)) throw ParameterError("Gaussian width must be positive");
    return ComplexField::sample(grid,
                                [&](double z) {
                                    const double x = z - center;
                                    return std::exp(-x * x / (4.0 * sigma * sigma)) * std::polar(1.0, k0 * z);
                                })
        .normalized();
}

PropagationReport propagate_linear_potential(const ComplexField& psi0, const PhysicalSystem& system, double slope,
                                             const Grid& grid, const PropagationOptions& options) {
    system.validate();
    if (!std::isfinite(slope)) throw ParameterError("potential slope must be finite");
    if (!psi0.grid().same_space(grid)) throw ParameterError("initial field and propagation grid differ");
    require_normalized(psi0, "propagation");

    ComplexField psi(grid, std::vector<cplx>(psi0.values().begin(), psi0.values().end()));
    // Dirichlet walls
    psi[0] = 0.0;
    psi[psi.size() - 1] = 0.0;
    const double initial_norm = norm_squared(psi);

    if (const double edge = edge_amplitude(psi.values(), options.edge_width); edge > options.edge_tolerance)
        throw BoundaryContactError(0.0, edge);

    PropagationReport report{psi, slope, 0.0, 0.0, {}};
    auto record = [&](double t) { report.moment_series.push_back({t, moments(psi, system.hbar)}); };
    record(0.0);

    const std::size_t steps = grid.n_steps();
    if (steps > 0) {
        CrankNicolson cn(grid, system, slope);
        for (std::size_t s = 1; s <= steps; ++s) {
            cn.step(psi.values());
            const double t = grid.dt() * static_cast<double>(s);
            if (const double edge = edge_amplitude(psi.values(), options.edge_width); edge > options.edge_tolerance)
                throw BoundaryContactError(t, edge);
            const bool last = s == steps;
            if (last || (options.sample_every > 0 && s % options.sample_every == 0)) record(t);
        }
    }
    report.norm_drift = std::abs(norm_squared(psi) - initial_norm);
    report.final_field = std::move(psi);
    return report;
}

double pde_residual(const SpaceTimeFunction& psi, const PhysicalSystem& system, double slope, const Stencil& st) {
    system.validate();
    if (st.nz < 5 || st.nt < 5) throw ParameterError("residual stencil needs at least 5 points per axis");
    if (!(st.dz > 0.0) || !(st.dt > 0.0)) throw ParameterError("residual stencil spacings must be positive");

    const std::size_t nz = st.nz;
    const std::size_t nt = st.nt;
    const double z0 = st.z_center - st.dz * static_cast<double>(nz - 1) / 2.0;
    const double t0 = st.t_center - st.dt * static_cast<double>(nt - 1) / 2.0;
    std::vector<cplx> samples(nz * nt);
    double amplitude = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
        for (std::size_t i = 0; i < nz; ++i) {
            const cplx v = psi(z0 + st.dz * static_cast<double>(i), t0 + st.dt * static_cast<double>(j));
            samples[j * nz + i] = v;
            amplitude = std::max(amplitude, std::abs(v));
        }
    }
    if (amplitude == 0.0) return 0.0;
    auto at = [&](std::size_t i, std::size_t j) { return samples[j * nz + i]; };

    const double hbar = system.hbar;
    double worst = 0.0;
    for (std::size_t j = 2; j + 2 < nt; ++j) {
        for (std::size_t i = 2; i + 2 < nz; ++i) {
            const cplx d_t =
                (-at(i, j + 2) + 8.0 * at(i, j + 1) - 8.0 * at(i, j - 1) + at(i, j - 2)) / (12.0 * st.dt);
            const cplx d_zz = (-at(i + 2, j) + 16.0 * at(i + 1, j) - 30.0 * at(i, j) + 16.0 * at(i - 1, j) -
                               at(i - 2, j)) /
                              (12.0 * st.dz * st.dz);
            const double z = z0 + st.dz * static_cast<double>(i);
            const cplx r = cplx(0.0, hbar) * d_t + hbar * hbar / (2.0 * system.m_i) * d_zz - slope * z * at(i, j);
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst / amplitude;
}

ComplexField align_global_phase(const ComplexField& psi, const ComplexField& reference) {
    if (!psi.grid().same_space(reference.grid())) throw ParameterError("cannot compare fields on different grids");
    const auto w = trapezoid_weights(psi.grid());
    cplx overlap{};
    for (std::size_t k = 0; k < psi.size(); ++k) overlap += w[k] * std::conj(psi[k]) * reference[k];
    return psi.scaled(std::polar(1.0, std::arg(overlap)));
}

double max_mismatch_mod_phase(const ComplexField& a, const ComplexField& b) {
    const ComplexField aligned = align_global_phase(a, b);
    double worst = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) worst = std::max(worst, std::abs(aligned[k] - b[k]));
    return worst;
}

cplx interpolate(const ComplexField& f, double z) {
    constexpr int kPoints = 8;
    const Grid& grid = f.grid();
    const double s = (z - grid.z_min()) / grid.dz();
    const auto n = static_cast<long>(grid.n_points());
    if (!(s >= 0.0) || s > static_cast<double>(n - 1)) return {};
    // a grid node up to rounding in (z - z_min) / dz
    const double nearest = std::round(s);
    if (std::abs(s - nearest) <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, s))
        return f[static_cast<std::size_t>(nearest)];
    const double base = std::floor(s);
    const auto i0 = static_cast<long>(base);

    const long first = i0 - kPoints / 2 + 1;
    cplx acc{};
    for (int a = 0; a < kPoints; ++a) {
        const long node = first + a;
        if (node < 0 || node >= n) continue; // outside the walls the field is zero
        double weight = 1.0;
        for (int b = 0; b < kPoints; ++b) {
            if (b == a) continue;
            weight *= (s - static_cast<double>(first + b)) / static_cast<double>(a - b);
        }
        acc += weight * f[static_cast<std::size_t>(node)];
    }
    return acc;
}

FrameEquivalence frame_equivalence(const ComplexField& psi0_free, const PhysicalSystem& system, const Grid& grid) {
    system.validate();
    const auto ft = gravishift::FrameTransform::from(system);
    const double duration = grid.duration();
    PropagationOptions quiet;
    quiet.sample_every = 0;

    const ComplexField direct_initial = gravishift::to_stationary_frame(ft, psi0_free, 0.0, grid);
    auto free_run = std::async(std::launch::async, [&] {
        return propagate_linear_potential(psi0_free, system, 0.0, grid, quiet);
    });
    PropagationReport direct = propagate_linear_potential(direct_initial, system, system.force(), grid, quiet);
    PropagationReport free = free_run.get();

    const double shift = ft.shift(duration);
    const ComplexField shifted =
        ComplexField::sample(grid, [&](double z) { return interpolate(free.final_field, z + shift); });
    ComplexField mapped = gravishift::to_stationary_frame(ft, shifted, duration, grid);

    FrameEquivalence out{0.0, align_global_phase(mapped, direct.final_field), direct.final_field, free.norm_drift,
                         direct.norm_drift};
    double worst = 0.0;
    for (std::size_t k = 0; k < out.direct.size(); ++k)
        worst = std::max(worst, std::abs(out.via_free_frame[k] - out.direct[k]));
    out.max_mismatch = worst;
    return out;
}

double frame_equivalence_test(const ComplexField& psi0_free, const PhysicalSystem& system, const Grid& grid) {
    return frame_equivalence(psi0_free, system, grid).max_mismatch;
}

bool HeisenbergSummary::all_passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const HeisenbergCheck& c) { return c.passed; });
}

HeisenbergSummary heisenberg_checks(const PropagationReport& report, const PhysicalSystem& system,
                                    const HeisenbergTolerances& tol) {
    system.validate();
    const auto& series = report.moment_series;
    if (series.size() < 3) throw ParameterError("Heisenberg checks need at least 3 moment samples");

    std::vector<double> t, z, p;
    for (const auto& s : series) {
        t.push_back(s.t);
        z.push_back(s.m.mean_z);
        p.push_back(s.m.mean_p);
    }
    const double force = system.force();
    auto relative_or_absolute = [](double got, double want) {
        return want != 0.0 ? std::abs(got - want) / std::abs(want) : std::abs(got);
    };

    HeisenbergSummary out;
    auto add = [&](std::string name, double residual, double tolerance, bool passed) {
        out.checks.push_back({std::move(name), residual, tolerance, passed});
    };

    const double slope = fit_line(t, p).slope;
    const double slope_err = relative_or_absolute(slope, -force);
    add("momentum_slope", slope_err, tol.momentum_slope_rel, slope_err <= tol.momentum_slope_rel);

    const double curvature = fit_curvature(t, z);
    const double curvature_err = relative_or_absolute(curvature, -force / (2.0 * system.m_i));
    add("position_parabola", curvature_err, tol.position_curvature_rel,
        curvature_err <= tol.position_curvature_rel);

    const double sp0 = series.front().m.sigma_p;
    double drift = 0.0;
    for (const auto& s : series) drift = std::max(drift, std::abs(s.m.sigma_p - sp0));
    add("momentum_spread_constant", drift, tol.momentum_spread_drift, drift <= tol.momentum_spread_drift);

    const double sz0 = series.front().m.sigma_z;
    double worst_width = std::numeric_limits<double>::infinity();
    double worst_product = std::numeric_limits<double>::infinity();
    for (const auto& s : series) {
        worst_width = std::min(worst_width, s.m.sigma_z * sz0 - system.hbar * s.t / (2.0 * system.m_i));
        worst_product = std::min(worst_product, s.m.sigma_z * s.m.sigma_p - system.hbar / 2.0);
    }
    add("width_product_bound", worst_width, tol.uncertainty_slack, worst_width >= -tol.uncertainty_slack);
    add("uncertainty_bound", worst_product, tol.uncertainty_slack, worst_product >= -tol.uncertainty_slack);
    return out;
}

ReferenceSetup reference_setup() {
    PhysicalSystem system = make_natural_system(1.0).with_gravity(1.0).in_free_fall();
    Grid grid(-20.0, 30.0, 4096, 1e-4, 10000);
    return {system, grid, gaussian_packet(grid, 8.0, 0.5)};
}

} // namespace eepq::dynamics
