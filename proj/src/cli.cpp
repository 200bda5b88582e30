#include "eepq/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "eepq/airy.hpp"
#include "eepq/bouncer.hpp"
#include "eepq/core.hpp"
#include "eepq/dynamics.hpp"
#include "eepq/gravishift.hpp"

namespace eepq::cli {
namespace {

constexpr const char* kVersion = "1.0.0";

enum class Format { table, csv, json };

struct Column {
    enum Style { integer, fixed, scientific, percent };
    std::string name;
    Style style = fixed;
    int digits = 8;
};

/// Rows of numbers plus metadata; rendered as a table, CSV or JSON.
struct Dataset {
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, double>> summary;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string exact(double x) { return fmt::format("{:.17g}", x); }

std::string format_cell(const Column& c, double x) {
    switch (c.style) {
    case Column::integer: return fmt::format("{:.0f}", x);
    case Column::fixed: return fmt::format("{:.{}f}", x, c.digits);
    case Column::scientific: return fmt::format("{:.{}e}", x, c.digits);
    case Column::percent: return fmt::format("{:.{}f}", 100.0 * x, c.digits);
    }
    return exact(x);
}

std::string header_name(const Column& c) { return c.style == Column::percent ? c.name + "[%]" : c.name; }

void write_table(const Dataset& d, std::ostream& os) {
    std::vector<std::size_t> width(d.columns.size());
    std::vector<std::vector<std::string>> cells;
    for (std::size_t c = 0; c < d.columns.size(); ++c) width[c] = header_name(d.columns[c]).size();
    for (const auto& row : d.rows) {
        auto& line = cells.emplace_back();
        for (std::size_t c = 0; c < d.columns.size(); ++c) {
            line.push_back(format_cell(d.columns[c], row[c]));
            width[c] = std::max(width[c], line.back().size());
        }
    }
    for (std::size_t c = 0; c < d.columns.size(); ++c)
        fmt::print(os, "{}{:>{}}", c ? "  " : "", header_name(d.columns[c]), width[c]);
    fmt::print(os, "\n");
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) fmt::print(os, "{}{:>{}}", c ? "  " : "", line[c], width[c]);
        fmt::print(os, "\n");
    }
}

void write_csv(const Dataset& d, std::ostream& os) {
    for (std::size_t c = 0; c < d.columns.size(); ++c) os << (c ? "," : "") << d.columns[c].name;
    os << "\r\n";
    for (const auto& row : d.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << exact(row[c]);
        os << "\r\n";
    }
}

void write_json(const Dataset& d, std::ostream& os) {
    nlohmann::ordered_json doc;
    doc["meta"] = d.meta;
    auto summary = nlohmann::ordered_json::object();
    for (const auto& [k, v] : d.summary) summary[k] = v;
    doc["meta"]["summary"] = summary;
    auto data = nlohmann::ordered_json::array();
    for (const auto& row : d.rows) {
        nlohmann::ordered_json rec;
        for (std::size_t c = 0; c < row.size(); ++c) rec[d.columns[c].name] = row[c];
        data.push_back(rec);
    }
    doc["data"] = data;
    os << doc.dump(2) << "\n";
}

void write_summary(const Dataset& d, std::ostream& os) {
    if (d.summary.empty()) return;
    os << "summary:";
    for (const auto& [k, v] : d.summary) os << ' ' << k << '=' << exact(v);
    os << "\n";
}

struct OutputOptions {
    std::string format = "table";
    std::string path;
};

void emit(const Dataset& d, const OutputOptions& opt, std::ostream& out, std::ostream& err) {
    const Format f = opt.format == "csv" ? Format::csv : opt.format == "json" ? Format::json : Format::table;
    std::ofstream file;
    if (!opt.path.empty()) {
        file.open(opt.path, std::ios::binary);
        if (!file) throw UsageError("cannot open output file " + opt.path);
    }
    std::ostream& data_os = opt.path.empty() ? out : static_cast<std::ostream&>(file);
    switch (f) {
    case Format::table:
        write_table(d, data_os);
        write_summary(d, data_os);
        break;
    case Format::csv:
        write_csv(d, data_os);
        // keep the CSV stream parseable
        write_summary(d, opt.path.empty() ? err : out);
        break;
    case Format::json:
        write_json(d, data_os);
        if (!opt.path.empty()) write_summary(d, out);
        break;
    }
}

nlohmann::ordered_json base_meta(const std::string& command, bool si) {
    nlohmann::ordered_json meta;
    meta["command"] = command;
    meta["units"] = si ? "si" : "natural";
    meta["version"] = kVersion;
    meta["parameters"] = nlohmann::ordered_json::object();
    return meta;
}

void add_output_flags(CLI::App* app, OutputOptions& opt, const std::string& default_format) {
    opt.format = default_format;
    app->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    app->add_option("--out", opt.path, "Write data to FILE instead of standard output");
}

// ---- airy -------------------------------------------------------------------

struct AiryArgs {
    std::optional<double> eval;
    std::optional<int> zeros;
    OutputOptions out;
};

Dataset cmd_airy(const AiryArgs& a) {
    Dataset d;
    d.meta = base_meta("airy", false);
    if (a.eval) {
        const auto v = airy::evaluate(*a.eval);
        d.meta["parameters"]["x"] = *a.eval;
        d.columns = {{"x"}, {"ai"}, {"ai_prime"}, {"bi"}, {"bi_prime"}};
        d.rows.push_back({v.x, v.ai, v.ai_prime, v.bi, v.bi_prime});
    } else {
        d.meta["parameters"]["zeros"] = *a.zeros;
        d.columns = {{"n", Column::integer}, {"zero"}, {"e_tilde"}, {"ai_prime"}};
        for (int n = 1; n <= *a.zeros; ++n) {
            const double z = airy::ai_negative_zero(n);
            d.rows.push_back({static_cast<double>(n), z, -z, airy::ai_prime(z)});
        }
    }
    return d;
}

// ---- bouncer ----------------------------------------------------------------

struct BouncerArgs {
    int levels = 10;
    bool si_neutron = false;
    double mass = 0.5;
    double g = 2.0;
    OutputOptions out;
};

Dataset cmd_bouncer(const BouncerArgs& a) {
    PhysicalSystem system = a.si_neutron
        ? PhysicalSystem{.m_i = SiConstants::neutron_mass, .m_g = SiConstants::neutron_mass,
                         .g = SiConstants::standard_gravity, .v = 0.0, .a = 0.0, .hbar = SiConstants::hbar}
        : make_natural_system(a.mass).with_gravity(a.g);
    Dataset d;
    d.meta = base_meta("bouncer", a.si_neutron);
    d.meta["parameters"] = {{"levels", a.levels}, {"m_i", system.m_i}, {"m_g", system.m_g}, {"g", system.g},
                            {"hbar", system.hbar}};
    d.meta["parameters"]["alpha"] = bouncer::alpha(system);
    d.meta["parameters"]["energy_scale"] = bouncer::energy_scale(system);
    d.columns = {{"n", Column::integer}, {"e_tilde", Column::fixed, 4},
                 {"energy", a.si_neutron ? Column::scientific : Column::fixed, a.si_neutron ? 6 : 4},
                 {"p_outside", Column::percent, 2}};
    if (a.si_neutron) d.columns.push_back({"energy_peV", Column::fixed, 4});
    for (int n = 1; n <= a.levels; ++n) {
        const auto lv = bouncer::level(system, n);
        std::vector<double> row = {static_cast<double>(n), lv.e_tilde, lv.energy, lv.p_outside};
        if (a.si_neutron) row.push_back(lv.energy / SiConstants::electron_volt * 1e12);
        d.rows.push_back(std::move(row));
    }
    return d;
}

// ---- cow --------------------------------------------------------------------

struct CowArgs {
    double lambda = 2.0 * std::numbers::pi;
    double height = 1.0;
    double length = 1.0;
    std::optional<double> a;
    std::optional<double> mass;
    std::optional<double> hbar;
    bool si = false;
    bool via_transit = false;
    OutputOptions out;
};

Dataset cmd_cow(const CowArgs& c) {
    PhysicalSystem system = c.si ? PhysicalSystem{.m_i = SiConstants::neutron_mass, .m_g = SiConstants::neutron_mass,
                                                  .g = SiConstants::standard_gravity, .v = 0.0,
                                                  .a = SiConstants::standard_gravity, .hbar = SiConstants::hbar}
                                 : PhysicalSystem{.m_i = 1.0, .m_g = 1.0, .g = 1.0, .v = 0.0, .a = 1.0, .hbar = 1.0};
    if (c.mass) system.m_i = system.m_g = *c.mass;
    if (c.hbar) system.hbar = *c.hbar;
    if (c.a) system.a = *c.a;
    system.validate();
    const gravishift::InterferometerGeometry geom(c.lambda, c.height, c.length);

    Dataset d;
    d.meta = base_meta("cow", c.si);
    d.meta["parameters"] = {{"lambda", c.lambda}, {"height", c.height}, {"length", c.length},
                            {"area", geom.area()},  {"a", system.a},        {"m_i", system.m_i},
                            {"hbar", system.hbar}};
    const double phase = gravishift::cow_phase_shift(geom, system);
    d.columns = {{"phase_rad", Column::fixed, 12}, {"fringes", Column::fixed, 12}};
    std::vector<double> row = {phase, phase / (2.0 * std::numbers::pi)};
    if (c.via_transit) {
        const double transit = gravishift::cow_phase_shift_transit(geom, system);
        d.columns.push_back({"phase_transit_rad", Column::fixed, 12});
        d.columns.push_back({"relative_difference", Column::scientific, 3});
        row.push_back(transit);
        row.push_back(std::abs(transit - phase) / std::abs(phase));
    }
    d.rows.push_back(std::move(row));
    return d;
}

// ---- redshift ---------------------------------------------------------------

struct RedshiftArgs {
    double z = 0.0;
    bool si = false;
    std::optional<double> a;
    std::optional<double> mass;
    std::optional<double> hbar;
    std::optional<double> c;
    OutputOptions out;
};

Dataset cmd_redshift(const RedshiftArgs& r) {
    PhysicalSystem system = r.si ? PhysicalSystem{.m_i = SiConstants::neutron_mass, .m_g = SiConstants::neutron_mass,
                                                  .g = SiConstants::standard_gravity, .v = 0.0,
                                                  .a = SiConstants::standard_gravity, .hbar = SiConstants::hbar}
                                 : PhysicalSystem{.m_i = 1.0, .m_g = 1.0, .g = 1.0, .v = 0.0, .a = 1.0, .hbar = 1.0};
    if (r.mass) system.m_i = system.m_g = *r.mass;
    if (r.hbar) system.hbar = *r.hbar;
    if (r.a) system.a = *r.a;
    system.validate();
    const double c = r.c.value_or(r.si ? SiConstants::speed_of_light : 1.0);

    Dataset d;
    d.meta = base_meta("redshift", r.si);
    d.meta["parameters"] = {{"z", r.z}, {"a", system.a}, {"m_i", system.m_i}, {"hbar", system.hbar}, {"c", c}};
    d.meta["notes"] = "ratio uses m_eff = hbar omega' / c^2, a relativistic input to a nonrelativistic result";
    d.columns = {{"z", Column::scientific, 6}, {"delta_omega", Column::scientific, 10},
                 {"ratio", Column::scientific, 10}};
    d.rows.push_back({r.z, gravishift::frequency_shift(system, r.z), gravishift::redshift_ratio(system.a, r.z, c)});
    return d;
}

// ---- evolve -----------------------------------------------------------------

struct EvolveArgs {
    std::string demo;
    std::optional<double> dt;
    std::optional<double> duration;
    OutputOptions out;
};

Grid evolve_grid(const Grid& reference, const EvolveArgs& e) {
    const double dt = e.dt.value_or(reference.dt());
    const double duration = e.duration.value_or(reference.duration());
    if (!(dt > 0.0) || !(duration >= 0.0)) throw ParameterError("dt must be positive and duration non-negative");
    const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
    return reference.with_time(dt, steps);
}

void add_run_meta(Dataset& d, const PhysicalSystem& s, const Grid& g) {
    d.meta["parameters"] = {{"m_i", s.m_i}, {"m_g", s.m_g}, {"g", s.g},     {"a", s.a},
                            {"v", s.v},     {"hbar", s.hbar}, {"z_min", g.z_min()}, {"z_max", g.z_max()},
                            {"n_points", g.n_points()}, {"dt", g.dt()}, {"n_steps", g.n_steps()}};
}

Dataset demo_frame_equivalence(const EvolveArgs& e) {
    auto ref = dynamics::reference_setup();
    const Grid grid = evolve_grid(ref.grid, e);
    const auto r = dynamics::frame_equivalence(ref.psi0, ref.system, grid);
    Dataset d;
    d.meta = base_meta("evolve", false);
    d.meta["demo"] = "frame-equivalence";
    add_run_meta(d, ref.system, grid);
    d.columns = {{"z"}, {"re_free_frame"}, {"im_free_frame"}, {"re_direct"}, {"im_direct"}, {"abs_diff"}};
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.n_points(); ++k) {
        const double diff = std::abs(r.via_free_frame[k] - r.direct[k]);
        worst = std::max(worst, diff);
        d.rows.push_back({grid.z(k), r.via_free_frame[k].real(), r.via_free_frame[k].imag(), r.direct[k].real(),
                          r.direct[k].imag(), diff});
    }
    d.summary = {{"max_mismatch", worst},
                 {"norm_drift_free", r.norm_drift_free},
                 {"norm_drift_direct", r.norm_drift_direct}};
    return d;
}

Dataset demo_free_dispersion(const EvolveArgs& e) {
    auto ref = dynamics::reference_setup();
    const Grid grid = evolve_grid(ref.grid, e);
    const PhysicalSystem system = ref.system.with_gravity(0.0).with_frame(0.0, 0.0);
    dynamics::PropagationOptions opt;
    opt.sample_every = std::max<std::size_t>(1, grid.n_steps() / 100);
    const auto report = dynamics::propagate_linear_potential(ref.psi0, system, 0.0, grid, opt);

    const double sigma0 = report.moment_series.front().m.sigma_z;
    Dataset d;
    d.meta = base_meta("evolve", false);
    d.meta["demo"] = "free-dispersion";
    add_run_meta(d, system, grid);
    d.columns = {{"t"}, {"sigma_z"}, {"sigma_analytic"}, {"rel_err"}};
    double worst = 0.0;
    for (const auto& s : report.moment_series) {
        const double tau = system.hbar * s.t / (2.0 * system.m_i * sigma0 * sigma0);
        const double analytic = sigma0 * std::sqrt(1.0 + tau * tau);
        const double rel = std::abs(s.m.sigma_z - analytic) / analytic;
        worst = std::max(worst, rel);
        d.rows.push_back({s.t, s.m.sigma_z, analytic, rel});
    }
    d.summary = {{"max_rel_err", worst}, {"norm_drift", report.norm_drift}};
    return d;
}

Dataset demo_bouncer_moments(const EvolveArgs& e) {
    auto ref = dynamics::reference_setup();
    const Grid grid = evolve_grid(ref.grid, e);
    const PhysicalSystem system = ref.system.with_frame(0.0, 0.0);
    dynamics::PropagationOptions opt;
    opt.sample_every = std::max<std::size_t>(1, grid.n_steps() / 1000);
    const auto report = dynamics::propagate_linear_potential(ref.psi0, system, system.force(), grid, opt);
    const auto checks = dynamics::heisenberg_checks(report, system);

    Dataset d;
    d.meta = base_meta("evolve", false);
    d.meta["demo"] = "bouncer-moments";
    add_run_meta(d, system, grid);
    d.columns = {{"t"}, {"mean_z"}, {"mean_p"}, {"sigma_z"}, {"sigma_p"}};
    for (const auto& s : report.moment_series)
        d.rows.push_back({s.t, s.m.mean_z, s.m.mean_p, s.m.sigma_z, s.m.sigma_p});
    for (const auto& c : checks.checks) d.summary.emplace_back(c.name, c.residual);
    d.summary.emplace_back("all_passed", checks.all_passed() ? 1.0 : 0.0);
    d.summary.emplace_back("norm_drift", report.norm_drift);
    return d;
}

Dataset cmd_evolve(const EvolveArgs& e) {
    if (e.out.format == "json" && e.out.path.empty()) throw UsageError("--format json requires --out FILE");
    if (e.demo == "frame-equivalence") return demo_frame_equivalence(e);
    if (e.demo == "free-dispersion") return demo_free_dispersion(e);
    return demo_bouncer_moments(e);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equivalence-principle numerics: Airy spectra, frame maps, interferometry, propagation", "eepq"};
    app.require_subcommand(1);

    AiryArgs airy_args;
    auto* airy_cmd = app.add_subcommand("airy", "Airy functions at a point, or the negative zeros of Ai");
    auto* eval_opt = airy_cmd->add_option("--eval", airy_args.eval, "Evaluate Ai, Ai', Bi, Bi' at x");
    auto* zeros_opt =
        airy_cmd->add_option("--zeros", airy_args.zeros, "List the first N negative zeros of Ai")->check(CLI::Range(1, 50));
    eval_opt->excludes(zeros_opt);
    add_output_flags(airy_cmd, airy_args.out, "table");

    BouncerArgs bouncer_args;
    auto* bouncer_cmd = app.add_subcommand("bouncer", "Levels of the linear potential above a hard floor");
    bouncer_cmd->add_option("--levels", bouncer_args.levels, "Number of levels")->check(CLI::Range(1, 50));
    bouncer_cmd->add_flag("--si-neutron", bouncer_args.si_neutron, "Neutron in Earth gravity, SI units");
    bouncer_cmd->add_option("--mass", bouncer_args.mass, "Mass in natural units")->capture_default_str();
    bouncer_cmd->add_option("--g", bouncer_args.g, "Field strength in natural units")->capture_default_str();
    add_output_flags(bouncer_cmd, bouncer_args.out, "table");

    CowArgs cow_args;
    auto* cow_cmd = app.add_subcommand("cow", "Gravity-induced interferometer phase");
    cow_cmd->add_option("--lambda", cow_args.lambda, "Wavelength")->capture_default_str();
    cow_cmd->add_option("--height", cow_args.height, "Vertical beam separation z")->capture_default_str();
    cow_cmd->add_option("--length", cow_args.length, "Horizontal beam length d")->capture_default_str();
    cow_cmd->add_option("--a", cow_args.a, "Acceleration (default 1, or g in SI)");
    cow_cmd->add_option("--mass", cow_args.mass, "Inertial mass");
    cow_cmd->add_option("--hbar", cow_args.hbar, "Reduced Planck constant");
    cow_cmd->add_flag("--si", cow_args.si, "Neutron constants in SI units");
    cow_cmd->add_flag("--via-eq34,--via-transit-time", cow_args.via_transit,
                      "Also compute the phase from |m a t z / hbar| with t = d / v");
    add_output_flags(cow_cmd, cow_args.out, "table");

    RedshiftArgs red_args;
    auto* red_cmd = app.add_subcommand("redshift", "Frequency shift between detectors separated by z");
    red_cmd->add_option("--z", red_args.z, "Height difference")->required();
    red_cmd->add_flag("--si", red_args.si, "Neutron constants in SI units");
    red_cmd->add_option("--a", red_args.a, "Acceleration (default 1, or g in SI)");
    red_cmd->add_option("--mass", red_args.mass, "Inertial mass");
    red_cmd->add_option("--hbar", red_args.hbar, "Reduced Planck constant");
    red_cmd->add_option("--c", red_args.c, "Speed of light (default 1, or c in SI)");
    add_output_flags(red_cmd, red_args.out, "table");

    EvolveArgs evolve_args;
    auto* evolve_cmd = app.add_subcommand("evolve", "Crank-Nicolson demonstrations on the reference packet");
    evolve_cmd->add_option("--demo", evolve_args.demo, "Which demonstration to run")
        ->required()
        ->check(CLI::IsMember({"frame-equivalence", "bouncer-moments", "free-dispersion"}));
    evolve_cmd->add_option("--dt", evolve_args.dt, "Time step (default 1e-4)");
    evolve_cmd->add_option("--duration", evolve_args.duration, "Total time (default 1)");
    add_output_flags(evolve_cmd, evolve_args.out, "csv");

    std::vector<const char*> argv{"eepq"};
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (airy_cmd->parsed() && !airy_args.eval && !airy_args.zeros)
            throw UsageError("airy needs --eval X or --zeros N");

        Dataset d;
        const OutputOptions* opt = nullptr;
        if (airy_cmd->parsed()) {
            d = cmd_airy(airy_args);
            opt = &airy_args.out;
        } else if (bouncer_cmd->parsed()) {
            d = cmd_bouncer(bouncer_args);
            opt = &bouncer_args.out;
        } else if (cow_cmd->parsed()) {
            d = cmd_cow(cow_args);
            opt = &cow_args.out;
        } else if (red_cmd->parsed()) {
            d = cmd_redshift(red_args);
            opt = &red_args.out;
        } else {
            d = cmd_evolve(evolve_args);
            opt = &evolve_args.out;
        }
        emit(d, *opt, out, err);
        return kOk;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kNumericFailure;
    }
}

} // namespace eepq::cli
