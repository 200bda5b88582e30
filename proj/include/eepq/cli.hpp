#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eepq::cli {

/// Process exit codes; stable for scripting.
enum ExitCode : int {
    kOk = 0,
    kNumericFailure = 1,
    kUsage = 2,
};

/// CODATA values used by the --si modes. The library itself takes every
/// constant from its caller; this is that caller.
struct SiConstants {
    static constexpr double neutron_mass = 1.67492749804e-27; // kg
    static constexpr double hbar = 1.054571817e-34;           // J s
    static constexpr double standard_gravity = 9.80665;       // m s^-2
    static constexpr double speed_of_light = 299792458.0;     // m s^-1
    static constexpr double electron_volt = 1.602176634e-19;  // J
};

/// Runs one command line (without the program name). Data goes to `out` or to
/// the --out file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace eepq::cli
