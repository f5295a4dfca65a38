#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "zebra/guidance.hpp"
#include "zebra/psychoacoustics.hpp"

namespace zebra {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// "20deg", "0.3rad", "1.5m" or a bare number (radians or metres). The unit
// must suit the instruction: angles for rotation and pitch, metres for the
// rest. Throws InvalidArgument otherwise.
double parse_quantity(std::string_view text, Instruction instruction);

// Psychometric slope of the simulated listener, per unit of level: three
// times the inverse step so both dimensions behave alike.
double default_listener_slope(StaircaseDimension dimension);
// Ground-truth thresholds for the self-test: 1.15 dB ILD, 0.13 ms ITD.
double default_listener_threshold(StaircaseDimension dimension);

// args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace zebra
