#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psr::cli {

constexpr const char* kVersion = "1.0.0";

constexpr int kExitUsage = 64;
constexpr int kExitMalformed = 65;
constexpr int kExitComputation = 3;

// args excludes the program name. Returns the process exit code.
int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace psr::cli
