#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace madness::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 on a validation or data failure, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// printf("%.6g") for stable text output.
std::string fmt6(double value);

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace madness::cli
