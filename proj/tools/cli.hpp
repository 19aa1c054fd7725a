#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qhc::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitUnknownSubcommand = 64;

/// Runs one command line (without the program name).  Documents go to `out`,
/// the run manifest (when not written to a file) to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a digest, lowercase hex.
std::string fnv1a64(const std::string& data);

}  // namespace qhc::cli
