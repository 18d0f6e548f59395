#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace revrank::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one command (argv without the program name). Never throws.
/// Commands: simulate, rank, tournament, fit-beta, compare, export, validate.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, used for config and input fingerprints in run metadata.
std::uint64_t fnv1a(const std::string& text);

}  // namespace revrank::cli
