#pragma once

// Command-line front end. `run` is the whole program minus process startup,
// so tests can drive every command in-process.

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace comarr::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kResourceRefused = 3,
  kPropertyFailed = 4,
  kOracleDisagreement = 5,
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

}  // namespace comarr::cli
