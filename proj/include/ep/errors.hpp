#pragma once
#include <stdexcept>
#include <string>

namespace ep {

// Process exit codes shared by all subcommands.
enum ExitCode : int {
  exit_ok = 0,
  exit_blowup = 2,       // gradient blow-up detected (expected for the pure-Euler contrast run)
  exit_usage = 3,        // config or usage error
  exit_instability = 4,  // NaN / numerical instability
  exit_precondition = 5, // neutrality, vacuum, or domain-too-small violation
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Precondition violations (exit code 5).
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct VacuumError : PreconditionError {
  explicit VacuumError(const std::string& msg) : PreconditionError(msg) {}
};

struct NeutralityError : PreconditionError {
  explicit NeutralityError(const std::string& msg) : PreconditionError(msg) {}
};

struct DomainTooSmallError : PreconditionError {
  explicit DomainTooSmallError(const std::string& msg) : PreconditionError(msg) {}
};

struct InstabilityError : std::runtime_error {
  explicit InstabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ep
