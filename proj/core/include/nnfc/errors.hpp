// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace nnfc {

/// Process exit codes shared by the library error taxonomy and the CLI.
enum class ExitCode : int {
  kOk = 0,
  kConfig = 10,
  kBudget = 11,
  kDivergence = 12,
  kFlight = 13,
  kFormat = 14,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

/// Bad or missing configuration input (file, key, or parameter value).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::kConfig, what) {}
};

/// Malformed model blob: magic, version, dimension chain, or truncation.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(ExitCode::kFormat, what) {}
};

/// Model blob failed its CRC guard.
class CorruptionError : public Error {
 public:
  explicit CorruptionError(const std::string& what) : Error(ExitCode::kFormat, what) {}
};

/// Static footprint exceeds the configured memory budget.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(ExitCode::kBudget, what) {}
};

/// Training produced non-finite statistics.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what) : Error(ExitCode::kDivergence, what) {}
};

/// Simulation state became non-finite; the episode must be aborted.
class SimulationDivergedError : public Error {
 public:
  explicit SimulationDivergedError(const std::string& what)
      : Error(ExitCode::kDivergence, what) {}
};

/// A scripted flight hit its crash predicate.
class FlightError : public Error {
 public:
  explicit FlightError(const std::string& what) : Error(ExitCode::kFlight, what) {}
};

}  // namespace nnfc
