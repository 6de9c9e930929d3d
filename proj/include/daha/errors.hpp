#pragma once

#include <stdexcept>
#include <string>

namespace daha {

enum ExitCode { exit_ok = 0, exit_check_failure = 1, exit_refusal = 2, exit_defect = 3 };

struct Error : std::runtime_error {
  int code;
  Error(const std::string& msg, int c) : std::runtime_error(msg), code(c) {}
};

// precondition / genericity refusals
struct Refusal : Error {
  explicit Refusal(const std::string& msg) : Error(msg, exit_refusal) {}
};

struct PoleError : Refusal {
  explicit PoleError(const std::string& msg) : Refusal("spectral-parameter pole: " + msg) {}
};

struct NonGeneric : Refusal {
  explicit NonGeneric(const std::string& msg) : Refusal(msg) {}
};

// internal consistency failures; these indicate bugs
struct Defect : Error {
  explicit Defect(const std::string& msg) : Error("internal defect: " + msg, exit_defect) {}
};

}  // namespace daha
