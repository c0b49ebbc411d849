#pragma once

#include <stdexcept>
#include <string>

namespace mxspec {

// Every failure surfaced by the library carries the name of the module that
// raised it, so front ends can report `error[<module>]: ...`.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

class ParseError : public Error {
 public:
  ParseError(std::string module, std::size_t line, const std::string& message)
      : Error(std::move(module), "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace module {
inline constexpr const char* kCore = "multiplex-core";
inline constexpr const char* kGenerators = "generators";
inline constexpr const char* kOperators = "operators";
inline constexpr const char* kSpectral = "spectral-engine";
inline constexpr const char* kCut = "cut-analysis";
inline constexpr const char* kExperiments = "experiments";
inline constexpr const char* kCli = "cli";
}  // namespace module

}  // namespace mxspec
