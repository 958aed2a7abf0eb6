#pragma once

#include <stdexcept>
#include <string>

namespace korovkin {

// Error categories; the CLI maps these onto process exit codes.
enum class errc {
  input,              // malformed argument (dimension mismatch, delta <= 0, ...)
  domain,             // point outside the region an operation is defined on
  config,             // bad configuration (empty grid, K1 not inside K, ...)
  evaluation,         // a target function failed at a required point
  parse,              // expression / family-file syntax error
  growth,             // growth hypothesis or growth certificate violated
  truncation,         // sampling truncation too small for the request
  mode,               // operation called in the wrong domain mode
  insufficient_data,  // not enough process indices to form a verdict
};

class error : public std::runtime_error {
public:
  error(errc kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  errc kind() const noexcept { return kind_; }

private:
  errc kind_;
};

inline const char* errc_name(errc k) {
  switch (k) {
    case errc::input: return "input";
    case errc::domain: return "domain";
    case errc::config: return "config";
    case errc::evaluation: return "evaluation";
    case errc::parse: return "parse";
    case errc::growth: return "growth";
    case errc::truncation: return "truncation";
    case errc::mode: return "mode";
    case errc::insufficient_data: return "insufficient-data";
  }
  return "unknown";
}

}  // namespace korovkin
