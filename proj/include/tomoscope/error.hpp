#pragma once

#include <stdexcept>
#include <string>

namespace tomoscope {

enum class ErrorCode {
  InvalidSpec,
  DegenerateInput,
  EmptySection,
  IllConditioned,
  DegenerateAxis,
  PointOutsideBody,
  ConfigurationInvalid,
  NonUniqueDiameter,
  MissingLines,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tomoscope
