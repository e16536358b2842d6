#pragma once

#include <stdexcept>
#include <string>

namespace radsim {

/// Raised when a config, point, scene, or argument violates its domain.
/// `field()` names the offending quantity.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// PSF measurement could not find a usable target response.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scene request cannot be satisfied (e.g. objects cannot be placed without overlap).
class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace radsim
