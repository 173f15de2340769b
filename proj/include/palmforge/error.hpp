#pragma once

#include <stdexcept>
#include <string>

namespace palmforge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or out-of-range parameters. Maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Collinear reference joints, singular transforms.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Missing identity or gesture in an edge library.
class LookupError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Failure of a single render request; carries the request id.
class RenderError : public Error {
 public:
  RenderError(std::string request_id, const std::string& message)
      : Error("render request '" + request_id + "': " + message),
        request_id_(std::move(request_id)) {}

  const std::string& request_id() const noexcept { return request_id_; }

 private:
  std::string request_id_;
};

}  // namespace palmforge
