#ifndef MESHGRADE_ERROR_HPP
#define MESHGRADE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace meshgrade {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed documents: canonical mesh files, OBJ input, model files, CSV.
struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error("parse: " + what) {}
};

// Degenerate geometry (collinear nodes, zero-length medians).
struct GeometryError : Error {
  explicit GeometryError(const std::string& what) : Error("geometry: " + what) {}
};

// Model construction, training, and prediction failures.
struct ModelError : Error {
  explicit ModelError(const std::string& what) : Error("model: " + what) {}
};

// Invalid configuration values.
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error("config: " + what) {}
};

}  // namespace meshgrade

#endif
