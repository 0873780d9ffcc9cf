#pragma once

#include <stdexcept>
#include <string>

namespace roesser {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// QR iteration or Jacobi sweeps exceeded their cap.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// (I - delta A22) is singular at the requested boundary point.
class PoleHit : public Error {
 public:
  using Error::Error;
};

class ConfigTooLarge : public Error {
 public:
  using Error::Error;
};

class UnsupportedKind : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Model file errors carry the JSON path of the offending field.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)), detail_(what) {}
  /// Same error, reported as "<file>: <path>: <detail>".
  ParseError(const std::string& file, const ParseError& inner)
      : Error(file + ": " + inner.what()), path_(inner.path_), detail_(inner.detail_) {}
  const std::string& path() const noexcept { return path_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string path_;
  std::string detail_;
};

}  // namespace roesser
