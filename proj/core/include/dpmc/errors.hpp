#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpmc {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(reason) {}

  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

/// The input uses a construct outside the supported word-level fragment.
class UnsupportedFeature : public std::runtime_error {
 public:
  UnsupportedFeature(std::size_t line, const std::string& kind)
      : std::runtime_error("line " + std::to_string(line) +
                           ": unsupported feature '" + kind + "'"),
        kind_(kind) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class SortMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A deterministic step budget was exhausted.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnmappedSymbol : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NotUnsat : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NotSpurious : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dpmc
