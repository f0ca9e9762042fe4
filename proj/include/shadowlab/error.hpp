#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shadowlab {

// Base of everything the library throws on a violated precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::string const& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Parameter outside an operation's declared domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A configured resource cap (ball size, norm search radius, grid size) was hit.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class FamilyMismatch : public Error {
 public:
  FamilyMismatch() : Error("group elements belong to different families") {}
};

}  // namespace shadowlab
