#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cantor {

/// Malformed text input. `position` is the 0-based offset of the offending character.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// The retraction is defined on odd-cardinality group elements only.
class ParityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An input violates a caller-supplied subset predicate.
class PredicateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace cantor
