#ifndef FRAMEKIT_ERROR_HPP
#define FRAMEKIT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace framekit {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called with inputs outside its documented domain.
class precondition_error : public error {
 public:
  using error::error;
};

/// Input does not match the frame / multiplier-system schema.
class schema_error : public error {
 public:
  using error::error;
};

/// Input text is not well-formed; line and column are 1-based.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t line, std::size_t column)
      : error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Problem size exceeds what an exact method is allowed to enumerate.
class capacity_error : public error {
 public:
  capacity_error(const std::string& what, std::size_t limit)
      : error(what), limit_(limit) {}
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
};

/// Eigensolver failed to converge or produced an inconsistent spectrum.
class numerical_error : public error {
 public:
  using error::error;
};

/// A finite randomized or enumerative search exhausted its budget.
class search_failure : public error {
 public:
  using error::error;
};

}  // namespace framekit

#endif  // FRAMEKIT_ERROR_HPP
