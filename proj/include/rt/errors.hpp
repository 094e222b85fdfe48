#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rt {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexArityError : public Error {
 public:
  using Error::Error;
};
class SubscriptKindError : public Error {
 public:
  using Error::Error;
};
class DimMismatchError : public Error {
 public:
  using Error::Error;
};
class BoundsError : public Error {
 public:
  using Error::Error;
};
class UnknownIndexError : public Error {
 public:
  using Error::Error;
};
class AssignKindError : public Error {
 public:
  using Error::Error;
};
class OperandKindError : public Error {
 public:
  using Error::Error;
};
class ElementKindError : public Error {
 public:
  using Error::Error;
};

/// A square page of a left/right division had no unique solution.
class SingularPageError : public Error {
 public:
  SingularPageError(std::size_t page, const std::string& what)
      : Error(what), page_(page) {}
  std::size_t page() const noexcept { return page_; }

 private:
  std::size_t page_;
};

}  // namespace rt
