// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arpbox {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Errors caused by the geometry of the input rather than by the
// environment. The CLI maps these to exit code 2.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidPolygonError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateBoxError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Raised when a box is too close to axis-aligned for the area-ratio
// encoding; callers route such boxes through the horizontal-box path.
class NearHorizontalError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidBoxError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NumericError : public DomainError {
 public:
  using DomainError::DomainError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace arpbox
