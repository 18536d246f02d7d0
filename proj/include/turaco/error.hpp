#pragma once

#include <stdexcept>
#include <string>

namespace turaco {

// Base class for all toolchain failures surfaced to callers. The CLI maps any
// Error to exit code 1; usage problems are handled by the argument parser.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
public:
  ParseError(int line, int col, const std::string& msg)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line), col(col) {}
  int line;
  int col;
};

class EvalError : public Error {
public:
  using Error::Error;
};

class AnalysisError : public Error {
public:
  using Error::Error;
};

class DataError : public Error {
public:
  using Error::Error;
};

}  // namespace turaco
