#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tgnn {

/// Malformed input file. `line` is 1-based; 0 means the whole file.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, int line, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

/// Semantically invalid input (bad parameters, broken invariants).
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query that cannot be answered: some trip has a disconnected leg.
/// `leg` is the 1-based index of the offending consecutive pair.
class InfeasibleQuery : public std::runtime_error {
 public:
  InfeasibleQuery(std::int32_t user_id, std::int32_t leg, const std::string& message)
      : std::runtime_error(message), user_id_(user_id), leg_(leg) {}

  std::int32_t user_id() const { return user_id_; }
  std::int32_t leg() const { return leg_; }

 private:
  std::int32_t user_id_;
  std::int32_t leg_;
};

}  // namespace tgnn
