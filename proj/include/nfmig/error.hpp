#pragma once

#include <stdexcept>
#include <string>

namespace nfmig {

// Base of every error the library throws. what() always names the offending
// entity (host id, nf id, scenario key, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// core-model
class DuplicateId : public Error {
 public:
  explicit DuplicateId(const std::string& id) : Error("duplicate id '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class DanglingReference : public Error {
 public:
  DanglingReference(const std::string& from, const std::string& to)
      : Error("'" + from + "' references unknown id '" + to + "'"), from_(from), to_(to) {}
  const std::string& from() const noexcept { return from_; }
  const std::string& to() const noexcept { return to_; }

 private:
  std::string from_;
  std::string to_;
};

class InvariantViolation : public Error {
 public:
  InvariantViolation(const std::string& entity, const std::string& detail)
      : Error("invariant violated for " + entity + ": " + detail), entity_(entity), detail_(detail) {}
  const std::string& entity() const noexcept { return entity_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string entity_;
  std::string detail_;
};

class NoPath : public Error {
 public:
  NoPath(const std::string& a, const std::string& b) : Error("no path between '" + a + "' and '" + b + "'") {}
};

// sim-engine
class SchedulingInPast : public Error {
 public:
  using Error::Error;
};

// migration-engine
class StrategyInapplicable : public Error {
 public:
  using Error::Error;
};

class InsufficientCapacity : public Error {
 public:
  using Error::Error;
};

class ReplicaNotSynced : public Error {
 public:
  using Error::Error;
};

// policy
class InvalidCombination : public Error {
 public:
  using Error::Error;
};

// scenario-cli
class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nfmig
