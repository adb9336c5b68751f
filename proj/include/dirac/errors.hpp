#pragma once

#include <stdexcept>
#include <string>

namespace dirac {

// Error categories aligned with the CLI exit codes.
class Error : public std::runtime_error {
  public:
    Error(int exit_code, const std::string& what) : std::runtime_error(what), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

  private:
    int exit_code_;
};

// Malformed or unreadable input data (exit code 2).
class ParseError : public Error {
  public:
    explicit ParseError(const std::string& what) : Error(2, what) {}
};

// Structurally valid input that violates an operation's preconditions (exit code 3).
class DomainError : public Error {
  public:
    explicit DomainError(const std::string& what) : Error(3, what) {}
};

// Computation exceeds a configured resource bound (exit code 4).
class ResourceError : public Error {
  public:
    explicit ResourceError(const std::string& what) : Error(4, what) {}
};

// Broken internal invariant; always a bug (exit code 5).
class InternalError : public Error {
  public:
    explicit InternalError(const std::string& what) : Error(5, what) {}
};

#define DIRAC_REQUIRE(cond, msg)                                                                   \
    do {                                                                                           \
        if (!(cond))                                                                               \
            throw ::dirac::InternalError(std::string(msg) + " [" + __FILE__ + ":" +                \
                                         std::to_string(__LINE__) + "]");                          \
    } while (0)

}  // namespace dirac
