#pragma once

#include <stdexcept>
#include <string>

namespace epkit {

// Coarse failure classes; the CLI maps them to exit codes.
enum class ErrorClass {
  Parse,         // malformed input files or flags
  Precondition,  // inputs violate an operation's contract
  Numerical,     // an algorithm failed on admissible input
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

#define EPKIT_DEFINE_ERROR(Name, Class)                                              \
  class Name : public Error {                                                        \
   public:                                                                           \
    explicit Name(const std::string& what) : Error(ErrorClass::Class, what) {}       \
  }

EPKIT_DEFINE_ERROR(ParseError, Parse);
EPKIT_DEFINE_ERROR(ShapeError, Precondition);
EPKIT_DEFINE_ERROR(ParameterError, Precondition);
EPKIT_DEFINE_ERROR(PreconditionError, Precondition);
EPKIT_DEFINE_ERROR(PoleError, Precondition);
EPKIT_DEFINE_ERROR(IncompatibleSubsystemsError, Precondition);
EPKIT_DEFINE_ERROR(DegenerateCouplingError, Precondition);
EPKIT_DEFINE_ERROR(FitError, Precondition);
EPKIT_DEFINE_ERROR(DegeneracyError, Numerical);
EPKIT_DEFINE_ERROR(NoSolutionError, Numerical);
EPKIT_DEFINE_ERROR(ConvergenceError, Numerical);
EPKIT_DEFINE_ERROR(StructureError, Numerical);

#undef EPKIT_DEFINE_ERROR

}  // namespace epkit
