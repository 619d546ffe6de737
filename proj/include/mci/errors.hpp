#pragma once

#include <stdexcept>
#include <string>

namespace mci {

// Two failure families: validation errors are caller mistakes (bad data,
// broken preconditions), numerical errors are problems the algorithms hit on
// admissible-looking input. The CLI maps them to exit codes 2 and 3.
class Error : public std::runtime_error {
public:
  Error(std::string name, const std::string& message)
      : std::runtime_error(name + ": " + message), name_(std::move(name)) {}
  const std::string& name() const { return name_; }
  virtual int exit_code() const = 0;

private:
  std::string name_;
};

class ValidationError : public Error {
public:
  using Error::Error;
  ValidationError(const std::string& message) : Error("ValidationError", message) {}
  int exit_code() const override { return 2; }
};

class NumericalError : public Error {
public:
  using Error::Error;
  NumericalError(const std::string& message) : Error("NumericalError", message) {}
  int exit_code() const override { return 3; }
};

#define MCI_VALIDATION_ERROR(Name)                                         \
  class Name : public ValidationError {                                    \
  public:                                                                  \
    explicit Name(const std::string& message)                              \
        : ValidationError(#Name, message) {}                               \
  }

#define MCI_NUMERICAL_ERROR(Name)                                          \
  class Name : public NumericalError {                                     \
  public:                                                                  \
    explicit Name(const std::string& message)                              \
        : NumericalError(#Name, message) {}                                \
  }

MCI_VALIDATION_ERROR(DimensionError);
MCI_VALIDATION_ERROR(SpectralRadiusError);
MCI_VALIDATION_ERROR(NotPSD);
MCI_VALIDATION_ERROR(NotHermitian);
MCI_VALIDATION_ERROR(DuplicatePoint);
MCI_VALIDATION_ERROR(PointOutsideDisc);
MCI_VALIDATION_ERROR(AngleCollision);
MCI_VALIDATION_ERROR(ZeroMarkov);
MCI_VALIDATION_ERROR(StructureViolation);
MCI_VALIDATION_ERROR(UnstableF);
MCI_VALIDATION_ERROR(UnstableModel);
MCI_VALIDATION_ERROR(UnstableDenominator);
MCI_VALIDATION_ERROR(DomainMismatch);
MCI_VALIDATION_ERROR(EmptyAfterBurnIn);
MCI_VALIDATION_ERROR(ParseError);

MCI_NUMERICAL_ERROR(DegeneratePencil);
MCI_NUMERICAL_ERROR(SingularSystem);
MCI_NUMERICAL_ERROR(NearPole);
MCI_NUMERICAL_ERROR(UnstableOptimizer);
MCI_NUMERICAL_ERROR(SingularBilinear);
MCI_NUMERICAL_ERROR(XiBZero);

#undef MCI_VALIDATION_ERROR
#undef MCI_NUMERICAL_ERROR

} // namespace mci
