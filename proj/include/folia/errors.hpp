#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace folia {

/// Base of every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define FOLIA_ERROR(Name)                                            \
  class Name : public Error {                                        \
   public:                                                           \
    using Error::Error;                                              \
    const char* kind() const noexcept override { return #Name; }     \
  }

FOLIA_ERROR(DomainError);
FOLIA_ERROR(UnknownIdentifier);
FOLIA_ERROR(SchemaError);
FOLIA_ERROR(MetricNotSPD);
FOLIA_ERROR(DependentVerticalFrames);
FOLIA_ERROR(DegenerateFrame);
FOLIA_ERROR(DegeneratePlane);
FOLIA_ERROR(MissingJ);
FOLIA_ERROR(NotKahler);
FOLIA_ERROR(ZeroVector);
FOLIA_ERROR(ImageOutOfDomain);
FOLIA_ERROR(AssumptionViolated);
FOLIA_ERROR(UnboundedDilatation);
FOLIA_ERROR(MissingDistance);
FOLIA_ERROR(EikonalViolation);
FOLIA_ERROR(UnknownGallery);

#undef FOLIA_ERROR

/// Parse failure; `offset` is the byte position in the source string.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }
  const char* kind() const noexcept override { return "SyntaxError"; }

 private:
  std::size_t offset_;
};

}  // namespace folia
