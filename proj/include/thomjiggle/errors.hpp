#pragma once

#include <stdexcept>
#include <string>

namespace thom {

/// Base class of every error raised by the library. `kind()` names the
/// failure category and is what reports and the CLI print.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define THOM_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(#Name, what) {}           \
  }

THOM_DEFINE_ERROR(DegenerateSimplex);
THOM_DEFINE_ERROR(ImproperColoring);
THOM_DEFINE_ERROR(DanglingVertexId);
THOM_DEFINE_ERROR(NotSimplicial);
THOM_DEFINE_ERROR(UnknownSimplex);
THOM_DEFINE_ERROR(DimensionMismatch);
THOM_DEFINE_ERROR(SizeLimitExceeded);
THOM_DEFINE_ERROR(TilingFailure);
THOM_DEFINE_ERROR(InvalidParams);
THOM_DEFINE_ERROR(GluingConflict);
THOM_DEFINE_ERROR(InvalidTime);
THOM_DEFINE_ERROR(UnsupportedDimension);
THOM_DEFINE_ERROR(DiameterTooLarge);
THOM_DEFINE_ERROR(DomainMismatch);
THOM_DEFINE_ERROR(OrderExhausted);
THOM_DEFINE_ERROR(DegenerateFiberForm);
THOM_DEFINE_ERROR(LeftDomain);
THOM_DEFINE_ERROR(StepUnderflow);
THOM_DEFINE_ERROR(QuadratureFailure);
THOM_DEFINE_ERROR(RejectionExhausted);
THOM_DEFINE_ERROR(SchemaViolation);
THOM_DEFINE_ERROR(NotComposable);
THOM_DEFINE_ERROR(FormCheckFailed);

#undef THOM_DEFINE_ERROR

}  // namespace thom
