#pragma once

#include <stdexcept>
#include <string>

namespace confluence {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CONFLUENCE_DEFINE_ERROR(Name)      \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

CONFLUENCE_DEFINE_ERROR(DivisionByNonUnit);
CONFLUENCE_DEFINE_ERROR(PoleAtNonPositiveInteger);
CONFLUENCE_DEFINE_ERROR(ZeroModulus);
CONFLUENCE_DEFINE_ERROR(SingularGauge);
CONFLUENCE_DEFINE_ERROR(NotAnUnfoldingBase);
CONFLUENCE_DEFINE_ERROR(NonGeneric);
CONFLUENCE_DEFINE_ERROR(InvariantMismatch);
CONFLUENCE_DEFINE_ERROR(Step1Failure);
CONFLUENCE_DEFINE_ERROR(SingularityTooClose);
CONFLUENCE_DEFINE_ERROR(StepUnderflow);
CONFLUENCE_DEFINE_ERROR(DegenerateDenominator);
CONFLUENCE_DEFINE_ERROR(NoConvergence);
CONFLUENCE_DEFINE_ERROR(OnCut);
CONFLUENCE_DEFINE_ERROR(PoleAtZero);
CONFLUENCE_DEFINE_ERROR(ContractionViolated);
CONFLUENCE_DEFINE_ERROR(NoOverlap);
CONFLUENCE_DEFINE_ERROR(GammaPole);
CONFLUENCE_DEFINE_ERROR(ParseError);
CONFLUENCE_DEFINE_ERROR(InfeasibleConfig);

#undef CONFLUENCE_DEFINE_ERROR

}  // namespace confluence
