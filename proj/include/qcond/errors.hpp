#pragma once

#include <stdexcept>
#include <string>

namespace qcond {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

#define QCOND_DEFINE_ERROR(NAME)                                 \
    class NAME : public Error {                                  \
      public:                                                    \
        explicit NAME(const std::string &msg) : Error(msg) {}    \
    }

QCOND_DEFINE_ERROR(InvalidWeights);
QCOND_DEFINE_ERROR(ZeroMassSet);
QCOND_DEFINE_ERROR(DomainMismatch);
QCOND_DEFINE_ERROR(PairRestrictionViolation);
QCOND_DEFINE_ERROR(SubsetViolation);
QCOND_DEFINE_ERROR(BackendCapExceeded);
QCOND_DEFINE_ERROR(InvalidParameter);
QCOND_DEFINE_ERROR(InvalidComparison);
QCOND_DEFINE_ERROR(DegenerateRatio);
QCOND_DEFINE_ERROR(CalibrationFailure);
QCOND_DEFINE_ERROR(DimensionMismatch);
QCOND_DEFINE_ERROR(OddDimension);
QCOND_DEFINE_ERROR(SizeLimit);
QCOND_DEFINE_ERROR(CoincidentPoints);
QCOND_DEFINE_ERROR(ConfigError);
QCOND_DEFINE_ERROR(InsufficientData);

#undef QCOND_DEFINE_ERROR

}  // namespace qcond
