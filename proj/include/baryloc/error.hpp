#pragma once

#include <stdexcept>
#include <string>

namespace baryloc {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define BARYLOC_DEFINE_ERROR(Name)              \
  class Name : public Error {                   \
   public:                                      \
    using Error::Error;                         \
  }

// geometry
BARYLOC_DEFINE_ERROR(DegenerateInput);      // distances not realizable in the plane
BARYLOC_DEFINE_ERROR(CollinearNeighbors);   // neighbor triangle has (near-)zero area

// signs
BARYLOC_DEFINE_ERROR(InconsistentMagnitudes);  // no sign pattern sums to 1
BARYLOC_DEFINE_ERROR(NotZeroCase);
BARYLOC_DEFINE_ERROR(AmbiguousZeroCase);
BARYLOC_DEFINE_ERROR(UnresolvableAmbiguity);

// network
BARYLOC_DEFINE_ERROR(MissingCoefficient);
BARYLOC_DEFINE_ERROR(IndexOutOfRange);

// spectra
BARYLOC_DEFINE_ERROR(NoConvergence);

// preconditioner
BARYLOC_DEFINE_ERROR(DesignFailure);
BARYLOC_DEFINE_ERROR(NotSchur);

// solver
BARYLOC_DEFINE_ERROR(Diverged);
BARYLOC_DEFINE_ERROR(SingularSystem);

// scenario
BARYLOC_DEFINE_ERROR(GenerationFailure);
BARYLOC_DEFINE_ERROR(ParseError);
BARYLOC_DEFINE_ERROR(VersionMismatch);

#undef BARYLOC_DEFINE_ERROR

}  // namespace baryloc
