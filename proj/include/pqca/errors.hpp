#pragma once

#include <stdexcept>
#include <string>

namespace pqca {

// Precondition and configuration failures. Verification outcomes (audit
// violations, failed certificate checks) are returned as data, not thrown.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define PQCA_ERROR_TYPE(Name)                                          \
    struct Name : Error {                                              \
        explicit Name(const std::string& what) : Error(what) {}        \
    }

PQCA_ERROR_TYPE(SphericalUnsupported);
PQCA_ERROR_TYPE(BudgetExceeded);
PQCA_ERROR_TYPE(UnknownVertex);
PQCA_ERROR_TYPE(NotApplicable);
PQCA_ERROR_TYPE(WrongFamily);
PQCA_ERROR_TYPE(NotInvariant);
PQCA_ERROR_TYPE(WeakeningNotApplicable);
PQCA_ERROR_TYPE(OutsidePositiveRegion);
PQCA_ERROR_TYPE(BoundaryVertex);
PQCA_ERROR_TYPE(ShapeMismatch);
PQCA_ERROR_TYPE(InsufficientMargin);
PQCA_ERROR_TYPE(DomainError);
PQCA_ERROR_TYPE(FaceDegreeNot4);
PQCA_ERROR_TYPE(RootNotInError);

#undef PQCA_ERROR_TYPE

}  // namespace pqca
