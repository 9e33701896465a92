#pragma once

#include <stdexcept>
#include <string>

namespace dforge {

struct Error : std::runtime_error {
    std::string code;
    Error(std::string c, const std::string& msg) : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

#define DFORGE_ERROR(CODE)                                            \
    struct CODE : Error {                                             \
        explicit CODE(const std::string& m = "") : Error(#CODE, m) {} \
    }

DFORGE_ERROR(NotMonic);
DFORGE_ERROR(NotIrreducible);
DFORGE_ERROR(IndexDivisor);
DFORGE_ERROR(ZeroElement);
DFORGE_ERROR(NotIntegralAtP);
DFORGE_ERROR(UnverifiableCertificate);
DFORGE_ERROR(NotAUnit);
DFORGE_ERROR(RankMismatch);
DFORGE_ERROR(ClassDataMissing);
DFORGE_ERROR(ZeroPolynomial);
DFORGE_ERROR(NonIntegralCoefficient);
DFORGE_ERROR(AssumptionViolated);
DFORGE_ERROR(UnresolvedCase);
DFORGE_ERROR(SumNotSquare);
DFORGE_ERROR(Singular);
DFORGE_ERROR(ZeroTwist);
DFORGE_ERROR(NoRationalTwoTorsionAtOrigin);
DFORGE_ERROR(AmbiguousOrder);
DFORGE_ERROR(AdditiveReduction);
DFORGE_ERROR(InconsistentDegrees);
DFORGE_ERROR(CocycleIdentityFails);
DFORGE_ERROR(NotMultiquadratic);
DFORGE_ERROR(NoConsistentSquareRoot);
DFORGE_ERROR(NoSolutionInSUnits);
DFORGE_ERROR(DegenerateResolvent);
DFORGE_ERROR(CocycleMismatch);
DFORGE_ERROR(NoAdmissibleSplit);
DFORGE_ERROR(FormatError);
DFORGE_ERROR(ValidationError);
DFORGE_ERROR(Unavailable);
DFORGE_ERROR(RateLimited);
DFORGE_ERROR(MissingEigenvalue);
DFORGE_ERROR(AdditiveAtP);
DFORGE_ERROR(PrecisionExhausted);
DFORGE_ERROR(FactCheckFailed);
DFORGE_ERROR(ShapeViolation);

}  // namespace dforge
