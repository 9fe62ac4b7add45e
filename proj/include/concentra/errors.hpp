#pragma once

#include <stdexcept>
#include <string>

namespace concentra {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input-side failures: unreadable files, malformed rows, schema violations.
// The CLI maps these to exit code 2.
class InputError : public Error {
public:
    using Error::Error;
};

// Violations of domain contracts (preconditions, invariants). Exit code 3.
class DomainError : public Error {
public:
    using Error::Error;
};

#define CONCENTRA_ERROR(NAME, BASE)                                           \
    class NAME : public BASE {                                                \
    public:                                                                   \
        using BASE::BASE;                                                     \
    }

CONCENTRA_ERROR(IoError, InputError);
CONCENTRA_ERROR(ParseError, InputError);
CONCENTRA_ERROR(SchemaError, InputError);

// market-model
CONCENTRA_ERROR(AllZeroTotal, DomainError);
CONCENTRA_ERROR(NegativeCount, DomainError);
CONCENTRA_ERROR(NegativeShare, DomainError);
CONCENTRA_ERROR(SharesDoNotSum, DomainError);
CONCENTRA_ERROR(DuplicateFirm, DomainError);

// concentration-indices
CONCENTRA_ERROR(UnknownFirm, DomainError);
CONCENTRA_ERROR(SameFirm, DomainError);
CONCENTRA_ERROR(NonPositiveAlpha, DomainError);
CONCENTRA_ERROR(DegenerateDenominator, DomainError);
CONCENTRA_ERROR(OutOfRange, DomainError);
CONCENTRA_ERROR(InvalidOrder, DomainError);

// stats-toolkit
CONCENTRA_ERROR(TooFewPoints, DomainError);
CONCENTRA_ERROR(EmptySeries, DomainError);
CONCENTRA_ERROR(LengthMismatch, DomainError);
CONCENTRA_ERROR(ZeroVariance, DomainError);
CONCENTRA_ERROR(NonPositiveMeanForCV, DomainError);

// clustering
CONCENTRA_ERROR(TooManyClusters, DomainError);
CONCENTRA_ERROR(DimensionMismatch, DomainError);
CONCENTRA_ERROR(EmptyInput, DomainError);
CONCENTRA_ERROR(MismatchedInputs, DomainError);

#undef CONCENTRA_ERROR

} // namespace concentra
