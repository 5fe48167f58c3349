#pragma once

#include <stdexcept>
#include <string>

namespace bdcover {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define BDCOVER_DEFINE_ERROR(Name)                                          \
    struct Name : Error {                                                    \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

// lattice-foundations
BDCOVER_DEFINE_ERROR(NonInjective);
BDCOVER_DEFINE_ERROR(IndexInfinite);
BDCOVER_DEFINE_ERROR(DimensionMismatch);

// root-data
BDCOVER_DEFINE_ERROR(UnsupportedRank);
BDCOVER_DEFINE_ERROR(RealizationMismatch);
BDCOVER_DEFINE_ERROR(NoDecomposition);

// quad-forms
BDCOVER_DEFINE_ERROR(ParityViolation);

// ext-groups
BDCOVER_DEFINE_ERROR(ExtensionMismatch);
BDCOVER_DEFINE_ERROR(CoeffMismatch);
BDCOVER_DEFINE_ERROR(ParentsDiffer);

// bd-core
BDCOVER_DEFINE_ERROR(HypothesisViolation);
BDCOVER_DEFINE_ERROR(IncompatibleMaps);
BDCOVER_DEFINE_ERROR(NonDecomposable);

// local-symbols
BDCOVER_DEFINE_ERROR(ZeroInput);
BDCOVER_DEFINE_ERROR(InsufficientPrecision);
BDCOVER_DEFINE_ERROR(FieldMismatch);

// doubling-geometry
BDCOVER_DEFINE_ERROR(UnsupportedFamily);
BDCOVER_DEFINE_ERROR(NotInGroup);
BDCOVER_DEFINE_ERROR(NotUnipotentInFlag);
BDCOVER_DEFINE_ERROR(TooLarge);
BDCOVER_DEFINE_ERROR(ShapeMismatch);

// internal consistency violations (bugs, not user errors)
BDCOVER_DEFINE_ERROR(InternalError);

#undef BDCOVER_DEFINE_ERROR

}  // namespace bdcover
