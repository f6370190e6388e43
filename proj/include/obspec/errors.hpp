#pragma once

#include <stdexcept>
#include <string>

namespace obspec {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define OBSPEC_DEFINE_ERROR(Name)                                            \
    struct Name : Error {                                                    \
        explicit Name(const std::string& what) : Error(what) {}              \
    }

// geometry
OBSPEC_DEFINE_ERROR(NonPositiveRadius);
OBSPEC_DEFINE_ERROR(TooFewNodes);
OBSPEC_DEFINE_ERROR(AngleOutOfRange);
OBSPEC_DEFINE_ERROR(BadGrading);
OBSPEC_DEFINE_ERROR(NonPositiveLength);

// special functions
OBSPEC_DEFINE_ERROR(NonPositiveArgument);
OBSPEC_DEFINE_ERROR(OrderTooLarge);

// layer operators
OBSPEC_DEFINE_ERROR(NonNegativeLambda);
OBSPEC_DEFINE_ERROR(MeshTooSmall);
OBSPEC_DEFINE_ERROR(OutsideGap);
OBSPEC_DEFINE_ERROR(PointTooCloseToCurve);

// spectral solver
OBSPEC_DEFINE_ERROR(NotSymmetric);
OBSPEC_DEFINE_ERROR(NonNegativeAlpha);
OBSPEC_DEFINE_ERROR(NonNegativeBeta);
OBSPEC_DEFINE_ERROR(BranchUnresolved);
OBSPEC_DEFINE_ERROR(BracketFailure);
OBSPEC_DEFINE_ERROR(NoBoundState);
OBSPEC_DEFINE_ERROR(GapEmpty);
OBSPEC_DEFINE_ERROR(NotConverged);

// asymptotics
OBSPEC_DEFINE_ERROR(UnderResolved);
OBSPEC_DEFINE_ERROR(HypothesisViolated);

// variational
OBSPEC_DEFINE_ERROR(OutOfRegime);
OBSPEC_DEFINE_ERROR(OverlappingCharts);

// cli
OBSPEC_DEFINE_ERROR(ConfigInvalid);
OBSPEC_DEFINE_ERROR(SolverFailed);
OBSPEC_DEFINE_ERROR(IoError);

#undef OBSPEC_DEFINE_ERROR

}  // namespace obspec
