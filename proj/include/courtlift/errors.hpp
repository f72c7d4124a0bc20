#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace courtlift {

enum class ErrorCode {
    // camera
    DepthNonPositive,
    NoConvergence,
    RayParallelToPlane,
    IntersectionBehindCamera,
    NonPositiveScale,
    // reconstruct
    DegenerateVertical,
    GroundIntersectionFailed,
    BothPlanesDegenerate,
    NonPositiveDiameter,
    // predictors
    MissingGroundTruth,
    InvalidPredictorSpec,
    // metrics
    LengthMismatch,
    EmptyInput,
    BadBins,
    // synth
    InvalidSpec,
    FrameCoverageFailure,
    // dataio
    SchemaVersionMismatch,
    MalformedRecord,
    FoldViolation,
    UnknownFold,
    OneSidedDataset,
    IoFailure,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the named codes above.
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace courtlift
