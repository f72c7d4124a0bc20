#include "courtlift/errors.hpp"

namespace courtlift {

std::string_view to_string(ErrorCode code)
{
    switch (code)
    {
        case ErrorCode::DepthNonPositive: return "DepthNonPositive";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::RayParallelToPlane: return "RayParallelToPlane";
        case ErrorCode::IntersectionBehindCamera: return "IntersectionBehindCamera";
        case ErrorCode::NonPositiveScale: return "NonPositiveScale";
        case ErrorCode::DegenerateVertical: return "DegenerateVertical";
        case ErrorCode::GroundIntersectionFailed: return "GroundIntersectionFailed";
        case ErrorCode::BothPlanesDegenerate: return "BothPlanesDegenerate";
        case ErrorCode::NonPositiveDiameter: return "NonPositiveDiameter";
        case ErrorCode::MissingGroundTruth: return "MissingGroundTruth";
        case ErrorCode::InvalidPredictorSpec: return "InvalidPredictorSpec";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::BadBins: return "BadBins";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::FrameCoverageFailure: return "FrameCoverageFailure";
        case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
        case ErrorCode::MalformedRecord: return "MalformedRecord";
        case ErrorCode::FoldViolation: return "FoldViolation";
        case ErrorCode::UnknownFold: return "UnknownFold";
        case ErrorCode::OneSidedDataset: return "OneSidedDataset";
        case ErrorCode::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
  : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
    code_(code)
{}

}  // namespace courtlift
