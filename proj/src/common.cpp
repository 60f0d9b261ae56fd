#include "mdr/common.hpp"

namespace mdr {

const char* errc_name(Errc c)
{
    switch (c) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::NotSquare: return "NotSquare";
    case Errc::NonFinite: return "NonFinite";
    case Errc::SymmetryViolation: return "SymmetryViolation";
    case Errc::TriangleViolation: return "TriangleViolation";
    case Errc::NonzeroDiagonal: return "NonzeroDiagonal";
    case Errc::ZeroOffDiagonal: return "ZeroOffDiagonal";
    case Errc::NonInjectiveMap: return "NonInjectiveMap";
    case Errc::DegenerateSource: return "DegenerateSource";
    case Errc::ThetaOutOfRange: return "ThetaOutOfRange";
    case Errc::TooLargeForExact: return "TooLargeForExact";
    case Errc::ConfigTooLarge: return "ConfigTooLarge";
    case Errc::IndexMismatch: return "IndexMismatch";
    case Errc::ParameterDomain: return "ParameterDomain";
    case Errc::Overflow: return "Overflow";
    case Errc::NoFeasibleK: return "NoFeasibleK";
    case Errc::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case Errc::DenominatorNonpositive: return "DenominatorNonpositive";
    case Errc::RetriesExhausted: return "RetriesExhausted";
    case Errc::ZeroDistancePair: return "ZeroDistancePair";
    case Errc::IterationCapExceeded: return "IterationCapExceeded";
    case Errc::TooLarge: return "TooLarge";
    case Errc::CertificateInvalid: return "CertificateInvalid";
    case Errc::NotPSD: return "NotPSD";
    case Errc::Disconnected: return "Disconnected";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::NoGap: return "NoGap";
    case Errc::DegenerateConfiguration: return "DegenerateConfiguration";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::DegenerateCloud: return "DegenerateCloud";
    case Errc::GenerationFailure: return "GenerationFailure";
    case Errc::HorizonTooLarge: return "HorizonTooLarge";
    case Errc::InverseOutOfRange: return "InverseOutOfRange";
    case Errc::BudgetInfeasible: return "BudgetInfeasible";
    }
    return "Unknown";
}

}  // namespace mdr
