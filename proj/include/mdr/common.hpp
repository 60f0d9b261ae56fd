#pragma once

#include <stdexcept>
#include <string>

namespace mdr {

enum class Errc {
    InvalidInput,
    NotSquare,
    NonFinite,
    SymmetryViolation,
    TriangleViolation,
    NonzeroDiagonal,
    ZeroOffDiagonal,
    NonInjectiveMap,
    DegenerateSource,
    ThetaOutOfRange,
    TooLargeForExact,
    ConfigTooLarge,
    IndexMismatch,
    ParameterDomain,
    Overflow,
    NoFeasibleK,
    QuadratureNonConvergence,
    DenominatorNonpositive,
    RetriesExhausted,
    ZeroDistancePair,
    IterationCapExceeded,
    TooLarge,
    CertificateInvalid,
    NotPSD,
    Disconnected,
    NegativeWeight,
    NoGap,
    DegenerateConfiguration,
    CapExceeded,
    DegenerateCloud,
    GenerationFailure,
    HorizonTooLarge,
    InverseOutOfRange,
    BudgetInfeasible,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

enum class Exec { serial, parallel };

}  // namespace mdr
