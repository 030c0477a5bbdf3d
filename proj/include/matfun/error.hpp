#ifndef MATFUN_ERROR_HPP
#define MATFUN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace matfun {

enum class ErrorCode {
    DivisionByZero,
    BackendMismatch,
    UnsupportedBackend,
    ZeroPolynomial,
    DegreeZero,
    DerivativeZero,
    FieldTooLarge,
    NoConvergence,
    EigenvaluesNotSplit,
    NumericallyDefective,
    SearchSpaceTooLarge,
    UnknownFunction,
    ParseError,
    InvalidArgument,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::BackendMismatch: return "BackendMismatch";
        case ErrorCode::UnsupportedBackend: return "UnsupportedBackend";
        case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorCode::DegreeZero: return "DegreeZero";
        case ErrorCode::DerivativeZero: return "DerivativeZero";
        case ErrorCode::FieldTooLarge: return "FieldTooLarge";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::EigenvaluesNotSplit: return "EigenvaluesNotSplit";
        case ErrorCode::NumericallyDefective: return "NumericallyDefective";
        case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
        case ErrorCode::UnknownFunction: return "UnknownFunction";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

}  // namespace matfun

#endif
