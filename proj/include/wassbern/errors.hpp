#ifndef WASSBERN_ERRORS_HPP
#define WASSBERN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wassbern {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidMatrix : Error { using Error::Error; };
struct NotPsd : Error { using Error::Error; };
struct DimMismatch : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct EmptyData : Error { using Error::Error; };
struct DegenerateInput : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };

struct ParseError : Error {
    long line;
    ParseError(const std::string& msg, long line_no)
        : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

}  // namespace wassbern

#endif
