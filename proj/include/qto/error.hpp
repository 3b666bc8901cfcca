#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace qto {

enum class ErrorCode {
    Syntax,
    MissingField,
    DuplicateId,
    UnknownUnit,
    NonTriangularFace,
    IndexOutOfRange,
    MalformedNumber,
    EmptyMesh,
    NotWatertight,
    MissingColumn,
    InvariantViolation,
    DuplicateKey,
    DuplicateName,
    UnknownShape,
    NotCylindrical,
    NonPositive,
    MassBasisMissing,
    NotFound,
    Io,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::Syntax: return "syntax";
    case ErrorCode::MissingField: return "missing-field";
    case ErrorCode::DuplicateId: return "duplicate-id";
    case ErrorCode::UnknownUnit: return "unknown-unit";
    case ErrorCode::NonTriangularFace: return "non-triangular-face";
    case ErrorCode::IndexOutOfRange: return "index-out-of-range";
    case ErrorCode::MalformedNumber: return "malformed-number";
    case ErrorCode::EmptyMesh: return "empty-mesh";
    case ErrorCode::NotWatertight: return "not-watertight";
    case ErrorCode::MissingColumn: return "missing-column";
    case ErrorCode::InvariantViolation: return "invariant-violation";
    case ErrorCode::DuplicateKey: return "duplicate-key";
    case ErrorCode::DuplicateName: return "duplicate-name";
    case ErrorCode::UnknownShape: return "unknown-shape";
    case ErrorCode::NotCylindrical: return "not-cylindrical";
    case ErrorCode::NonPositive: return "non-positive";
    case ErrorCode::MassBasisMissing: return "mass-basis-missing";
    case ErrorCode::NotFound: return "not-found";
    case ErrorCode::Io: return "io";
    }
    return "unknown";
}

/// Every failure raised by the library. `line`/`column` are 1-based and zero
/// when the error is not tied to a text position; `element_id` is set by the
/// estimator when an error is attributable to a single element.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(decorate(what, line, column)), code_(code), line_(line), column_(column) {}

    ErrorCode code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& element_id() const noexcept { return element_id_; }

    Error with_element(std::string id) const {
        Error e(code_, "element " + id + ": " + what());
        e.line_ = line_;
        e.column_ = column_;
        e.element_id_ = std::move(id);
        return e;
    }

private:
    static std::string decorate(const std::string& what, std::size_t line, std::size_t column) {
        if (line == 0) {
            return what;
        }
        std::string pos = "line " + std::to_string(line);
        if (column != 0) {
            pos += ", column " + std::to_string(column);
        }
        return pos + ": " + what;
    }

    ErrorCode code_;
    std::size_t line_;
    std::size_t column_;
    std::string element_id_;
};

} // namespace qto
