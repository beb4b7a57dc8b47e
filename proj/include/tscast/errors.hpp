#pragma once

#include <stdexcept>
#include <string>

namespace tscast {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : Error {
    using Error::Error;
};

struct RowError : Error {
    std::size_t line;
    RowError(std::size_t line_no, const std::string& msg)
        : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

struct DuplicateDateError : Error {
    using Error::Error;
};

struct EmptySeriesError : Error {
    using Error::Error;
};

struct TooShortError : Error {
    using Error::Error;
};

struct ZeroRangeError : Error {
    using Error::Error;
};

struct HeadLengthError : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

struct SelectionError : Error {
    using Error::Error;
};

struct DivergenceError : Error {
    std::size_t epoch;
    DivergenceError(std::size_t epoch_idx, const std::string& msg)
        : Error("epoch " + std::to_string(epoch_idx) + ": " + msg), epoch(epoch_idx) {}
};

struct MetricMissingError : Error {
    using Error::Error;
};

}  // namespace tscast
