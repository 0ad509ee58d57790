#pragma once

#include <stdexcept>
#include <string>

namespace formav {

// Base error for anything the library raises beyond plain contract
// violations (those use std::invalid_argument).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input document (bad JSON, bad CSV shape, missing header).
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid input that points at something unknown or
// duplicated (item ids, construct ids, respondent ids).
struct ReferenceError : Error {
    using Error::Error;
};

}  // namespace formav
