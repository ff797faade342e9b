#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posgood {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// bad arguments, undefined density, wrong mode
class DomainError : public Error {
public:
    using Error::Error;
};

class InfeasibleAllocation : public Error {
public:
    using Error::Error;
};

// hypothesis of a characterization fails
class InapplicableCondition : public Error {
public:
    using Error::Error;
};

class SizeGuardError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace posgood
