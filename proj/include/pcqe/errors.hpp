#pragma once

#include <stdexcept>
#include <string>

namespace pcqe {

// Base class of all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input text does not conform to the grammar.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at offset " + std::to_string(pos) + ")"), pos_(pos) {}

    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// A variable is missing from the surrounding context or assignment.
class ContextError : public Error {
public:
    using Error::Error;
};

// An ordering relation was applied to a term that is not real-valued.
class RealnessError : public Error {
public:
    using Error::Error;
};

// An atom does not have the shape required by an operation.
class ShapeError : public Error {
public:
    using Error::Error;
};

// An auxiliary variable name is already taken by a user variable.
class NameCollisionError : public Error {
public:
    using Error::Error;
};

// A sentence was expected but the formula has free variables.
class FreeVariableError : public Error {
public:
    using Error::Error;
};

// Arithmetic outside the supported domain (division by zero, exponent overflow).
class DomainError : public Error {
public:
    using Error::Error;
};

// The built-in elimination engine met a quantified variable of degree > 2.
class DegreeTooHighError : public Error {
public:
    DegreeTooHighError(std::string var, std::string atom)
        : Error("cannot eliminate '" + var + "': degree too high in atom " + atom),
          var_(std::move(var)),
          atom_(std::move(atom)) {}

    const std::string& variable() const { return var_; }
    const std::string& atom() const { return atom_; }

private:
    std::string var_;
    std::string atom_;
};

// An external elimination process failed or produced unusable output.
class BackendError : public Error {
public:
    using Error::Error;
};

// An external elimination process exceeded its wall-clock budget.
class TimeoutError : public Error {
public:
    using Error::Error;
};

// A sentence did not reduce to a truth constant; indicates an internal defect.
class IncompleteSimplificationError : public Error {
public:
    using Error::Error;
};

} // namespace pcqe
