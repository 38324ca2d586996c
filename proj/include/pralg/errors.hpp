#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pralg {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ForeignEvent : public Error {
public:
    explicit ForeignEvent(const std::string& what = "event belongs to a different algebra")
        : Error(what) {}
};

class EmptyTuple : public Error {
public:
    explicit EmptyTuple(const std::string& what = "tuple must contain at least one event")
        : Error(what) {}
};

class NotAPartition : public Error {
public:
    explicit NotAPartition(const std::string& what = "events do not form a partition of 1")
        : Error(what) {}
};

class BadLength : public Error {
public:
    explicit BadLength(const std::string& what = "length is not a power of two")
        : Error(what) {}
};

class ValueOutOfRange : public Error {
public:
    explicit ValueOutOfRange(const std::string& what = "value outside [0,1]") : Error(what) {}
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), pos(position) {}
    std::size_t pos;
};

class UnknownSymbol : public Error {
public:
    explicit UnknownSymbol(const std::string& what) : Error(what) {}
};

class UnboundVariable : public Error {
public:
    explicit UnboundVariable(const std::string& name)
        : Error("unbound variable: " + name), variable(name) {}
    std::string variable;
};

class AtomCapExceeded : public Error {
public:
    explicit AtomCapExceeded(const std::string& what = "enumeration cap exceeded")
        : Error(what) {}
};

class UnsupportedConnective : public Error {
public:
    explicit UnsupportedConnective(const std::string& what = "connective not supported here")
        : Error(what) {}
};

class InvalidDescriptor : public Error {
public:
    explicit InvalidDescriptor(const std::string& what = "invalid type descriptor")
        : Error(what) {}
};

class NotCoarsening : public Error {
public:
    explicit NotCoarsening(const std::string& what = "subalgebra is not a coarsening")
        : Error(what) {}
};

class LengthMismatch : public Error {
public:
    explicit LengthMismatch(const std::string& what = "tuple lengths differ") : Error(what) {}
};

class OddLength : public Error {
public:
    explicit OddLength(const std::string& what = "partition length must be even") : Error(what) {}
};

class InvalidStructure : public Error {
public:
    explicit InvalidStructure(const std::string& what) : Error(what) {}
};

} // namespace pralg
