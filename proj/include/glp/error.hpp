#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define GLP_ERROR(Name)                      \
    class Name : public Error {              \
    public:                                  \
        using Error::Error;                  \
    }

GLP_ERROR(Underflow);
GLP_ERROR(DepthExceeded);
GLP_ERROR(ZeroArgument);
GLP_ERROR(NotationSupport);
GLP_ERROR(OutOfRange);
GLP_ERROR(UnsupportedLevel);
GLP_ERROR(NonStabilizing);
GLP_ERROR(UnboundVariable);
GLP_ERROR(IndexOutOfRange);
GLP_ERROR(InvalidFrame);
GLP_ERROR(NotAJTree);
GLP_ERROR(EmptyTree);
GLP_ERROR(NotRepresentable);
GLP_ERROR(BudgetExceeded);
GLP_ERROR(UnsupportedSigma);

#undef GLP_ERROR

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t pos)
        : Error(what + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

}  // namespace glp
