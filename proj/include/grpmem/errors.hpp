#pragma once

#include <stdexcept>
#include <string>

namespace grpmem {

/// Malformed input: bad file syntax, degree mismatch, violated precondition.
class input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A configured resource cap (degree, element count, state count) was hit.
class cap_exceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal invariant failed. Always a bug or a disagreement between
/// two decision routes that must agree.
class invariant_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {

[[noreturn]] inline void fail_input(const std::string& what) { throw input_error(what); }

inline void require(bool cond, const std::string& what)
{
    if (!cond) throw input_error(what);
}

inline void ensure(bool cond, const std::string& what)
{
    if (!cond) throw invariant_error(what);
}

} // namespace detail
} // namespace grpmem
