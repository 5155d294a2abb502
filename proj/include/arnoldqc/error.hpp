#pragma once

#include <stdexcept>
#include <string>

namespace arnoldqc {

/// Raised when a numerical procedure cannot deliver a result: no bracketed
/// root, an iteration budget exhausted, unresolvable labels, and the like.
/// Precondition violations use std::invalid_argument instead.
class numeric_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class convergence_error : public numeric_error
{
public:
    using numeric_error::numeric_error;
};

class no_crossing_error : public numeric_error
{
public:
    using numeric_error::numeric_error;
};

} // namespace arnoldqc
