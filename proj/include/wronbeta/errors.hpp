#pragma once

#include <stdexcept>
#include <string>

namespace wronbeta {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid / quadrature
struct OutOfRange : Error { using Error::Error; };
struct NotOnGrid : Error { using Error::Error; };
struct WindowUnderflow : Error { using Error::Error; };
struct EmptySeries : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

// Prices / returns
struct NonPositivePrice : Error { using Error::Error; };

// Estimation
struct NotIndependent : Error { using Error::Error; };
struct EstimateMismatch : Error { using Error::Error; };
struct ZeroDenominator : Error { using Error::Error; };
struct ZeroBeta : Error { using Error::Error; };
struct AllDegenerate : Error { using Error::Error; };

// Ingest
struct ParseError : Error { using Error::Error; };
struct NonMonotonicDates : Error { using Error::Error; };
struct EmptyIntersection : Error { using Error::Error; };

// CLI
struct UsageError : Error { using Error::Error; };

} // namespace wronbeta
