#pragma once

#include <stdexcept>
#include <string>

namespace spiral {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An operation needing trivial spirality was given a component where w is not trivial.
struct NonTrivialSpirality : Error {
  using Error::Error;
};

struct NoSupercriticalCycle : Error {
  using Error::Error;
};

struct NoGeometricallyInfinitePiece : Error {
  using Error::Error;
};

/// A directed cycle that does not close up or names curves outside the graph.
struct InvalidCycle : Error {
  using Error::Error;
};

struct InconsistentConfig : Error {
  using Error::Error;
};

}  // namespace spiral
