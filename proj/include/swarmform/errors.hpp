#pragma once

#include <stdexcept>
#include <string>

namespace swarmform {

// Base of all library error conditions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A reference-formation parameter breaks the geometry assumptions
// (angle ordering/range, radius bounds).
struct AssumptionViolation : Error {
  using Error::Error;
};

// A commanded boundary schedule leaves the admissible box; the planner
// rejects instead of clamping so the mission is never silently altered.
struct ConstraintViolation : Error {
  using Error::Error;
};

struct SingularJacobian : Error {
  using Error::Error;
};

// Orientation-reversing deformation: agents would cross.
struct ImproperJacobian : Error {
  using Error::Error;
};

struct DegenerateHull : Error {
  using Error::Error;
};

struct OutOfInterval : Error {
  using Error::Error;
};

struct DiscontinuousMission : Error {
  using Error::Error;
};

struct CorridorUnset : Error {
  using Error::Error;
};

// Scenario file / run configuration problems, located by file:line where known.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace swarmform
