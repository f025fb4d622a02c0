#pragma once

#include <stdexcept>
#include <string>

namespace shapeopt {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// geometry
struct NonConvexInput : Error { using Error::Error; };
struct DegenerateInput : Error { using Error::Error; };
struct InfeasibleSupport : Error { using Error::Error; };
struct ChartTooLong : Error { using Error::Error; };

// meshing
struct ResolutionTooCoarse : Error { using Error::Error; };

// pde
struct SolverFailure : Error { using Error::Error; };
struct EmptyLevelSet : Error { using Error::Error; };
struct HessianUnreliable : Error { using Error::Error; };

// shape calculus
struct StepTooLarge : Error { using Error::Error; };

// perturbation profiles
struct EmptyMass : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct ChartMismatch : Error { using Error::Error; };

// optimality
struct NoFreeEdges : Error { using Error::Error; };
struct OverlappingSupports : Error { using Error::Error; };
struct PreconditionUnmet : Error { using Error::Error; };

// optimizer
struct InfeasibleInit : Error { using Error::Error; };

}  // namespace shapeopt
