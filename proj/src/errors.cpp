#include "egap/errors.hpp"

#include <sstream>

namespace egap {

namespace {

std::string with_component(std::optional<std::size_t> component, const std::string& what) {
  if (!component) return what;
  return "component " + std::to_string(*component) + ": " + what;
}

}  // namespace

ValidationError::ValidationError(Kind kind, std::optional<std::size_t> component, const std::string& what)
    : Error(with_component(component, what)), kind_(kind), component_(component) {}

InnerSolveError::InnerSolveError(std::size_t component, const std::string& what)
    : Error(with_component(component, what)), component_(component) {}

ScheduleError::ScheduleError(int iteration, double lhs, double rhs, const std::string& what)
    : Error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "iteration " << iteration << ": " << what << " (lhs " << lhs << " < rhs " << rhs << ")";
        return os.str();
      }()),
      iteration_(iteration),
      lhs_(lhs),
      rhs_(rhs) {}

InvariantError::InvariantError(int iteration, double primal_side, double dual_side)
    : Error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "iteration " << iteration << ": excessive gap violated, f(x;beta2) = " << primal_side
           << " > d(y) = " << dual_side;
        return os.str();
      }()),
      iteration_(iteration),
      primal_side_(primal_side),
      dual_side_(dual_side) {}

}  // namespace egap
