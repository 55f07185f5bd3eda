#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace poplearn {

using Rational = boost::multiprecision::cpp_rational;

/// Converts exactly (doubles are binary rationals).
Rational to_rational(double x);
std::string rational_str(const Rational& r);
Rational parse_rational(const std::string& s);

enum class ConstraintSense { LessEq, GreaterEq, Equal };

struct LinearConstraint {
  std::vector<Rational> coeffs;
  ConstraintSense sense = ConstraintSense::LessEq;
  Rational rhs = 0;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational objective = 0;
  std::vector<Rational> x;
};

/// Exact two-phase simplex with Bland's rule over arbitrary-precision
/// rationals: maximize c.x subject to the constraints and x >= 0. Built for
/// corpus-sized certificate problems where bit-stable re-verification
/// matters more than speed.
LpResult solve_lp(const std::vector<LinearConstraint>& constraints,
                  const std::vector<Rational>& objective);

/// Feasibility-only variant (zero objective).
bool lp_feasible(const std::vector<LinearConstraint>& constraints, int num_vars,
                 std::vector<Rational>* witness = nullptr);

}  // namespace poplearn
