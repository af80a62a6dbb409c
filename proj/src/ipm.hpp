#pragma once

// Homogeneous self-dual interior-point solver for the conic standard form
//   minimize    c'x
//   subject to  s = b - A x,  s in K,
// where K is a product of zero, nonnegative, second-order, PSD (svec'd real
// symmetric) and exponential cones.  Symmetric cones use Nesterov-Todd
// scalings with a Mehrotra predictor-corrector; exponential cones use the
// primal barrier Hessian as the scaling with a centering target in the dual
// space.  Internal to the conic module.

#include <Eigen/Sparse>

#include "swiptdas/conic.hpp"

namespace swiptdas::conic::detail {

struct IpmSettings {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iters = 100;
  bool verbose = false;
  double static_reg = 1e-12;
  int ruiz_iters = 10;
};

struct IpmResult {
  SolveReport::Status status = SolveReport::Status::NumericalFailure;
  RVec x;           // descaled primal (valid when Optimal)
  RVec s;
  RVec z;
  double pobj = 0.0;
  double dobj = 0.0;
  int iterations = 0;
  double pres = 0.0, dres = 0.0, gap = 0.0;
  std::string message;
};

IpmResult solve_ipm(const ConicProgram::AssembledData& data, const IpmSettings& st);

}  // namespace swiptdas::conic::detail
