#pragma once

#include <Eigen/Dense>
#include <complex>

namespace swiptdas {

using cxd  = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Central numeric tolerances. Every module that needs a symmetry check, a
/// PSD slack, or a rank decision reads them from here so that rank audits
/// are consistent across the code base.
struct NumericPolicy {
  double symmetry_tol = 1e-9;  // relative Hermitian-asymmetry tolerance
  double psd_slack    = 1e-8;  // eigenvalue slack when certifying PSD-ness
  double rank_cutoff  = 1e-6;  // eigenvalues < cutoff * lambda_max count as zero
};

const NumericPolicy& default_policy();

namespace numerics {

bool is_hermitian(const CMat& a, double rel_tol);

/// Throws std::invalid_argument if `a` is not Hermitian within `rel_tol`
/// (relative to the Frobenius norm of `a`).
void require_hermitian(const CMat& a, double rel_tol);

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// orthonormal eigenvectors, A = Q diag(values) Q^H.
struct EigDecomposition {
  RVec values;
  CMat vectors;
};

EigDecomposition eig_hermitian(const CMat& a);

enum class ExtremizeSense { Min, Max };

struct TrsResult {
  double value = 0.0;  // extremal quadratic value
  CVec delta;          // attaining perturbation, ||delta|| <= eps
};

/// Exact extremization of (h+d)^H A (h+d) over the ball ||d|| <= eps.
/// Solved by eigendecomposition of A plus a bisection on the Lagrange
/// multiplier of the ball constraint (relative tolerance 1e-12), with
/// explicit hard-case handling when the gradient has no component in the
/// minimal eigenspace.
TrsResult trs_extremize(const CVec& h_hat, const CMat& a, double eps,
                        ExtremizeSense sense);

/// Real symmetric embedding of a complex Hermitian matrix,
/// T(H) = [[Re H, -Im H], [Im H, Re H]].  T(H) is PSD iff H is, each
/// eigenvalue of H appears twice, and tr(T(A) T(B)) = 2 tr(A B).
RMat real_embedding(const CMat& h);

/// svec coordinates for real symmetric matrices with the sqrt(2) off-diagonal
/// scaling, so that <svec(A), svec(B)> = tr(A B).  Order: columns j = 0..n-1,
/// rows i = 0..j.
int  svec_dim(int n);
int  svec_index(int i, int j);  // requires i <= j
RVec svec(const RMat& s);
RMat smat(const RVec& v);

/// Numerical rank under the shared cutoff: number of eigenvalues
/// >= rank_cutoff * lambda_max (0 if lambda_max <= 0).
int rank_of(const CMat& v, const NumericPolicy& pol = default_policy());

}  // namespace numerics
}  // namespace swiptdas
