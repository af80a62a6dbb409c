#include "swiptdas/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace swiptdas {

const NumericPolicy& default_policy() {
  static const NumericPolicy pol{};
  return pol;
}

namespace numerics {

bool is_hermitian(const CMat& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.norm());
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

void require_hermitian(const CMat& a, double rel_tol) {
  if (!is_hermitian(a, rel_tol)) {
    throw std::invalid_argument("matrix is not Hermitian within tolerance");
  }
}

EigDecomposition eig_hermitian(const CMat& a) {
  require_hermitian(a, default_policy().symmetry_tol);
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (a + a.adjoint()));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigendecomposition failed");
  }
  return EigDecomposition{es.eigenvalues(), es.eigenvectors()};
}

namespace {

// ||d(nu)||^2 along the regularized stationary path d_i = -beta_i/(lam_i+nu).
double secular_norm2(const RVec& lam, const RVec& beta2, double nu) {
  double acc = 0.0;
  for (int i = 0; i < lam.size(); ++i) {
    const double den = lam(i) + nu;
    if (beta2(i) == 0.0) continue;
    acc += beta2(i) / (den * den);
  }
  return acc;
}

double eval_quadratic(const CVec& h, const CMat& a, const CVec& d) {
  const CVec hd = h + d;
  return std::real(hd.dot(a * hd));  // Eigen dot conjugates the first argument
}

TrsResult trs_minimize(const CVec& h, const CMat& a, double eps) {
  const int n = static_cast<int>(h.size());
  TrsResult out;
  out.delta = CVec::Zero(n);
  if (eps == 0.0) {
    out.value = eval_quadratic(h, a, out.delta);
    return out;
  }

  const EigDecomposition ed = eig_hermitian(a);
  const RVec& lam = ed.values;
  const CVec b = a * h;
  const CVec beta = ed.vectors.adjoint() * b;
  RVec beta2(n);
  for (int i = 0; i < n; ++i) beta2(i) = std::norm(beta(i));

  const double lam_min = lam(0);
  const double nu_lo = std::max(0.0, -lam_min);
  const double eps2 = eps * eps;
  const double scale = std::max({1.0, lam.cwiseAbs().maxCoeff(), b.norm()});

  // Gradient components living in the (numerically) blocked eigenspace,
  // i.e. where lam_i + nu_lo ~ 0, decide between the easy and hard case.
  double blocked = 0.0;
  double phi_lo = 0.0;
  const double zero_tol = 1e-12 * scale;
  for (int i = 0; i < n; ++i) {
    const double den = lam(i) + nu_lo;
    if (den <= zero_tol) {
      blocked += beta2(i);
    } else {
      phi_lo += beta2(i) / (den * den);
    }
  }

  double nu = nu_lo;
  bool hard_case = false;
  if (blocked <= zero_tol * zero_tol && phi_lo <= eps2) {
    // Multiplier stays at its lower bound.  For nu_lo > 0 this is the hard
    // case: pad the solution with a minimal-eigenspace component up to the
    // ball radius.
    hard_case = nu_lo > 0.0;
  } else {
    // phi is strictly decreasing in nu; bracket then bisect.
    double lo = nu_lo;
    double hi = std::max(nu_lo * 2.0, nu_lo + std::max(1.0, b.norm() / eps));
    while (secular_norm2(lam, beta2, hi) > eps2) {
      hi *= 2.0;
      if (!std::isfinite(hi)) throw std::runtime_error("trs: bracket failure");
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (secular_norm2(lam, beta2, mid) > eps2) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
    }
    nu = hi;
  }

  CVec d_eig = CVec::Zero(n);
  for (int i = 0; i < n; ++i) {
    const double den = lam(i) + nu;
    if (den > zero_tol) d_eig(i) = -beta(i) / den;
  }
  if (hard_case) {
    const double norm2 = d_eig.squaredNorm();
    if (norm2 < eps2) {
      // Any unit vector of the minimal eigenspace works; take the first.
      d_eig(0) += std::sqrt(eps2 - norm2);
    }
  }
  CVec d = ed.vectors * d_eig;
  const double dn = d.norm();
  if (dn > eps && dn > 0.0) d *= eps / dn;

  // An interior stationary point can only beat the boundary when A is PSD;
  // both candidates are evaluated through the same quadratic, so just keep d.
  out.delta = d;
  out.value = eval_quadratic(h, a, d);
  return out;
}

}  // namespace

TrsResult trs_extremize(const CVec& h_hat, const CMat& a, double eps,
                        ExtremizeSense sense) {
  if (eps < 0.0) throw std::invalid_argument("trs_extremize: eps must be >= 0");
  if (h_hat.size() != a.rows() || a.rows() != a.cols()) {
    throw std::invalid_argument("trs_extremize: dimension mismatch");
  }
  if (sense == ExtremizeSense::Min) return trs_minimize(h_hat, a, eps);
  TrsResult r = trs_minimize(h_hat, CMat(-a), eps);
  r.value = -r.value;
  return r;
}

RMat real_embedding(const CMat& h) {
  const int n = static_cast<int>(h.rows());
  RMat t(2 * n, 2 * n);
  const RMat x = h.real();
  const RMat y = h.imag();
  t.topLeftCorner(n, n) = x;
  t.bottomRightCorner(n, n) = x;
  t.topRightCorner(n, n) = -y;
  t.bottomLeftCorner(n, n) = y;
  return t;
}

int svec_dim(int n) { return n * (n + 1) / 2; }

int svec_index(int i, int j) { return j * (j + 1) / 2 + i; }

RVec svec(const RMat& s) {
  const int n = static_cast<int>(s.rows());
  static const double rt2 = std::sqrt(2.0);
  RVec v(svec_dim(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      v(svec_index(i, j)) = (i == j) ? s(i, j) : rt2 * s(i, j);
    }
  }
  return v;
}

RMat smat(const RVec& v) {
  const int n = static_cast<int>((std::sqrt(8.0 * v.size() + 1.0) - 1.0) / 2.0 + 0.5);
  static const double inv_rt2 = 1.0 / std::sqrt(2.0);
  RMat s(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      const double val = v(svec_index(i, j));
      if (i == j) {
        s(i, j) = val;
      } else {
        s(i, j) = val * inv_rt2;
        s(j, i) = val * inv_rt2;
      }
    }
  }
  return s;
}

int rank_of(const CMat& v, const NumericPolicy& pol) {
  if (v.rows() == 0) return 0;
  const EigDecomposition ed = eig_hermitian(v);
  const double lam_max = ed.values(ed.values.size() - 1);
  if (lam_max <= 0.0) return 0;
  int r = 0;
  for (int i = 0; i < ed.values.size(); ++i) {
    if (ed.values(i) >= pol.rank_cutoff * lam_max) ++r;
  }
  return r;
}

}  // namespace numerics
}  // namespace swiptdas
