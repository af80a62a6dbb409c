#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "swiptdas/numerics.hpp"

namespace swiptdas::conic {

enum class ConeType { Zero, NonNeg, Soc, Psd, Exp };

/// Affine expression a'x + constant over the program's scalar slots.
struct LinExpr {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;  // (slot, coefficient)

  LinExpr() = default;
  explicit LinExpr(double c) : constant(c) {}
  static LinExpr variable(int slot, double coef = 1.0) {
    LinExpr e;
    e.terms.emplace_back(slot, coef);
    return e;
  }
  LinExpr& add(int slot, double coef) {
    if (coef != 0.0) terms.emplace_back(slot, coef);
    return *this;
  }
  LinExpr& operator+=(const LinExpr& o) {
    constant += o.constant;
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    return *this;
  }
  LinExpr& operator*=(double a) {
    constant *= a;
    for (auto& t : terms) t.second *= a;
    return *this;
  }
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { a += b; return a; }
  friend LinExpr operator-(LinExpr a, LinExpr b) { b *= -1.0; a += b; return a; }
  friend LinExpr operator*(double s, LinExpr a) { a *= s; return a; }
};

/// Handle for a complex Hermitian matrix variable of side `dim`.
/// Slot layout: dim diagonal entries, then for each p < q (column-major)
/// the pair (Re H_pq, Im H_pq).
struct HermVar {
  int dim = 0;
  int base = -1;

  int slots() const { return dim * dim; }
  int diag_slot(int p) const { return base + p; }
  int re_slot(int p, int q) const { return base + dim + 2 * pair_index(p, q); }
  int im_slot(int p, int q) const { return base + dim + 2 * pair_index(p, q) + 1; }
  int pair_index(int p, int q) const { return q * (q - 1) / 2 + p; }  // p < q
};

struct SolveOptions {
  double tol = 1e-8;        // feasibility and relative-gap target
  int max_iters = 100;
  bool verbose = false;
};

struct SolveReport {
  enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };
  Status status = Status::NumericalFailure;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double dual_objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> primal;  // present iff status == Optimal
  double solve_time_s = 0.0;
  int iterations = 0;
  std::string message;

  bool optimal() const { return status == Status::Optimal; }
};

/// Affine complex Hermitian matrix block, constant + sum_slots x_slot * coeff.
/// Entries are specified on the upper triangle (p <= q); the conjugate mirror
/// is implied.  Diagonal contributions must be real.
class HermBlock {
 public:
  explicit HermBlock(int side) : side_(side) {}

  int side() const { return side_; }

  void add_const(int p, int q, cxd value);
  void add_term(int slot, int p, int q, cxd coef);

  /// tr(A V) for Hermitian A over a Hermitian variable: adds the variable's
  /// slots so that the block's (p,q) entries follow A-weighted V entries.
  CMat constant_matrix() const;
  CMat coeff_matrix(int slot) const;  // dense coefficient of one slot (test aid)
  std::vector<int> slots() const;

  struct Entry {
    int slot;  // -1 for the constant part
    int p, q;  // p <= q
    cxd value;
  };
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  int side_;
  std::vector<Entry> entries_;
};

/// Solver-agnostic conic program: named real scalars and Hermitian matrix
/// variables, a linear objective, and constraints mapped into zero /
/// nonnegative / second-order / PSD / exponential cones.  Hermitian PSD
/// blocks are realized through the 2n x 2n real symmetric embedding of
/// numerics::real_embedding.
class ConicProgram {
 public:
  int add_scalar(const std::string& name);
  HermVar add_hermitian(const std::string& name, int dim);
  int num_slots() const { return num_slots_; }

  void minimize(const LinExpr& objective);

  void add_zero(const LinExpr& e);                  // e == 0
  void add_nonneg(const LinExpr& e);                // e >= 0
  void add_soc(const std::vector<LinExpr>& e);      // e[0] >= ||e[1:]||
  void add_exp(const LinExpr& x, const LinExpr& y, const LinExpr& z);  // y e^{x/y} <= z
  void add_psd(const HermBlock& block);             // block(x) >= 0 (Hermitian)

  /// tr(A V): A must be Hermitian of the variable's dimension.
  LinExpr trace_product(const HermVar& v, const CMat& a) const;
  /// w^H V w for a fixed vector w.
  LinExpr quad_form(const HermVar& v, const CVec& w) const;
  /// Frobenius-norm SOC rows for ||V||_F <= bound.
  void add_frobenius_bound(const HermVar& v, const LinExpr& bound);

  /// Extract the Hermitian matrix value of `v` from a primal vector.
  CMat extract_hermitian(const HermVar& v, const std::vector<double>& primal) const;

  SolveReport solve(const SolveOptions& opts = {}) const;

  struct ResidualReport {
    std::vector<double> by_constraint;  // one entry per constraint block
    double max_residual = 0.0;
  };
  /// Cone-distance residual of an assignment, per constraint block:
  /// zero -> |e|_inf, nonneg -> max(0, -min e), soc -> max(0, ||u|| - t),
  /// psd -> max(0, -lambda_min), exp -> max(0, y e^{x/y} - z) (+ closure).
  ResidualReport check_feasibility(const std::vector<double>& assignment) const;

  /// Plain-text interchange dump (variables, objective, cone blocks as
  /// row/col/value triplets of s = b - A x).
  void dump(std::ostream& os) const;

  // --- assembled form (s = b - A x in K), used by the solver and tests ---
  struct Block {
    ConeType type;
    int rows;       // rows in s
    int side;       // matrix side for Psd blocks (real, embedded), else 0
    int offset;     // first row index
  };
  struct AssembledData {
    int n = 0;
    int m = 0;
    std::vector<Eigen::Triplet<double>> a_triplets;
    RVec b;
    RVec c;
    std::vector<Block> blocks;
  };
  const AssembledData& assembled() const;

 private:
  struct RawConstraint {
    ConeType type;
    int side = 0;                       // complex side for Psd
    std::vector<LinExpr> rows;          // for non-Psd cones
    std::vector<HermBlock::Entry> herm; // for Psd cones
  };

  void append_rows(AssembledData& d, const RawConstraint& rc) const;

  int num_slots_ = 0;
  std::vector<std::pair<std::string, int>> scalar_vars_;
  std::vector<std::tuple<std::string, HermVar>> herm_vars_;
  LinExpr objective_;
  std::vector<RawConstraint> constraints_;
  mutable AssembledData cache_;
  mutable bool cache_valid_ = false;
};

}  // namespace swiptdas::conic
