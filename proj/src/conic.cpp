#include "swiptdas/conic.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ipm.hpp"

namespace swiptdas::conic {

namespace {
constexpr double kRt2 = 1.4142135623730951;
}

void HermBlock::add_const(int p, int q, cxd value) {
  if (p > q) { std::swap(p, q); value = std::conj(value); }
  if (p == q && std::abs(value.imag()) > 0.0) {
    throw std::invalid_argument("HermBlock: diagonal entries must be real");
  }
  entries_.push_back({-1, p, q, value});
}

void HermBlock::add_term(int slot, int p, int q, cxd coef) {
  if (slot < 0) throw std::invalid_argument("HermBlock: invalid slot");
  if (p > q) { std::swap(p, q); coef = std::conj(coef); }
  if (p == q && std::abs(coef.imag()) > 0.0) {
    throw std::invalid_argument("HermBlock: diagonal coefficients must be real");
  }
  entries_.push_back({slot, p, q, coef});
}

CMat HermBlock::constant_matrix() const {
  CMat m = CMat::Zero(side_, side_);
  for (const auto& e : entries_) {
    if (e.slot != -1) continue;
    m(e.p, e.q) += e.value;
    if (e.p != e.q) m(e.q, e.p) += std::conj(e.value);
  }
  return m;
}

CMat HermBlock::coeff_matrix(int slot) const {
  CMat m = CMat::Zero(side_, side_);
  for (const auto& e : entries_) {
    if (e.slot != slot) continue;
    m(e.p, e.q) += e.value;
    if (e.p != e.q) m(e.q, e.p) += std::conj(e.value);
  }
  return m;
}

std::vector<int> HermBlock::slots() const {
  std::vector<int> out;
  for (const auto& e : entries_) {
    if (e.slot >= 0) out.push_back(e.slot);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int ConicProgram::add_scalar(const std::string& name) {
  cache_valid_ = false;
  scalar_vars_.emplace_back(name, num_slots_);
  return num_slots_++;
}

HermVar ConicProgram::add_hermitian(const std::string& name, int dim) {
  if (dim <= 0) throw std::invalid_argument("add_hermitian: dim must be positive");
  cache_valid_ = false;
  HermVar v{dim, num_slots_};
  herm_vars_.emplace_back(name, v);
  num_slots_ += v.slots();
  return v;
}

void ConicProgram::minimize(const LinExpr& objective) {
  cache_valid_ = false;
  objective_ = objective;
}

void ConicProgram::add_zero(const LinExpr& e) {
  cache_valid_ = false;
  constraints_.push_back({ConeType::Zero, 0, {e}, {}});
}

void ConicProgram::add_nonneg(const LinExpr& e) {
  cache_valid_ = false;
  constraints_.push_back({ConeType::NonNeg, 0, {e}, {}});
}

void ConicProgram::add_soc(const std::vector<LinExpr>& e) {
  if (e.empty()) throw std::invalid_argument("add_soc: empty cone");
  cache_valid_ = false;
  constraints_.push_back({ConeType::Soc, 0, e, {}});
}

void ConicProgram::add_exp(const LinExpr& x, const LinExpr& y, const LinExpr& z) {
  cache_valid_ = false;
  constraints_.push_back({ConeType::Exp, 0, {x, y, z}, {}});
}

void ConicProgram::add_psd(const HermBlock& block) {
  cache_valid_ = false;
  RawConstraint rc;
  rc.type = ConeType::Psd;
  rc.side = block.side();
  rc.herm = block.entries();
  constraints_.push_back(std::move(rc));
}

LinExpr ConicProgram::trace_product(const HermVar& v, const CMat& a) const {
  if (a.rows() != v.dim || a.cols() != v.dim) {
    throw std::invalid_argument("trace_product: dimension mismatch");
  }
  LinExpr e;
  for (int p = 0; p < v.dim; ++p) e.add(v.diag_slot(p), a(p, p).real());
  for (int q = 1; q < v.dim; ++q) {
    for (int p = 0; p < q; ++p) {
      e.add(v.re_slot(p, q), 2.0 * a(p, q).real());
      e.add(v.im_slot(p, q), 2.0 * a(p, q).imag());
    }
  }
  return e;
}

LinExpr ConicProgram::quad_form(const HermVar& v, const CVec& w) const {
  if (w.size() != v.dim) throw std::invalid_argument("quad_form: dimension mismatch");
  LinExpr e;
  for (int p = 0; p < v.dim; ++p) e.add(v.diag_slot(p), std::norm(w(p)));
  for (int q = 1; q < v.dim; ++q) {
    for (int p = 0; p < q; ++p) {
      const cxd t = std::conj(w(p)) * w(q);
      e.add(v.re_slot(p, q), 2.0 * t.real());
      e.add(v.im_slot(p, q), -2.0 * t.imag());
    }
  }
  return e;
}

void ConicProgram::add_frobenius_bound(const HermVar& v, const LinExpr& bound) {
  std::vector<LinExpr> rows;
  rows.push_back(bound);
  for (int p = 0; p < v.dim; ++p) rows.push_back(LinExpr::variable(v.diag_slot(p)));
  for (int q = 1; q < v.dim; ++q) {
    for (int p = 0; p < q; ++p) {
      rows.push_back(LinExpr::variable(v.re_slot(p, q), kRt2));
      rows.push_back(LinExpr::variable(v.im_slot(p, q), kRt2));
    }
  }
  add_soc(rows);
}

CMat ConicProgram::extract_hermitian(const HermVar& v,
                                     const std::vector<double>& primal) const {
  CMat m(v.dim, v.dim);
  for (int p = 0; p < v.dim; ++p) m(p, p) = primal[v.diag_slot(p)];
  for (int q = 1; q < v.dim; ++q) {
    for (int p = 0; p < q; ++p) {
      const cxd val(primal[v.re_slot(p, q)], primal[v.im_slot(p, q)]);
      m(p, q) = val;
      m(q, p) = std::conj(val);
    }
  }
  return m;
}

// One Hermitian entry (p <= q, value c) of a side-n block, mapped to svec
// coordinates of the 2n x 2n real embedding [[X, -Y], [Y, X]].
static void embed_entry(int n, int p, int q, cxd c,
                        std::vector<std::pair<int, double>>& out) {
  using numerics::svec_index;
  const double a = c.real();
  const double b = c.imag();
  if (p == q) {
    out.emplace_back(svec_index(p, p), a);
    out.emplace_back(svec_index(n + p, n + p), a);
    return;
  }
  if (a != 0.0) {
    out.emplace_back(svec_index(p, q), kRt2 * a);
    out.emplace_back(svec_index(n + p, n + q), kRt2 * a);
  }
  if (b != 0.0) {
    out.emplace_back(svec_index(p, n + q), -kRt2 * b);
    out.emplace_back(svec_index(q, n + p), kRt2 * b);
  }
}

void ConicProgram::append_rows(AssembledData& d, const RawConstraint& rc) const {
  const int offset = d.m;
  if (rc.type == ConeType::Psd) {
    const int real_side = 2 * rc.side;
    const int rows = numerics::svec_dim(real_side);
    std::vector<std::pair<int, double>> coords;
    for (const auto& e : rc.herm) {
      coords.clear();
      embed_entry(rc.side, e.p, e.q, e.value, coords);
      for (const auto& [idx, val] : coords) {
        if (e.slot < 0) {
          d.b(offset + idx) += val;
        } else {
          d.a_triplets.emplace_back(offset + idx, e.slot, -val);
        }
      }
    }
    d.blocks.push_back({ConeType::Psd, rows, real_side, offset});
    d.m += rows;
    return;
  }
  const int rows = static_cast<int>(rc.rows.size());
  for (int i = 0; i < rows; ++i) {
    const LinExpr& e = rc.rows[i];
    d.b(offset + i) += e.constant;
    for (const auto& [slot, coef] : e.terms) {
      // s = b - A x and s_i = e_i(x): row of A is -coefficients.
      d.a_triplets.emplace_back(offset + i, slot, -coef);
    }
  }
  d.blocks.push_back({rc.type, rows, 0, offset});
  d.m += rows;
}

const ConicProgram::AssembledData& ConicProgram::assembled() const {
  if (cache_valid_) return cache_;
  cache_ = AssembledData{};
  cache_.n = num_slots_;
  int m = 0;
  for (const auto& rc : constraints_) {
    m += rc.type == ConeType::Psd ? numerics::svec_dim(2 * rc.side)
                                  : static_cast<int>(rc.rows.size());
  }
  cache_.b = RVec::Zero(m);
  cache_.c = RVec::Zero(num_slots_);
  for (const auto& [slot, coef] : objective_.terms) cache_.c(slot) += coef;
  for (const auto& rc : constraints_) append_rows(cache_, rc);
  cache_valid_ = true;
  return cache_;
}

SolveReport ConicProgram::solve(const SolveOptions& opts) const {
  const auto& data = assembled();
  detail::IpmSettings st;
  st.feas_tol = opts.tol;
  st.gap_tol = opts.tol;
  st.max_iters = opts.max_iters;
  st.verbose = opts.verbose;

  const auto t0 = std::chrono::steady_clock::now();
  detail::IpmResult res = detail::solve_ipm(data, st);
  const auto t1 = std::chrono::steady_clock::now();

  SolveReport rep;
  rep.status = res.status;
  rep.iterations = res.iterations;
  rep.message = res.message;
  rep.solve_time_s = std::chrono::duration<double>(t1 - t0).count();
  if (res.status == SolveReport::Status::Optimal) {
    rep.objective = res.pobj + objective_.constant;
    rep.dual_objective = res.dobj + objective_.constant;
    rep.primal.assign(res.x.data(), res.x.data() + res.x.size());
  }
  return rep;
}

ConicProgram::ResidualReport ConicProgram::check_feasibility(
    const std::vector<double>& assignment) const {
  if (static_cast<int>(assignment.size()) != num_slots_) {
    throw std::invalid_argument("check_feasibility: assignment size mismatch");
  }
  const auto& d = assembled();
  Eigen::SparseMatrix<double> a(d.m, d.n);
  a.setFromTriplets(d.a_triplets.begin(), d.a_triplets.end());
  const Eigen::Map<const RVec> x(assignment.data(), d.n);
  const RVec s = d.b - a * x;

  ResidualReport out;
  for (const auto& blk : d.blocks) {
    const auto seg = s.segment(blk.offset, blk.rows);
    double r = 0.0;
    switch (blk.type) {
      case ConeType::Zero:
        r = seg.cwiseAbs().maxCoeff();
        break;
      case ConeType::NonNeg:
        r = std::max(0.0, -seg.minCoeff());
        break;
      case ConeType::Soc:
        r = std::max(0.0, seg.tail(blk.rows - 1).norm() - seg(0));
        break;
      case ConeType::Psd: {
        const RMat mval = numerics::smat(seg);
        Eigen::SelfAdjointEigenSolver<RMat> es(mval);
        r = std::max(0.0, -es.eigenvalues().minCoeff());
        break;
      }
      case ConeType::Exp: {
        const double ex = seg(0), ey = seg(1), ez = seg(2);
        if (ey > 0.0) {
          const double lhs_log = std::log(ey) + ex / ey;
          const double lhs = lhs_log > 700.0 ? std::numeric_limits<double>::infinity()
                                             : std::exp(lhs_log);
          r = std::max(0.0, lhs - ez);
          r = std::max(r, -ez);
        } else {
          r = std::max({0.0, -ey, ex, -ez});
        }
        break;
      }
    }
    out.by_constraint.push_back(r);
    out.max_residual = std::max(out.max_residual, r);
  }
  return out;
}

void ConicProgram::dump(std::ostream& os) const {
  const auto& d = assembled();
  os << "conic-program v1\n";
  os << "vars " << d.n << "\n";
  for (const auto& [name, slot] : scalar_vars_) {
    os << "scalar " << name << " slot " << slot << "\n";
  }
  for (const auto& [name, hv] : herm_vars_) {
    os << "hermitian " << name << " dim " << hv.dim << " base " << hv.base << "\n";
  }
  os << "minimize";
  for (int i = 0; i < d.c.size(); ++i) {
    if (d.c(i) != 0.0) os << " " << i << ":" << d.c(i);
  }
  os << "\n";
  os << "blocks " << d.blocks.size() << "\n";
  for (const auto& blk : d.blocks) {
    const char* names[] = {"zero", "nonneg", "soc", "psd", "exp"};
    os << "block " << names[static_cast<int>(blk.type)] << " rows " << blk.rows
       << " side " << blk.side << " offset " << blk.offset << "\n";
  }
  os << "b";
  for (int i = 0; i < d.b.size(); ++i) {
    if (d.b(i) != 0.0) os << " " << i << ":" << d.b(i);
  }
  os << "\nA\n";
  for (const auto& t : d.a_triplets) {
    os << t.row() << " " << t.col() << " " << t.value() << "\n";
  }
  os << "end\n";
}

}  // namespace swiptdas::conic
