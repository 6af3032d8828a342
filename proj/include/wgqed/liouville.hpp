#ifndef WGQED_LIOUVILLE_HPP
#define WGQED_LIOUVILLE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "core.hpp"
#include "fock.hpp"
#include "spectra.hpp"

namespace wgqed {

// column stacking
inline Vector vectorize(const Matrix& rho) {
  if (rho.rows() != rho.cols()) throw ConfigError("vectorize: operator must be square");
  return Eigen::Map<const Vector>(rho.data(), rho.size());
}

inline std::size_t hilbert_dimension_of(std::size_t n) {
  auto d = static_cast<std::size_t>(std::llround(std::sqrt(double(n))));
  if (d * d != n) throw ConfigError("devectorize: length is not a perfect square");
  return d;
}

inline Matrix devectorize(const Vector& r) {
  auto d = static_cast<Eigen::Index>(hilbert_dimension_of(r.size()));
  return Eigen::Map<const Matrix>(r.data(), d, d);
}

inline Complex vector_trace(const Vector& r) {
  auto d = hilbert_dimension_of(r.size());
  Complex t = 0.0;
  for (std::size_t i = 0; i < d; ++i) t += r(i * d + i);
  return t;
}

namespace super {

inline SparseMatrix eye(Eigen::Index n) {
  SparseMatrix m(n, n);
  m.setIdentity();
  return m;
}

// A rho B^dag  ->  (conj(B) (x) A) r
inline SparseMatrix sandwich(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix cb = b.conjugate();
  return Eigen::kroneckerProduct(cb, a).eval();
}

inline SparseMatrix left(const SparseMatrix& a) { return Eigen::kroneckerProduct(eye(a.rows()), a).eval(); }

inline SparseMatrix right(const SparseMatrix& a) {
  SparseMatrix at = a.transpose();
  return Eigen::kroneckerProduct(at, eye(a.rows())).eval();
}

// -i [H, .]
inline SparseMatrix commutator(const SparseMatrix& h) {
  return SparseMatrix(Complex(0.0, -1.0) * (left(h) - right(h)));
}

// rate (A rho B^dag - 1/2 {B^dag A, rho})
inline SparseMatrix dissipator(const SparseMatrix& a, const SparseMatrix& b, double rate) {
  SparseMatrix ba = b.adjoint() * a;
  return SparseMatrix(rate * (sandwich(a, b) - 0.5 * left(ba) - 0.5 * right(ba)));
}

inline SparseMatrix dissipator(const SparseMatrix& a, double rate) { return dissipator(a, a, rate); }

}  // namespace super

struct DriveTerm {
  std::string name;
  std::function<double(double)> envelope;  // real coefficient f(t)
  SparseMatrix generator;                  // superoperator multiplied by f(t)
};

// L(t) = L0 + sum_i f_i(t) G_i
class Liouvillian {
 public:
  Liouvillian() = default;
  Liouvillian(SparseMatrix constant, std::size_t hilbert) : constant_(std::move(constant)), hilbert_(hilbert) {
    if (constant_.rows() != Eigen::Index(hilbert * hilbert) || constant_.cols() != constant_.rows())
      throw ConfigError("liouvillian: superoperator dimension must be (dim^2 x dim^2)");
  }

  const SparseMatrix& constant() const { return constant_; }
  const std::vector<DriveTerm>& drives() const { return drives_; }
  std::size_t hilbert_dimension() const { return hilbert_; }
  Eigen::Index dimension() const { return constant_.rows(); }
  bool time_dependent() const { return !drives_.empty(); }

  // Hermitian drive operator entering as f(t) H_d
  void add_hamiltonian_drive(std::string name, std::function<double(double)> f, const SparseMatrix& hd) {
    if (hd.rows() != Eigen::Index(hilbert_)) throw ConfigError("liouvillian: drive operator dimension mismatch");
    drives_.push_back({std::move(name), std::move(f), super::commutator(hd)});
  }

  void add_generator(std::string name, std::function<double(double)> f, SparseMatrix g) {
    if (g.rows() != dimension()) throw ConfigError("liouvillian: generator dimension mismatch");
    drives_.push_back({std::move(name), std::move(f), std::move(g)});
  }

  std::vector<double> coefficients(double t) const {
    std::vector<double> c(drives_.size());
    for (std::size_t i = 0; i < drives_.size(); ++i) c[i] = drives_[i].envelope(t);
    return c;
  }

  Vector apply(const std::vector<double>& coef, const Vector& v) const {
    Vector out = constant_ * v;
    for (std::size_t i = 0; i < drives_.size(); ++i)
      if (coef[i] != 0.0) out.noalias() += coef[i] * (drives_[i].generator * v);
    return out;
  }

  Vector apply(double t, const Vector& v) const { return apply(coefficients(t), v); }

  SparseMatrix assemble(const std::vector<double>& c) const {
    SparseMatrix m = constant_;
    for (std::size_t i = 0; i < drives_.size(); ++i)
      if (c[i] != 0.0) m += c[i] * drives_[i].generator;
    return m;
  }

  SparseMatrix at(double t) const { return assemble(coefficients(t)); }

  // max over columns of |vec(I)^T L|, should vanish
  double trace_defect() const {
    const auto d = hilbert_;
    Vector id = Vector::Zero(dimension());
    for (std::size_t i = 0; i < d; ++i) id(i * d + i) = 1.0;
    double worst = (constant_.transpose() * id).cwiseAbs().maxCoeff();
    for (const auto& g : drives_) worst = std::max(worst, (g.generator.transpose() * id).cwiseAbs().maxCoeff());
    return worst;
  }

 private:
  SparseMatrix constant_;
  std::size_t hilbert_ = 0;
  std::vector<DriveTerm> drives_;
};

// H hermitian (rad/s); collective jumps sum_k g_k D[b_k]; bulk kappa D[a_j]
inline Liouvillian build_liouvillian(const SparseMatrix& h, const std::vector<JumpOperator>& jumps, double kappa = 0.0,
                                     const std::vector<SparseMatrix>& bulk = {}) {
  if (h.rows() != h.cols()) throw ConfigError("liouvillian: Hamiltonian must be square");
  SparseMatrix hd = h.adjoint();
  if ((h - hd).norm() > 1e-10 * (1.0 + h.norm())) throw ConfigError("liouvillian: Hamiltonian part must be Hermitian");
  if (kappa < 0.0) throw ConfigError("liouvillian: bulk rate must be >= 0");
  SparseMatrix l = super::commutator(h);
  for (const auto& j : jumps) {
    if (j.rate < 0.0) throw SolverError("liouvillian: negative jump rate (decay matrix not positive semidefinite)");
    l += super::dissipator(j.op, j.rate);
  }
  if (kappa > 0.0)
    for (const auto& a : bulk) l += super::dissipator(a, kappa);
  l.prune(Complex(0.0));
  return Liouvillian(std::move(l), static_cast<std::size_t>(h.rows()));
}

inline Liouvillian build_liouvillian(const FockBasis& b, const SparseMatrix& h, const CouplingTables& tab,
                                     double kappa = 0.0) {
  auto jumps = collective_jumps(b, tab);
  std::vector<SparseMatrix> bulk;
  if (kappa > 0.0)
    for (int j = 0; j < b.sites(); ++j) bulk.push_back(annihilation(b, j));
  return build_liouvillian(h, jumps, kappa, bulk);
}

// ---- steady state

struct SteadyState {
  Vector r;
  double residual = 0.0;                 // |L r| / |L|_F
  double hermiticity_correction = 0.0;   // |rho - rho^dag| / 2 before symmetrisation
};

class SteadyStateSolver {
 public:
  // Row 0 (a diagonal entry, redundant by trace preservation) is replaced by
  // the trace functional. The pattern is analysed once and reused.
  SteadyState solve(const Liouvillian& lv) {
    if (lv.time_dependent()) throw ConfigError("steady state: Liouvillian must be time independent");
    const auto& l = lv.constant();
    const auto d = lv.hilbert_dimension();
    double norm = l.norm();
    if (norm == 0.0) throw SolverError("steady state: zero Liouvillian has no unique steady state");
    double s = norm / std::sqrt(double(l.rows()));

    std::vector<Triplet> t;
    t.reserve(l.nonZeros() + d);
    for (int k = 0; k < l.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(l, k); it; ++it)
        if (it.row() != 0) t.emplace_back(int(it.row()), int(it.col()), it.value());
    for (std::size_t i = 0; i < d; ++i) t.emplace_back(0, int(i * d + i), s);
    SparseMatrix a(l.rows(), l.cols());
    a.setFromTriplets(t.begin(), t.end());
    a.makeCompressed();

    bool same = analysed_ && pattern_rows_ == a.rows() && pattern_nnz_ == a.nonZeros() &&
                std::equal(a.outerIndexPtr(), a.outerIndexPtr() + a.outerSize() + 1, outer_.begin()) &&
                std::equal(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros(), inner_.begin());
    if (!same) {
      lu_.analyzePattern(a);
      analysed_ = true;
      pattern_rows_ = a.rows();
      pattern_nnz_ = a.nonZeros();
      outer_.assign(a.outerIndexPtr(), a.outerIndexPtr() + a.outerSize() + 1);
      inner_.assign(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());
    }
    lu_.factorize(a);
    if (lu_.info() != Eigen::Success) report_singular(lv);

    Vector rhs = Vector::Zero(l.rows());
    rhs(0) = s;
    Vector r = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success || !r.allFinite()) report_singular(lv);

    Matrix rho = devectorize(r);
    Complex tr = rho.trace();
    if (std::abs(tr) == 0.0) throw SolverError("steady state: solution has zero trace");
    rho /= tr;
    SteadyState out;
    out.hermiticity_correction = 0.5 * (rho - rho.adjoint()).norm();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    out.r = vectorize(rho);
    out.residual = (l * out.r).norm() / norm;
    return out;
  }

 private:
  [[noreturn]] static void report_singular(const Liouvillian& lv) {
    const auto& l = lv.constant();
    if (l.rows() <= 4096) {
      Eigen::ColPivHouseholderQR<Matrix> qr{Matrix(l)};
      qr.setThreshold(1e-10);
      auto nullity = l.cols() - qr.rank();
      throw SolverError("steady state: null space dimension " + std::to_string(nullity) + " (not unique)");
    }
    throw SolverError("steady state: trace-augmented system is singular (null space dimension > 1)");
  }

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  bool analysed_ = false;
  Eigen::Index pattern_rows_ = 0, pattern_nnz_ = 0;
  std::vector<int> outer_, inner_;
};

inline SteadyState steady_state(const Liouvillian& lv) {
  SteadyStateSolver s;
  return s.solve(lv);
}

// Inverse of rho -> -i(H rho - rho H^dag) for a non-Hermitian H through its
// Schur form (Bartels-Stewart). Used to precondition the steady-state solve:
// the Liouvillian is this map plus the jump (recycling) terms.
class SylvesterPreconditioner {
 public:
  SylvesterPreconditioner() = default;
  explicit SylvesterPreconditioner(const Matrix& heff) { set_hamiltonian(heff); }

  void set_hamiltonian(const Matrix& heff) {
    Eigen::ComplexSchur<Matrix> cs(heff);
    if (cs.info() != Eigen::Success) throw SolverError("preconditioner: Schur decomposition failed");
    q_ = cs.matrixU();
    t_ = cs.matrixT();
    n_ = heff.rows();
  }

  Vector inverse(const Vector& y) const {
    Matrix c = Complex(0.0, 1.0) * (q_.adjoint() * Eigen::Map<const Matrix>(y.data(), n_, n_) * q_);
    Matrix x(n_, n_);
    // T x_j - sum_{k>=j} conj(T_jk) x_k = c_j, last column first
    for (Eigen::Index j = n_ - 1; j >= 0; --j) {
      Vector rhs = c.col(j);
      for (Eigen::Index k = j + 1; k < n_; ++k) rhs += std::conj(t_(j, k)) * x.col(k);
      Matrix a = t_;
      a.diagonal().array() -= std::conj(t_(j, j));
      x.col(j) = a.triangularView<Eigen::Upper>().solve(rhs);
    }
    Matrix rho = q_ * x * q_.adjoint();
    return Eigen::Map<const Vector>(rho.data(), rho.size());
  }

  // Eigen preconditioner interface on the bordered system [[L, u], [w^T, 0]]
  template <class M>
  SylvesterPreconditioner& analyzePattern(const M&) { return *this; }
  template <class M>
  SylvesterPreconditioner& factorize(const M&) { return *this; }
  template <class M>
  SylvesterPreconditioner& compute(const M&) { return *this; }
  Eigen::ComputationInfo info() const { return Eigen::Success; }

  template <class Rhs>
  Vector solve(const Rhs& b) const {
    Vector out(b.size());
    const Eigen::Index m = n_ * n_;
    out.head(m) = inverse(b.head(m));
    out.tail(b.size() - m) = b.tail(b.size() - m);
    return out;
  }

 private:
  Matrix q_, t_;
  Eigen::Index n_ = 0;
};

struct IterativeSteadyConfig {
  double tolerance = 1e-13;
  int max_iterations = 400;
  int restart = 60;
};

// Bordered system [[L, u], [s vec(I)^T, 0]] [r; mu] = [0; s] has r = steady
// state and mu = 0 when the null space is one-dimensional. `heff` is the
// non-Hermitian effective Hamiltonian behind the Liouvillian.
inline SteadyState steady_state_iterative(const Liouvillian& lv, const Matrix& heff,
                                          const IterativeSteadyConfig& cfg = {}) {
  if (lv.time_dependent()) throw ConfigError("steady state: Liouvillian must be time independent");
  const auto& l = lv.constant();
  const auto d = lv.hilbert_dimension();
  if (heff.rows() != Eigen::Index(d)) throw ConfigError("steady state: effective Hamiltonian dimension mismatch");
  const Eigen::Index m = l.rows();
  double norm = l.norm();
  if (norm == 0.0) throw SolverError("steady state: zero Liouvillian has no unique steady state");
  double s = norm / std::sqrt(double(m));

  std::vector<Triplet> t;
  t.reserve(l.nonZeros() + 2 * d);
  for (int k = 0; k < l.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(l, k); it; ++it) t.emplace_back(int(it.row()), int(it.col()), it.value());
  for (std::size_t i = 0; i < d; ++i) {
    t.emplace_back(int(i * d + i), int(m), s / double(d));
    t.emplace_back(int(m), int(i * d + i), s);
  }
  SparseMatrix a(m + 1, m + 1);
  a.setFromTriplets(t.begin(), t.end());

  Eigen::GMRES<SparseMatrix, SylvesterPreconditioner> gm;
  gm.preconditioner().set_hamiltonian(heff);
  gm.setTolerance(cfg.tolerance);
  gm.setMaxIterations(cfg.max_iterations);
  gm.set_restart(cfg.restart);
  gm.compute(a);
  Vector rhs = Vector::Zero(m + 1);
  rhs(m) = s;
  Vector guess = Vector::Zero(m + 1);
  guess(0) = 1.0;
  Vector x = gm.solveWithGuess(rhs, guess);
  if (!x.allFinite()) throw SolverError("steady state: iterative solve produced non-finite values");

  Matrix rho = devectorize(x.head(m));
  Complex tr = rho.trace();
  if (std::abs(tr) == 0.0) throw SolverError("steady state: solution has zero trace");
  rho /= tr;
  SteadyState out;
  out.hermiticity_correction = 0.5 * (rho - rho.adjoint()).norm();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  out.r = vectorize(rho);
  out.residual = (l * out.r).norm() / norm;
  if (gm.info() != Eigen::Success && out.residual > 1e-10)
    throw SolverError("steady state: GMRES did not converge (residual " + std::to_string(out.residual) + ")");
  return out;
}

// ---- Krylov propagation

struct KrylovConfig {
  int dimension = 30;
  double tolerance = 1e-12;  // per-step error relative to |v|
  int max_substeps = 100000;
};

struct KrylovStats {
  int substeps = 0;
  int rejected = 0;
  int breakdowns = 0;
  int reorthogonalizations = 0;
  double error_estimate = 0.0;
};

// exp(t A) v with an Arnoldi basis, adaptive substeps and a Hessenberg
// residual error estimate. `op(x)` returns A x.
template <class Op>
Vector krylov_expmv(const Op& op, const Vector& v, double t, const KrylovConfig& cfg = {},
                    KrylovStats* stats = nullptr) {
  if (cfg.dimension < 2) throw ConfigError("krylov: dimension must be >= 2");
  const Eigen::Index n = v.size();
  const int mmax = static_cast<int>(std::min<Eigen::Index>(cfg.dimension, n));
  Vector w = v;
  double done = 0.0;
  double h = t;
  int steps = 0;
  KrylovStats local;
  if (t == 0.0 || v.norm() == 0.0) return w;

  Matrix V(n, mmax + 1);
  Matrix H = Matrix::Zero(mmax + 1, mmax);
  while (done < t) {
    if (++steps > cfg.max_substeps) throw SolverError("krylov: substep limit exceeded");
    double beta = w.norm();
    if (beta == 0.0) break;
    V.col(0) = w / beta;
    H.setZero();
    int m = mmax;
    bool happy = false;
    double hnorm = 0.0;
    for (int j = 0; j < mmax; ++j) {
      Vector u = op(V.col(j));
      double before = u.norm();
      auto basis = V.leftCols(j + 1);
      Vector c = basis.adjoint() * u;
      u.noalias() -= basis * c;
      H.col(j).head(j + 1) = c;
      double after = u.norm();
      if (after < 0.7 * before) {  // second pass
        ++local.reorthogonalizations;
        c.noalias() = basis.adjoint() * u;
        u.noalias() -= basis * c;
        H.col(j).head(j + 1) += c;
        after = u.norm();
      }
      hnorm = std::max(hnorm, H.col(j).head(j + 1).norm());
      if (after <= 1e-13 * std::max(hnorm, 1e-300) || after == 0.0) {
        m = j + 1;
        happy = true;
        ++local.breakdowns;
        break;
      }
      H(j + 1, j) = after;
      V.col(j + 1) = u / after;
    }

    double remaining = t - done;
    if (happy) {
      Matrix e = (remaining * H.topLeftCorner(m, m)).exp();
      w = beta * (V.leftCols(m) * e.col(0));
      done = t;
      break;
    }

    h = std::min(h, remaining);
    const double hsub = std::abs(H(m, m - 1));
    for (;;) {
      // augmented exponential gives exp(hH) e1 and phi1(hH) e1 together
      Matrix aug = Matrix::Zero(m + 1, m + 1);
      aug.topLeftCorner(m, m) = h * H.topLeftCorner(m, m);
      aug(0, m) = 1.0;
      Matrix e = aug.exp();
      double err = beta * hsub * h * std::abs(e(m - 1, m));
      double tol = cfg.tolerance * beta;
      if (err <= tol || h <= 1e-14 * t) {
        w = beta * (V.leftCols(m) * e.col(0).head(m));
        done += h;
        local.error_estimate += err;
        double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 1.0 / (m + 1)) : 2.0;
        h = std::min(2.0 * h, h * std::max(grow, 0.2));
        break;
      }
      ++local.rejected;
      h *= std::max(0.2, 0.9 * std::pow(tol / err, 1.0 / (m + 1)));
    }
    if (!w.allFinite()) throw SolverError("krylov: non-finite propagated state");
  }
  local.substeps = steps;
  if (stats) *stats = local;
  return w;
}

inline Vector krylov_step(const SparseMatrix& l, const Vector& r, double dt, const KrylovConfig& cfg = {},
                          KrylovStats* stats = nullptr) {
  return krylov_expmv([&](const Vector& x) -> Vector { return l * x; }, r, dt, cfg, stats);
}

// ---- Magnus

enum class Quadrature { midpoint, gauss2 };

struct MagnusConfig {
  Quadrature quadrature = Quadrature::midpoint;
  bool commutator = false;  // second-order term, needs gauss2 nodes
  KrylovConfig krylov;
};

// exp(dt B0 [+ commutator]) r, B0 the step average of L
inline Vector magnus_step(const Liouvillian& lv, const Vector& r, double t, double dt, const MagnusConfig& cfg = {}) {
  if (!(dt > 0.0)) throw ConfigError("magnus: step must be positive");
  if (!lv.time_dependent() && !cfg.commutator) return krylov_step(lv.constant(), r, dt, cfg.krylov);

  if (cfg.quadrature == Quadrature::midpoint && !cfg.commutator) {
    auto c = lv.coefficients(t + 0.5 * dt);
    for (double x : c)
      if (!std::isfinite(x)) throw SolverError("magnus: non-finite drive envelope");
    return krylov_step(lv.assemble(c), r, dt, cfg.krylov);
  }
  const double off = std::sqrt(3.0) / 6.0;
  auto c1 = lv.coefficients(t + (0.5 - off) * dt);
  auto c2 = lv.coefficients(t + (0.5 + off) * dt);
  std::vector<double> avg(c1.size());
  for (std::size_t i = 0; i < c1.size(); ++i) {
    if (!std::isfinite(c1[i]) || !std::isfinite(c2[i])) throw SolverError("magnus: non-finite drive envelope");
    avg[i] = 0.5 * (c1[i] + c2[i]);
  }
  if (!cfg.commutator) return krylov_step(lv.assemble(avg), r, dt, cfg.krylov);
  // Omega = dt/2 (A1 + A2) + sqrt(3)/12 dt^2 [A2, A1]
  const double k = std::sqrt(3.0) / 12.0 * dt;
  auto op = [&](const Vector& x) -> Vector {
    Vector a1x = lv.apply(c1, x), a2x = lv.apply(c2, x);
    return lv.apply(avg, x) + k * (lv.apply(c2, a1x) - lv.apply(c1, a2x));
  };
  return krylov_expmv(op, r, dt, cfg.krylov);
}

// ---- trajectories

struct Observable {
  std::string name;
  SparseMatrix op;
};

// tr(O rho) = vec(O^T) . r
inline Vector expectation_row(const SparseMatrix& o) {
  const auto d = o.rows();
  Vector w = Vector::Zero(d * d);
  for (int k = 0; k < o.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(o, k); it; ++it) w(it.row() * d + it.col()) = it.value();
  return w;
}

inline Complex expectation(const Vector& row, const Vector& r) { return row.transpose() * r; }

struct EvolveConfig {
  double max_step = 0.0;  // magnus step cap (s); required for time-dependent L
  MagnusConfig magnus;
  double trace_tolerance = 1e-8;
  int max_halvings = 12;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<Complex>> values;  // [observable][sample]
  std::vector<double> trace_drift;
  std::vector<double> hermiticity;
  Vector final_state;

  double max_trace_drift() const {
    double m = 0.0;
    for (double x : trace_drift) m = std::max(m, x);
    return m;
  }
  double max_hermiticity_error() const {
    double m = 0.0;
    for (double x : hermiticity) m = std::max(m, x);
    return m;
  }
};

inline Vector propagate(const Liouvillian& lv, const Vector& r0, double t0, double t1, const EvolveConfig& cfg) {
  if (t1 == t0) return r0;
  if (!lv.time_dependent()) return krylov_step(lv.constant(), r0, t1 - t0, cfg.magnus.krylov);
  if (!(cfg.max_step > 0.0)) throw ConfigError("evolve: time-dependent Liouvillian needs a positive max_step");
  const double span = t1 - t0;
  int n = std::max(1, static_cast<int>(std::ceil(span / cfg.max_step - 1e-9)));
  double dt = span / n;
  Vector r = r0;
  double t = t0;
  for (int i = 0; i < n; ++i) {
    Complex before = vector_trace(r);
    Vector next = magnus_step(lv, r, t, dt, cfg.magnus);
    int halvings = 0;
    double sub = dt;
    while (std::abs(vector_trace(next) - before) > cfg.trace_tolerance) {
      if (++halvings > cfg.max_halvings) throw SolverError("magnus: step rejected, trace drift beyond tolerance");
      sub *= 0.5;
      next = r;
      for (double s = t; s < t + dt - 0.5 * sub; s += sub) next = magnus_step(lv, next, s, sub, cfg.magnus);
    }
    r = std::move(next);
    t = t0 + (i + 1) * dt;
  }
  return r;
}

inline Trajectory evolve(const Liouvillian& lv, const Vector& r0, const std::vector<double>& grid,
                         const std::vector<Observable>& obs, const EvolveConfig& cfg = {}) {
  if (r0.size() != lv.dimension()) throw ConfigError("evolve: initial state dimension mismatch");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError("evolve: time grid must be strictly increasing");
  std::vector<Vector> rows;
  Trajectory tr;
  for (const auto& o : obs) {
    if (o.op.rows() != Eigen::Index(lv.hilbert_dimension())) throw ConfigError("evolve: observable dimension mismatch");
    rows.push_back(expectation_row(o.op));
    tr.names.push_back(o.name);
  }
  tr.values.assign(obs.size(), {});
  Complex tr0 = vector_trace(r0);
  Vector r = r0;
  double t = grid.empty() ? 0.0 : grid.front();
  for (double g : grid) {
    r = propagate(lv, r, t, g, cfg);
    t = g;
    tr.times.push_back(g);
    for (std::size_t i = 0; i < rows.size(); ++i) tr.values[i].push_back(expectation(rows[i], r));
    tr.trace_drift.push_back(std::abs(vector_trace(r) - tr0));
    Matrix rho = devectorize(r);
    tr.hermiticity.push_back((rho - rho.adjoint()).norm());
  }
  tr.final_state = r;
  return tr;
}

inline Vector pure_state(std::size_t dim, std::size_t index) {
  Matrix rho = Matrix::Zero(dim, dim);
  rho(index, index) = 1.0;
  return vectorize(rho);
}

}  // namespace wgqed

#endif  // WGQED_LIOUVILLE_HPP
