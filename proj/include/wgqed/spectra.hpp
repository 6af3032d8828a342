#ifndef WGQED_SPECTRA_HPP
#define WGQED_SPECTRA_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "core.hpp"
#include "coupling.hpp"
#include "fock.hpp"

namespace wgqed {

namespace detail {

// sum_{p,q} coef(p,q) sigma_+^q sigma_-^p, p = (m,j) lowered, q = (n,k) raised
inline void add_transition_quadratic(const FockBasis& b, const CouplingTables& tab, const Matrix& coef,
                                     std::vector<Triplet>& out) {
  const int L = b.sites();
  const int d = b.levels();
  FockState t, u;
  for (std::size_t c = 0; c < b.size(); ++c) {
    const auto& s = b.state(c);
    for (int j = 0; j < L; ++j) {
      int nj = s[j];
      if (nj == 0) continue;
      int p = tab.index(nj - 1, j);
      t = s;
      t.occupations[j] = nj - 1;
      for (int k = 0; k < L; ++k) {
        int nk = t[k];
        if (nk + 1 > d - 1) continue;
        Complex v = coef(p, tab.index(nk, k));
        if (v == Complex(0.0)) continue;
        u = t;
        u.occupations[k] = nk + 1;
        if (auto r = b.find(u)) out.emplace_back(int(*r), int(c), v);
      }
    }
  }
}

// sum_{j != k} C_jk a_j^dag a_k
inline void add_hopping(const FockBasis& b, const Matrix& cap, std::vector<Triplet>& out) {
  const int L = b.sites();
  FockState t;
  for (std::size_t c = 0; c < b.size(); ++c) {
    const auto& s = b.state(c);
    for (int k = 0; k < L; ++k) {
      if (s[k] == 0) continue;
      for (int j = 0; j < L; ++j) {
        if (j == k || cap(j, k) == Complex(0.0)) continue;
        if (s[j] + 1 > b.levels() - 1) continue;
        t = s;
        double amp = std::sqrt(double(t.occupations[k])) * std::sqrt(double(t.occupations[j] + 1));
        t.occupations[k] -= 1;
        t.occupations[j] += 1;
        if (auto r = b.find(t)) out.emplace_back(int(*r), int(c), cap(j, k) * amp);
      }
    }
  }
}

}  // namespace detail

// Both parts divided by hbar. H_eff = hermitian - (i/2) decay.
struct HamiltonianParts {
  SparseMatrix hermitian;
  SparseMatrix decay;
};

inline void check_models(const FockBasis& b, const std::vector<SiteModel>& models, const CouplingTables& tab) {
  if (static_cast<int>(models.size()) != b.sites()) throw ConfigError("h_eff: one site model per site required");
  if (tab.sites != b.sites()) throw ConfigError("h_eff: coupling tables and basis disagree on site count");
  if (tab.levels < b.levels()) throw ConfigError("h_eff: coupling tables cover fewer levels than the basis");
  for (const auto& m : models)
    if (!m.compatible(b.levels())) throw ConfigError("h_eff: qubit sites require level cap d = 2");
}

inline HamiltonianParts build_hamiltonian_parts(const FockBasis& b, const std::vector<SiteModel>& models,
                                                const CouplingTables& tab, const Matrix& capacitive,
                                                double frame = 0.0) {
  check_models(b, models, tab);
  const int L = b.sites();
  Matrix cap = capacitive.size() ? capacitive : Matrix::Zero(L, L);
  if (cap.rows() != L || cap.cols() != L) throw ConfigError("h_eff: capacitive matrix must be L x L");
  if ((cap - cap.adjoint()).norm() > 1e-12 * (1.0 + cap.norm()))
    throw ConfigError("h_eff: capacitive coupling matrix must be Hermitian");

  std::vector<Triplet> herm;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& s = b.state(i);
    double e = 0.0;
    for (int j = 0; j < L; ++j) e += models[j].level_energy(s[j]) - frame * s[j];
    if (e != 0.0) herm.emplace_back(int(i), int(i), e);
  }
  detail::add_transition_quadratic(b, tab, tab.exchange, herm);
  detail::add_hopping(b, cap, herm);

  std::vector<Triplet> dec;
  detail::add_transition_quadratic(b, tab, tab.gamma, dec);

  int n = static_cast<int>(b.size());
  HamiltonianParts h{SparseMatrix(n, n), SparseMatrix(n, n)};
  h.hermitian.setFromTriplets(herm.begin(), herm.end());
  h.decay.setFromTriplets(dec.begin(), dec.end());
  return h;
}

struct EffectiveHamiltonian {
  FockBasis basis;
  SparseMatrix matrix;  // H_eff / hbar, rad/s
  std::vector<SiteModel> models;
  CouplingRegime regime = CouplingRegime::simplified;
  Matrix capacitive;
  double frame = 0.0;

  Matrix dense() const { return Matrix(matrix); }

  bool conserves_number() const {
    for (int k = 0; k < matrix.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(matrix, k); it; ++it)
        if (basis.state(it.row()).total() != basis.state(it.col()).total() && it.value() != Complex(0.0))
          return false;
    return true;
  }
};

inline EffectiveHamiltonian build_h_eff(const FockBasis& b, const std::vector<SiteModel>& models,
                                        const CouplingTables& tab, const Matrix& capacitive = Matrix(),
                                        double frame = 0.0) {
  auto parts = build_hamiltonian_parts(b, models, tab, capacitive, frame);
  EffectiveHamiltonian h;
  h.basis = b;
  h.matrix = parts.hermitian - Complex(0.0, 0.5) * parts.decay;
  h.models = models;
  h.regime = tab.regime;
  h.capacitive = capacitive.size() ? capacitive : Matrix::Zero(b.sites(), b.sites());
  h.frame = frame;
  return h;
}

struct Eigenpair {
  Complex value;
  Vector right;        // unit norm
  Vector left;         // unit norm, phase fixed so that <left|right> > 0
  Complex bilinear;    // <left|right>
  int manifold = -1;   // -1 when N is not conserved

  double energy() const { return value.real(); }
  double decay_rate() const { return -2.0 * value.imag(); }
};

struct BiorthogonalSpectrum {
  std::vector<Eigenpair> pairs;
  std::size_t dimension = 0;

  std::size_t size() const { return pairs.size(); }
  const Eigenpair& operator[](std::size_t i) const { return pairs[i]; }

  std::vector<std::size_t> in_manifold(int n) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (pairs[i].manifold == n) out.push_back(i);
    return out;
  }

  // max_{a != b} |<b~|a>| / |<a~|a>|
  double biorthogonality_error() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < pairs.size(); ++a)
      for (std::size_t b = 0; b < pairs.size(); ++b) {
        if (a == b || pairs[a].manifold != pairs[b].manifold) continue;
        double r = std::abs(pairs[b].left.dot(pairs[a].right)) / std::abs(pairs[a].bilinear);
        worst = std::max(worst, r);
      }
    return worst;
  }

  // Frobenius norm of sum_a |a><a~|/<a~|a> - 1 restricted to manifold n
  double identity_residual(int n, const FockBasis* basis = nullptr) const {
    auto idx = in_manifold(n);
    if (idx.empty()) return 0.0;
    Matrix r = Matrix::Zero(dimension, dimension);
    for (auto i : idx) r += pairs[i].right * pairs[i].left.adjoint() / pairs[i].bilinear;
    if (basis) {
      for (auto s : manifold_indices(*basis, n)) r(s, s) -= 1.0;
    } else {
      r -= Matrix::Identity(dimension, dimension);
    }
    return r.norm();
  }
};

struct DiagonalizeOptions {
  double degeneracy_tolerance = 1e-9;  // relative to the block scale
  double defect_tolerance = 1e-10;     // smallest admissible |<a~|a>| for unit vectors
};

namespace detail {

// canonical basis of span(rows of v) by reduced row echelon form with earliest-column pivots
inline Matrix canonical_span(const Matrix& cols) {
  const int k = static_cast<int>(cols.cols());
  const int n = static_cast<int>(cols.rows());
  if (k <= 1) return cols;
  Matrix r = cols.transpose();  // k x n
  double scale = r.cwiseAbs().maxCoeff();
  double thr = 1e-6 * scale;
  int row = 0;
  for (int c = 0; c < n && row < k; ++c) {
    Eigen::Index piv;
    double best = r.col(c).segment(row, k - row).cwiseAbs().maxCoeff(&piv);
    if (best <= thr) continue;
    r.row(row).swap(r.row(row + piv));
    r.row(row) /= r(row, c);
    for (int o = 0; o < k; ++o)
      if (o != row) r.row(o) -= r(o, c) * r.row(row);
    ++row;
  }
  if (row < k) return cols;  // rank-deficient; let the orthogonalization report it
  Matrix out = r.transpose();
  for (int i = 0; i < k; ++i) out.col(i).normalize();
  return out;
}

}  // namespace detail

// Modified bi-Gram-Schmidt on one degenerate cluster. Columns of right/left
// span the right/left eigenspaces. A left candidate is chosen per step to
// maximise the new bilinear norm.
inline std::pair<Matrix, Matrix> biorthogonalize_degenerate(const Matrix& right, const Matrix& left,
                                                            double tolerance = 1e-10) {
  const int k = static_cast<int>(right.cols());
  if (left.cols() != k || left.rows() != right.rows())
    throw SolverError("biorthogonalize: right and left clusters differ in shape");
  Matrix phi(right.rows(), k), tphi(left.rows(), k);
  std::vector<int> unused(k);
  std::iota(unused.begin(), unused.end(), 0);

  for (int s = 0; s < k; ++s) {
    Vector v = right.col(s);
    for (int j = 0; j < s; ++j) v -= (tphi.col(j).dot(v) / tphi.col(j).dot(phi.col(j))) * phi.col(j);
    if (v.norm() <= tolerance * std::max(1.0, right.col(s).norm()))
      throw SolverError("biorthogonalize: span collapse in degenerate cluster");

    double best = -1.0;
    std::size_t pick = 0;
    Vector wbest;
    for (std::size_t c = 0; c < unused.size(); ++c) {
      Vector w = left.col(unused[c]);
      for (int j = 0; j < s; ++j) w -= (phi.col(j).dot(w) / phi.col(j).dot(tphi.col(j))) * tphi.col(j);
      double nw = w.norm();
      if (nw <= tolerance) continue;
      double score = std::abs(w.dot(v)) / (nw * v.norm());
      if (score > best) {
        best = score;
        pick = c;
        wbest = w;
      }
    }
    if (best <= tolerance) throw SolverError("biorthogonalize: vanishing bilinear norm in degenerate cluster");
    unused.erase(unused.begin() + pick);
    phi.col(s) = v;
    tphi.col(s) = wbest;
  }
  return {phi, tphi};
}

inline std::vector<Eigenpair> diagonalize_dense(const Matrix& h, const DiagonalizeOptions& opt = {},
                                                int manifold = -1) {
  const int n = static_cast<int>(h.rows());
  if (h.cols() != n) throw ConfigError("diagonalize: matrix must be square");
  if (!h.allFinite()) throw SolverError("diagonalize: matrix has non-finite entries");
  if (n == 0) return {};

  Complex shift = h.trace() / double(n);
  Matrix a = h - shift * Matrix::Identity(n, n);
  double scale = std::max(a.norm(), 1e-300);
  if (a.norm() <= 1e-14 * std::max(1.0, std::abs(shift))) scale = std::max(std::abs(shift), 1.0);

  Eigen::ComplexEigenSolver<Matrix> rs(a), ls(a.adjoint());
  if (rs.info() != Eigen::Success || ls.info() != Eigen::Success)
    throw SolverError("diagonalize: eigensolver did not converge");
  Vector lr = rs.eigenvalues();
  Vector ll = ls.eigenvalues().conjugate();
  Matrix vr = rs.eigenvectors();
  Matrix vl = ls.eigenvectors();

  double tol = opt.degeneracy_tolerance * scale;

  // pair each right eigenvalue with the nearest unused conj(left) eigenvalue
  std::vector<int> match(n, -1);
  std::vector<char> used(n, 0);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i : order) {
    int best = -1;
    double bd = 0.0;
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      double d = std::abs(ll(j) - lr(i));
      if (best < 0 || d < bd) {
        best = j;
        bd = d;
      }
    }
    if (bd > std::max(tol, 1e-12 * scale))
      throw SolverError("diagonalize: left/right eigenvalue pairing failed (gap " + std::to_string(bd) + ")");
    match[i] = best;
    used[best] = 1;
  }

  // clusters: connected components under |lr_i - lr_j| <= tol
  std::vector<int> cluster(n, -1);
  int nc = 0;
  for (int i = 0; i < n; ++i) {
    if (cluster[i] >= 0) continue;
    std::vector<int> stack{i};
    cluster[i] = nc;
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j)
        if (cluster[j] < 0 && std::abs(lr(j) - lr(c)) <= tol) {
          cluster[j] = nc;
          stack.push_back(j);
        }
    }
    ++nc;
  }

  std::vector<Eigenpair> out;
  out.reserve(n);
  for (int c = 0; c < nc; ++c) {
    std::vector<int> mem;
    for (int i = 0; i < n; ++i)
      if (cluster[i] == c) mem.push_back(i);
    const int k = static_cast<int>(mem.size());
    Matrix r(n, k), l(n, k);
    for (int s = 0; s < k; ++s) {
      r.col(s) = vr.col(mem[s]).normalized();
      l.col(s) = vl.col(match[mem[s]]).normalized();
    }
    Vector vals(k);
    for (int s = 0; s < k; ++s) vals(s) = lr(mem[s]);
    if (k > 1) {
      r = detail::canonical_span(r);
      l = detail::canonical_span(l);
      std::tie(r, l) = biorthogonalize_degenerate(r, l, opt.defect_tolerance);
      // every member shares the cluster eigenvalue up to tolerance; use the Rayleigh quotient
    }
    for (int s = 0; s < k; ++s) {
      Eigenpair e;
      e.right = r.col(s).normalized();
      e.left = l.col(s).normalized();
      Complex b = e.left.dot(e.right);
      if (std::abs(b) < opt.defect_tolerance)
        throw SolverError("diagonalize: vanishing bilinear norm (defective matrix within tolerance)");
      e.left *= std::polar(1.0, std::arg(b));
      e.bilinear = e.left.dot(e.right);
      e.value = (k > 1 ? e.left.dot(a * e.right) / e.bilinear : vals(s)) + shift;
      e.manifold = manifold;
      out.push_back(std::move(e));
    }
  }

  // (Re, Im) with ties in Re decided within tolerance
  std::stable_sort(out.begin(), out.end(), [](const Eigenpair& x, const Eigenpair& y) {
    return x.value.real() < y.value.real();
  });
  for (std::size_t i = 0; i < out.size();) {
    std::size_t j = i + 1;
    while (j < out.size() && out[j].value.real() - out[j - 1].value.real() <= tol) ++j;
    std::stable_sort(out.begin() + i, out.begin() + j,
                     [](const Eigenpair& x, const Eigenpair& y) { return x.value.imag() < y.value.imag(); });
    i = j;
  }
  return out;
}

inline BiorthogonalSpectrum diagonalize(const Matrix& h, const DiagonalizeOptions& opt = {}) {
  BiorthogonalSpectrum s;
  s.dimension = h.rows();
  s.pairs = diagonalize_dense(h, opt);
  return s;
}

// Manifold blocks are split off and diagonalized independently when N is
// conserved; vectors are embedded back into the full basis.
inline BiorthogonalSpectrum diagonalize(const EffectiveHamiltonian& h, const DiagonalizeOptions& opt = {}) {
  BiorthogonalSpectrum s;
  s.dimension = h.basis.size();
  if (!h.conserves_number()) {
    s.pairs = diagonalize_dense(h.dense(), opt);
    return s;
  }
  Matrix full = h.dense();
  int top = h.basis.max_excitation();
  for (int n = 0; n <= top; ++n) {
    auto idx = manifold_indices(h.basis, n);
    if (idx.empty()) continue;
    const int m = static_cast<int>(idx.size());
    Matrix blk(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) blk(a, b) = full(idx[a], idx[b]);
    for (auto& e : diagonalize_dense(blk, opt, n)) {
      Vector r = Vector::Zero(s.dimension), l = Vector::Zero(s.dimension);
      for (int a = 0; a < m; ++a) {
        r(idx[a]) = e.right(a);
        l(idx[a]) = e.left(a);
      }
      e.right = std::move(r);
      e.left = std::move(l);
      s.pairs.push_back(std::move(e));
    }
  }
  return s;
}

// eigenvalues only, sorted by (Re, Im)
inline std::vector<Complex> eigenvalues(const Matrix& h) {
  Eigen::ComplexEigenSolver<Matrix> es(h, false);
  if (es.info() != Eigen::Success) throw SolverError("eigenvalues: eigensolver did not converge");
  std::vector<Complex> v(es.eigenvalues().data(), es.eigenvalues().data() + h.rows());
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

// ---- jump operators and decay channels

struct JumpOperator {
  double rate = 0.0;  // gamma_k
  Vector weights;     // u_k over transitions p
  SparseMatrix op;    // b_k on the basis
};

// gamma = sum_k g_k u_k u_k^dag, b_k = sum_p u_k[p] sigma_-^p
inline std::vector<JumpOperator> collective_jumps(const FockBasis& b, const CouplingTables& tab,
                                                  double tolerance = 1e-12) {
  std::vector<JumpOperator> out;
  if (tab.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> es(tab.gamma);
  if (es.info() != Eigen::Success) throw SolverError("jumps: eigensolver failed on the decay matrix");
  double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  if (es.eigenvalues().minCoeff() < -tolerance * top * 1e3)
    throw SolverError("jumps: collective decay matrix is not positive semidefinite");
  std::vector<SparseMatrix> sig(tab.size());
  for (int p = 0; p < tab.size(); ++p) {
    int m = tab.level_of(p);
    if (m + 1 <= b.levels() - 1) sig[p] = sigma_minus(b, m, tab.site_of(p));
  }
  for (int k = tab.size() - 1; k >= 0; --k) {
    double g = es.eigenvalues()(k);
    if (g <= tolerance * top) continue;
    JumpOperator j;
    j.rate = g;
    j.weights = es.eigenvectors().col(k);
    j.op = SparseMatrix(int(b.size()), int(b.size()));
    for (int p = 0; p < tab.size(); ++p)
      if (sig[p].size() && std::abs(j.weights(p)) > 0.0) j.op += j.weights(p) * sig[p];
    j.op.prune(Complex(0.0));
    out.push_back(std::move(j));
  }
  return out;
}

struct DecayChannel {
  std::size_t from;
  std::size_t to;
  int jump;
  double rate;
};

struct DecayChannelTable {
  std::vector<DecayChannel> channels;
  std::vector<double> totals;    // sum over beta, k per alpha
  double max_imaginary = 0.0;    // largest discarded imaginary part

  double rate(std::size_t from, std::size_t to) const {
    double r = 0.0;
    for (const auto& c : channels)
      if (c.from == from && c.to == to) r += c.rate;
    return r;
  }
};

// Gamma^k_{a->b} = g_k <a|b_k^dag|b><b~|b_k|a> / (<a|a><b~|b>)
inline DecayChannelTable decay_channels(const BiorthogonalSpectrum& s, const std::vector<JumpOperator>& jumps) {
  DecayChannelTable t;
  t.totals.assign(s.size(), 0.0);
  for (std::size_t a = 0; a < s.size(); ++a) {
    const auto& A = s[a];
    double na = A.right.squaredNorm();
    for (std::size_t k = 0; k < jumps.size(); ++k) {
      Vector ba = jumps[k].op * A.right;
      if (ba.norm() == 0.0) continue;
      for (std::size_t b = 0; b < s.size(); ++b) {
        const auto& B = s[b];
        if (A.manifold >= 0 && B.manifold != A.manifold - 1) continue;
        Complex x = jumps[k].rate * std::conj(B.right.dot(ba)) * B.left.dot(ba) / (na * B.bilinear);
        // <a|b^dag|b> = conj(<b|b a>)
        t.max_imaginary = std::max(t.max_imaginary, std::abs(x.imag()));
        if (x == Complex(0.0)) continue;
        t.channels.push_back({a, b, int(k), x.real()});
        t.totals[a] += x.real();
      }
    }
  }
  return t;
}

// ---- classification

enum class Symmetry { symmetric, antisymmetric, none };
enum class Brightness { dark, weak, faint, bright };

inline std::string to_string(Symmetry s) {
  switch (s) {
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::antisymmetric: return "antisymmetric";
    case Symmetry::none: return "none";
  }
  return "?";
}
inline std::string to_string(Brightness b) {
  switch (b) {
    case Brightness::dark: return "dark";
    case Brightness::weak: return "weak";
    case Brightness::faint: return "faint";
    case Brightness::bright: return "bright";
  }
  return "?";
}

struct BrightnessBands {
  double dark = 0.05;  // in units of gamma
  double weak = 0.5;
  double faint = 2.0;  // above this: bright
};

struct StateLabel {
  Symmetry symmetry = Symmetry::none;
  Brightness brightness = Brightness::dark;
};

inline Brightness brightness_of(double decay, double gamma, const BrightnessBands& bands = {}) {
  double r = decay / gamma;
  if (r < bands.dark) return Brightness::dark;
  if (r < bands.weak) return Brightness::weak;
  if (r <= bands.faint) return Brightness::faint;
  return Brightness::bright;
}

inline Symmetry symmetry_of(const Vector& v, const SparseMatrix& exchange, double tolerance = 1e-6) {
  Vector pv = exchange * v;
  double n = v.norm();
  if ((pv - v).norm() <= tolerance * n) return Symmetry::symmetric;
  if ((pv + v).norm() <= tolerance * n) return Symmetry::antisymmetric;
  return Symmetry::none;
}

inline std::vector<StateLabel> classify(const BiorthogonalSpectrum& s, const SparseMatrix* exchange, double gamma,
                                        const BrightnessBands& bands = {}, double tolerance = 1e-6) {
  std::vector<StateLabel> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (exchange) out[i].symmetry = symmetry_of(s[i].right, *exchange, tolerance);
    out[i].brightness = brightness_of(s[i].decay_rate(), gamma, bands);
  }
  return out;
}

inline void write_spectrum_csv(std::ostream& os, const BiorthogonalSpectrum& s, const std::vector<StateLabel>& labels) {
  os << "manifold_N,index,E_over_hbar_rad_s,Gamma_rad_s,symmetry,brightness\n";
  os.precision(17);
  std::vector<int> counter;
  for (std::size_t i = 0; i < s.size(); ++i) {
    int n = s[i].manifold;
    std::size_t slot = static_cast<std::size_t>(std::max(n, 0));
    if (counter.size() <= slot) counter.resize(slot + 1, 0);
    os << n << ',' << counter[slot]++ << ',' << s[i].energy() << ',' << s[i].decay_rate() << ','
       << to_string(labels[i].symmetry) << ',' << to_string(labels[i].brightness) << '\n';
  }
}

// ---- closed forms

// lambda_{3,4} of the two-pair one-excitation manifold; [0] takes the + root
inline std::array<Complex, 2> two_pair_oracle(double w1, double w2, double j, double gamma) {
  Complex base((w1 + w2) / 2 + j, -gamma);
  Complex root = 0.5 * std::sqrt(Complex((w1 - w2) * (w1 - w2) - 4 * gamma * gamma, 0.0));
  return {base + root, base - root};
}

struct EnergyDecay {
  double energy;
  double decay;
};

// in-phase qubit array, total spin s and projection m_z (both in units of 1/2)
inline EnergyDecay qubit_dicke_oracle(int sites, int s, int mz, double omega0, double gamma) {
  if (s < 0 || s > sites || (sites - s) % 2 != 0) throw ConfigError("dicke: invalid total spin s");
  if (std::abs(mz) > s || (s - mz) % 2 != 0) throw ConfigError("dicke: invalid projection m_z");
  return {omega0 * (mz + sites) / 2.0, gamma * (s + mz) * (s - mz + 2) / 4.0};
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// number of spin-s multiplets among L spin-1/2
inline std::uint64_t dicke_multiplicity(int sites, int s) {
  int k = (sites - s) / 2;
  return binomial(sites, k) - binomial(sites, k - 1);
}

// harmonic in-phase array: Gamma = m L gamma appears D_{N-m, L-1} times in manifold N
inline std::uint64_t harmonic_decay_multiplicity(int n, int m, int sites) {
  if (m < 0 || m > n) return 0;
  if (sites == 1) return m == n ? 1 : 0;
  return manifold_dimension(n - m, sites - 1);
}

}  // namespace wgqed

#endif  // WGQED_SPECTRA_HPP
