#ifndef WGQED_FOCK_HPP
#define WGQED_FOCK_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"

namespace wgqed {

struct FockState {
  std::vector<int> occupations;

  int total() const {
    int n = 0;
    for (int x : occupations) n += x;
    return n;
  }
  std::size_t sites() const { return occupations.size(); }
  int operator[](std::size_t j) const { return occupations[j]; }

  auto operator<=>(const FockState&) const = default;
  bool operator==(const FockState&) const = default;

  std::string label() const {
    std::string s = "|";
    for (int x : occupations) s += std::to_string(x);
    return s + ">";
  }
};

inline constexpr std::size_t default_max_dimension = 20000;

// (N+L-1 choose N)
inline std::uint64_t manifold_dimension(int n, int sites) {
  if (n < 0 || sites < 1) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= n; ++i) r = r * static_cast<std::uint64_t>(sites - 1 + i) / i;
  return r;
}

namespace detail {

// number of length-L vectors with entries in [0, d) and sum in [lo, hi]
inline double count_states(int sites, int levels, int lo, int hi) {
  std::vector<double> ways(static_cast<std::size_t>(hi) + 1, 0.0);
  ways[0] = 1.0;
  for (int s = 0; s < sites; ++s) {
    std::vector<double> next(ways.size(), 0.0);
    for (int t = 0; t <= hi; ++t) {
      if (ways[t] == 0.0) continue;
      for (int n = 0; n < levels && t + n <= hi; ++n) next[t + n] += ways[t];
    }
    ways.swap(next);
  }
  double total = 0.0;
  for (int t = std::max(lo, 0); t <= hi; ++t) total += ways[t];
  return total;
}

}  // namespace detail

// States are kept in lexicographic ascending order of (n_1, ..., n_L),
// so lookup is a binary search and the index map is implicit.
class FockBasis {
 public:
  FockBasis() = default;

  static FockBasis enumerate(int sites, int levels, std::optional<int> manifold = std::nullopt,
                             std::size_t max_dimension = default_max_dimension) {
    if (manifold && *manifold < 0) throw ConfigError("fock: manifold must be >= 0");
    return build(sites, levels, manifold, manifold, max_dimension);
  }

  // all states with total excitation <= max_total
  static FockBasis truncated(int sites, int levels, int max_total,
                             std::size_t max_dimension = default_max_dimension) {
    if (max_total < 0) throw ConfigError("fock: excitation cap must be >= 0");
    return build(sites, levels, std::nullopt, max_total, max_dimension);
  }

  int sites() const { return sites_; }
  int levels() const { return levels_; }
  std::optional<int> manifold() const { return manifold_; }
  std::optional<int> max_total() const { return max_total_; }
  std::size_t size() const { return states_.size(); }
  const FockState& state(std::size_t i) const { return states_[i]; }
  const std::vector<FockState>& states() const { return states_; }

  std::optional<std::size_t> find(const FockState& s) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), s);
    if (it == states_.end() || *it != s) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
  }

  std::size_t index(const FockState& s) const {
    auto i = find(s);
    if (!i) throw Error("fock: state " + s.label() + " not in basis");
    return *i;
  }

  std::size_t index(std::initializer_list<int> occ) const { return index(FockState{occ}); }

  bool contains(const FockState& s) const { return find(s).has_value(); }

  // largest N present
  int max_excitation() const {
    int m = 0;
    for (const auto& s : states_) m = std::max(m, s.total());
    return m;
  }

 private:
  static FockBasis build(int sites, int levels, std::optional<int> manifold,
                         std::optional<int> cap, std::size_t max_dimension) {
    if (sites < 1) throw ConfigError("fock: need at least one site");
    if (levels < 2) throw ConfigError("fock: level cap d must be >= 2");
    int hi = cap ? std::min(*cap, sites * (levels - 1)) : sites * (levels - 1);
    int lo = manifold ? *manifold : 0;
    double expected = (lo > hi) ? 0.0 : detail::count_states(sites, levels, lo, hi);
    if (expected > static_cast<double>(max_dimension)) {
      std::ostringstream os;
      os << "fock: basis of " << expected << " states exceeds the configured maximum "
         << max_dimension;
      throw CapacityError(os.str());
    }

    FockBasis b;
    b.sites_ = sites;
    b.levels_ = levels;
    b.manifold_ = manifold;
    b.max_total_ = manifold ? std::nullopt : cap;
    b.states_.reserve(static_cast<std::size_t>(expected));

    std::vector<int> occ(sites, 0);
    // depth-first in lexicographic order with sum pruning
    auto rec = [&](auto&& self, int j, int used) -> void {
      if (j == sites) {
        if (used >= lo) b.states_.push_back(FockState{occ});
        return;
      }
      int room = sites - j - 1;
      for (int n = 0; n < levels && used + n <= hi; ++n) {
        if (used + n + room * (levels - 1) < lo) continue;
        occ[j] = n;
        self(self, j + 1, used + n);
      }
      occ[j] = 0;
    };
    if (lo <= hi) rec(rec, 0, 0);
    return b;
  }

  int sites_ = 0;
  int levels_ = 0;
  std::optional<int> manifold_;
  std::optional<int> max_total_;
  std::vector<FockState> states_;
};

enum class SiteKind { qubit, transmon, harmonic };

inline std::string to_string(SiteKind k) {
  switch (k) {
    case SiteKind::qubit: return "qubit";
    case SiteKind::transmon: return "transmon";
    case SiteKind::harmonic: return "harmonic";
  }
  return "?";
}

inline SiteKind site_kind_from_string(const std::string& s) {
  if (s == "qubit") return SiteKind::qubit;
  if (s == "transmon") return SiteKind::transmon;
  if (s == "harmonic") return SiteKind::harmonic;
  throw ConfigError("unknown site model '" + s + "' (expected qubit|transmon|harmonic)");
}

struct SiteModel {
  SiteKind kind = SiteKind::transmon;
  double omega = 0.0;          // 0->1 transition, rad/s
  double anharmonicity = 0.0;  // U, rad/s

  static SiteModel qubit(double w) { return {SiteKind::qubit, w, 0.0}; }
  static SiteModel harmonic(double w) { return {SiteKind::harmonic, w, 0.0}; }
  static SiteModel transmon(double w, double u) { return {SiteKind::transmon, w, u}; }

  double effective_u() const { return kind == SiteKind::transmon ? anharmonicity : 0.0; }

  // m -> m+1
  double transition_frequency(int m) const { return omega - m * effective_u(); }

  // E_n / hbar, sum of transitions below n
  double level_energy(int n) const {
    return omega * n - 0.5 * effective_u() * n * (n - 1);
  }

  bool compatible(int levels) const { return kind != SiteKind::qubit || levels == 2; }
};

// Operators below act from basis `from` into basis `to`. With identical
// arguments they are ordinary square matrices; with manifold-restricted
// bases they map N -> N-1 (lowering) as rectangular blocks.

namespace detail {

template <class F>
SparseMatrix site_lowering(const FockBasis& from, const FockBasis& to, int j, F amplitude) {
  if (j < 0 || j >= from.sites()) throw ConfigError("fock: site index out of range");
  if (from.sites() != to.sites()) throw ConfigError("fock: basis site counts differ");
  std::vector<Triplet> t;
  t.reserve(from.size());
  FockState tmp;
  for (std::size_t c = 0; c < from.size(); ++c) {
    const auto& s = from.state(c);
    int n = s[j];
    if (n == 0) continue;
    double a = amplitude(n);
    if (a == 0.0) continue;
    tmp = s;
    tmp.occupations[j] = n - 1;
    if (auto r = to.find(tmp)) t.emplace_back(static_cast<int>(*r), static_cast<int>(c), a);
  }
  SparseMatrix m(static_cast<int>(to.size()), static_cast<int>(from.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace detail

inline SparseMatrix annihilation(const FockBasis& from, const FockBasis& to, int j) {
  return detail::site_lowering(from, to, j, [](int n) { return std::sqrt(double(n)); });
}
inline SparseMatrix annihilation(const FockBasis& b, int j) { return annihilation(b, b, j); }

inline SparseMatrix creation(const FockBasis& b, int j) {
  return SparseMatrix(annihilation(b, j).adjoint());
}

// sigma_-^{mj} = |m><m+1| on site j
inline SparseMatrix sigma_minus(const FockBasis& from, const FockBasis& to, int m, int j) {
  if (m < 0 || m + 1 > from.levels() - 1) throw ConfigError("fock: level index out of range");
  return detail::site_lowering(from, to, j, [m](int n) { return n == m + 1 ? 1.0 : 0.0; });
}
inline SparseMatrix sigma_minus(const FockBasis& b, int m, int j) { return sigma_minus(b, b, m, j); }

inline SparseMatrix sigma_plus(const FockBasis& b, int m, int j) {
  return SparseMatrix(sigma_minus(b, m, j).adjoint());
}

inline SparseMatrix number(const FockBasis& b, int j) {
  if (j < 0 || j >= b.sites()) throw ConfigError("fock: site index out of range");
  SparseMatrix m(static_cast<int>(b.size()), static_cast<int>(b.size()));
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (int n = b.state(i)[j]) t.emplace_back(int(i), int(i), double(n));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

inline SparseMatrix total_number(const FockBasis& b) {
  SparseMatrix m(static_cast<int>(b.size()), static_cast<int>(b.size()));
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (int n = b.state(i).total()) t.emplace_back(int(i), int(i), double(n));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

inline SparseMatrix identity(const FockBasis& b) {
  SparseMatrix m(static_cast<int>(b.size()), static_cast<int>(b.size()));
  m.setIdentity();
  return m;
}

// c_k = L^{-1/2} sum_j exp(2 pi i j k / L) a_j, sites counted from 1
inline SparseMatrix collective_mode(const FockBasis& from, const FockBasis& to, int k) {
  int L = from.sites();
  if (k < 1 || k > L) throw ConfigError("fock: collective mode index must be in 1..L");
  SparseMatrix c(static_cast<int>(to.size()), static_cast<int>(from.size()));
  for (int j = 0; j < L; ++j) {
    Complex ph = std::polar(1.0 / std::sqrt(double(L)), two_pi * (j + 1) * k / L);
    c += ph * annihilation(from, to, j);
  }
  c.prune(Complex(0.0));
  return c;
}
inline SparseMatrix collective_mode(const FockBasis& b, int k) { return collective_mode(b, b, k); }

// |n1 n2 n3 n4> -> |n3 n4 n1 n2>
inline SparseMatrix pair_exchange(const FockBasis& b) {
  if (b.sites() != 4) throw ConfigError("fock: pair exchange needs a 4-site basis");
  std::vector<Triplet> t;
  FockState tmp;
  for (std::size_t c = 0; c < b.size(); ++c) {
    const auto& o = b.state(c).occupations;
    tmp.occupations = {o[2], o[3], o[0], o[1]};
    t.emplace_back(int(b.index(tmp)), int(c), 1.0);
  }
  SparseMatrix m(static_cast<int>(b.size()), static_cast<int>(b.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// indices of basis states with total excitation n
inline std::vector<std::size_t> manifold_indices(const FockBasis& b, int n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.state(i).total() == n) out.push_back(i);
  return out;
}

}  // namespace wgqed

#endif  // WGQED_FOCK_HPP
