#ifndef WGQED_CORE_HPP
#define WGQED_CORE_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace wgqed {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double speed_of_light = 299792458.0;    // m/s
inline constexpr Complex I{0.0, 1.0};

inline constexpr const char* version = "0.1.0";

// Hierarchy mirrors the CLI exit codes: config -> 2, everything else -> 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct SolverError : Error {
  using Error::Error;
};
struct CapacityError : Error {
  using Error::Error;
};

inline double hz_to_angular(double f) { return two_pi * f; }
inline double angular_to_hz(double w) { return w / two_pi; }

}  // namespace wgqed

#endif  // WGQED_CORE_HPP
