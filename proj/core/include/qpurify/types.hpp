#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace qpurify {

using Complex = std::complex<double>;

using Vec2 = Eigen::Matrix<Complex, 2, 1>;
using Vec4 = Eigen::Matrix<Complex, 4, 1>;
using Vec16 = Eigen::Matrix<Complex, 16, 1>;
using Mat2 = Eigen::Matrix<Complex, 2, 2>;
using Mat4 = Eigen::Matrix<Complex, 4, 4>;
using Mat16 = Eigen::Matrix<Complex, 16, 16>;
using VecX = Eigen::VectorXcd;
using MatX = Eigen::MatrixXcd;
using RealVecX = Eigen::VectorXd;

// Qubit systems of two two-qubit states: rho lives on (A, B), sigma on (A', B').
enum class System { A, B, Ap, Bp };

using SystemOrder = std::array<System, 4>;

inline constexpr SystemOrder kOrderABApBp{System::A, System::B, System::Ap, System::Bp};
inline constexpr SystemOrder kOrderAApBBp{System::A, System::Ap, System::B, System::Bp};

std::string_view system_name(System s);
std::string order_label(const SystemOrder& order);

// Holder of the two-qubit local operators: party AA' or party BB'.
enum class Party { AAp, BBp };

std::string_view party_name(Party p);

// Single-copy partial transpose target.
enum class Side { A, B };

// Numerical thresholds. All logic takes these as parameters.
struct Tolerances {
  double validation = 1e-9;      // Hermiticity, positivity, trace
  double reconstruction = 1e-10; // spectral / Schmidt identities
  double rank = 1e-9;            // relative eigenvalue cut for numerical rank
  double degeneracy = 1e-8;      // relative discriminant cut (double root)
  double continuum = 1e-10;      // determinant quadratic identically zero
  double certification = 1e-9;   // protocol output checks
};

}  // namespace qpurify
