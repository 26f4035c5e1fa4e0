#pragma once

// Exact two-level quantum mechanics on the reduced {|o_n>, |o_-n>} subspace.
// The dichotomic observable acts there as sigma_z; basis index 0 is |o_n>.

#include <array>
#include <complex>
#include <initializer_list>
#include <string_view>

namespace fuzzyref {

using cplx = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kNormTol = 1e-12;

/// Dense 2x2 or 4x4 complex matrix, row-major.
class SquareMatrix {
 public:
  explicit SquareMatrix(int dim = 2);

  static SquareMatrix identity(int dim);
  /// Row-major entries; the list length must be dim*dim.
  static SquareMatrix from_rows(int dim, std::initializer_list<cplx> entries);

  int dim() const noexcept { return dim_; }

  cplx& operator()(int row, int col) { return a_[row * dim_ + col]; }
  const cplx& operator()(int row, int col) const { return a_[row * dim_ + col]; }

  SquareMatrix adjoint() const;

  SquareMatrix& operator+=(const SquareMatrix& rhs);
  SquareMatrix& operator-=(const SquareMatrix& rhs);
  SquareMatrix& operator*=(cplx scale);

  friend SquareMatrix operator+(SquareMatrix lhs, const SquareMatrix& rhs) { return lhs += rhs; }
  friend SquareMatrix operator-(SquareMatrix lhs, const SquareMatrix& rhs) { return lhs -= rhs; }
  friend SquareMatrix operator*(SquareMatrix lhs, cplx scale) { return lhs *= scale; }
  friend SquareMatrix operator*(cplx scale, SquareMatrix rhs) { return rhs *= scale; }
  friend SquareMatrix operator*(const SquareMatrix& lhs, const SquareMatrix& rhs);

  bool is_hermitian(double tol = kHermitianTol) const;
  bool is_unitary(double tol = kUnitaryTol) const;

  /// Largest entrywise modulus of (this - other).
  double max_abs_diff(const SquareMatrix& other) const;

  /// Spectral norm. Only implemented for dim 2.
  double operator_norm() const;

  /// (M + M^dagger)/2; strips rounding asymmetry from products.
  SquareMatrix hermitian_part() const;

 private:
  int dim_;
  std::array<cplx, 16> a_{};
};

SquareMatrix kron(const SquareMatrix& lhs, const SquareMatrix& rhs);

/// Amplitudes over {|n,n>, |n,-n>, |-n,n>, |-n,-n>}.
class TwoQubitState {
 public:
  /// Throws Contract if the amplitudes are not normalised.
  explicit TwoQubitState(const std::array<cplx, 4>& amplitudes);

  /// (|o_n o_-n> + |o_-n o_n>)/sqrt(2)
  static TwoQubitState bell_state();

  const std::array<cplx, 4>& amplitudes() const noexcept { return amp_; }

 private:
  std::array<cplx, 4> amp_;
};

/// Unit vector on the Bloch sphere.
struct BlochAxis {
  double nx = 0.0;
  double ny = 0.0;
  double nz = 1.0;

  /// Normalises (x, y, z); throws Domain on the zero vector.
  static BlochAxis from_vector(double x, double y, double z);

  /// n . sigma
  SquareMatrix pauli_projection() const;
};

enum class Axis { X, Y, Z };

SquareMatrix pauli(Axis axis);
/// Accepts "x", "y", "z" (either case). Anything else is a Usage error.
SquareMatrix pauli(std::string_view label);

/// [[cos t, sin t], [sin t, -cos t]]; Hermitian and self-inverse.
SquareMatrix rotation_unitary(double theta);

/// U(theta)^dagger sigma_z U(theta) = cos(2 theta) sigma_z + sin(2 theta) sigma_x.
SquareMatrix rotated_observable(double theta);

/// Heisenberg-picture sigma_z under H = w sigma_x + beta sigma_z:
///   exp(iHt) sigma_z exp(-iHt),
/// using exp(iHt) = cos(Omega t) I + i sin(Omega t) H/Omega with
/// Omega = sqrt(w^2 + beta^2). Negative t is backward evolution.
///
/// With beta = 0 the result is cos(2wt) sigma_z + sin(2wt) sigma_y: the
/// physical sigma_x generator tilts the axis in the z-y plane, whereas
/// rotated_observable tilts it in the z-x plane. The two frames are related
/// by the phase gate diag(1, i) and give identical Bell-state correlations.
SquareMatrix evolve_observable(double w, double beta, double t);

/// <state| A (x) B |state> for 2x2 Hermitian A, B.
double pair_expectation(const TwoQubitState& state, const SquareMatrix& a,
                        const SquareMatrix& b);

}  // namespace fuzzyref
