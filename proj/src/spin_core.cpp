#include "fuzzyref/spin_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <fmt/format.h>

#include "fuzzyref/error.hpp"

namespace fuzzyref {

namespace {

void require_dim(int dim) {
  if (dim != 2 && dim != 4) fail(ErrorKind::Usage, fmt::format("matrix dimension must be 2 or 4, got {}", dim));
}

void require_same_dim(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.dim() != b.dim())
    fail(ErrorKind::Usage, fmt::format("dimension mismatch: {} vs {}", a.dim(), b.dim()));
}

}  // namespace

SquareMatrix::SquareMatrix(int dim) : dim_(dim) { require_dim(dim); }

SquareMatrix SquareMatrix::identity(int dim) {
  SquareMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::from_rows(int dim, std::initializer_list<cplx> entries) {
  SquareMatrix m(dim);
  if (static_cast<int>(entries.size()) != dim * dim)
    fail(ErrorKind::Usage, fmt::format("expected {} entries, got {}", dim * dim, entries.size()));
  std::copy(entries.begin(), entries.end(), m.a_.begin());
  return m;
}

SquareMatrix SquareMatrix::adjoint() const {
  SquareMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(r, c) = std::conj((*this)(c, r));
  return m;
}

SquareMatrix& SquareMatrix::operator+=(const SquareMatrix& rhs) {
  require_same_dim(*this, rhs);
  for (int i = 0; i < dim_ * dim_; ++i) a_[i] += rhs.a_[i];
  return *this;
}

SquareMatrix& SquareMatrix::operator-=(const SquareMatrix& rhs) {
  require_same_dim(*this, rhs);
  for (int i = 0; i < dim_ * dim_; ++i) a_[i] -= rhs.a_[i];
  return *this;
}

SquareMatrix& SquareMatrix::operator*=(cplx scale) {
  for (int i = 0; i < dim_ * dim_; ++i) a_[i] *= scale;
  return *this;
}

SquareMatrix operator*(const SquareMatrix& lhs, const SquareMatrix& rhs) {
  require_same_dim(lhs, rhs);
  const int n = lhs.dim();
  SquareMatrix out(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k) acc += lhs(r, k) * rhs(k, c);
      out(r, c) = acc;
    }
  return out;
}

bool SquareMatrix::is_hermitian(double tol) const {
  return max_abs_diff(adjoint()) <= tol;
}

bool SquareMatrix::is_unitary(double tol) const {
  return (adjoint() * *this).max_abs_diff(identity(dim_)) <= tol;
}

double SquareMatrix::max_abs_diff(const SquareMatrix& other) const {
  require_same_dim(*this, other);
  double worst = 0.0;
  for (int i = 0; i < dim_ * dim_; ++i) worst = std::max(worst, std::abs(a_[i] - other.a_[i]));
  return worst;
}

double SquareMatrix::operator_norm() const {
  if (dim_ != 2) fail(ErrorKind::Unsupported, "operator_norm is only implemented for 2x2 matrices");
  // Largest eigenvalue of the 2x2 positive matrix M^dagger M.
  const SquareMatrix g = adjoint() * *this;
  const double tr = (g(0, 0) + g(1, 1)).real();
  const double det = (g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0)).real();
  const double disc = std::max(0.0, tr * tr / 4.0 - det);
  return std::sqrt(std::max(0.0, tr / 2.0 + std::sqrt(disc)));
}

SquareMatrix SquareMatrix::hermitian_part() const {
  SquareMatrix h = *this + adjoint();
  h *= 0.5;
  return h;
}

SquareMatrix kron(const SquareMatrix& lhs, const SquareMatrix& rhs) {
  if (lhs.dim() != 2 || rhs.dim() != 2) fail(ErrorKind::Unsupported, "kron is only defined for two 2x2 factors");
  SquareMatrix out(4);
  for (int r1 = 0; r1 < 2; ++r1)
    for (int c1 = 0; c1 < 2; ++c1)
      for (int r2 = 0; r2 < 2; ++r2)
        for (int c2 = 0; c2 < 2; ++c2) out(2 * r1 + r2, 2 * c1 + c2) = lhs(r1, c1) * rhs(r2, c2);
  return out;
}

TwoQubitState::TwoQubitState(const std::array<cplx, 4>& amplitudes) : amp_(amplitudes) {
  double norm = 0.0;
  for (const auto& a : amp_) norm += std::norm(a);
  if (std::abs(norm - 1.0) > kNormTol)
    fail(ErrorKind::Contract, fmt::format("state norm is {:.17g}, expected 1", norm));
}

TwoQubitState TwoQubitState::bell_state() {
  const double h = 1.0 / std::sqrt(2.0);
  return TwoQubitState({0.0, h, h, 0.0});
}

BlochAxis BlochAxis::from_vector(double x, double y, double z) {
  const double len = std::sqrt(x * x + y * y + z * z);
  if (!(len > 0.0) || !std::isfinite(len)) fail(ErrorKind::Domain, "Bloch axis needs a finite non-zero vector");
  return {x / len, y / len, z / len};
}

SquareMatrix BlochAxis::pauli_projection() const {
  return SquareMatrix::from_rows(2, {cplx(nz, 0.0), cplx(nx, -ny), cplx(nx, ny), cplx(-nz, 0.0)});
}

SquareMatrix pauli(Axis axis) {
  using namespace std::complex_literals;
  switch (axis) {
    case Axis::X:
      return SquareMatrix::from_rows(2, {0.0, 1.0, 1.0, 0.0});
    case Axis::Y:
      return SquareMatrix::from_rows(2, {0.0, -1i, 1i, 0.0});
    case Axis::Z:
      return SquareMatrix::from_rows(2, {1.0, 0.0, 0.0, -1.0});
  }
  fail(ErrorKind::Usage, "unknown Pauli axis");
}

SquareMatrix pauli(std::string_view label) {
  if (label.size() == 1) {
    switch (std::tolower(static_cast<unsigned char>(label[0]))) {
      case 'x':
        return pauli(Axis::X);
      case 'y':
        return pauli(Axis::Y);
      case 'z':
        return pauli(Axis::Z);
      default:
        break;
    }
  }
  fail(ErrorKind::Usage, fmt::format("unknown Pauli label '{}' (expected x, y or z)", label));
}

SquareMatrix rotation_unitary(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return SquareMatrix::from_rows(2, {c, s, s, -c});
}

SquareMatrix rotated_observable(double theta) {
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  return SquareMatrix::from_rows(2, {c, s, s, -c});
}

SquareMatrix evolve_observable(double w, double beta, double t) {
  const double omega = std::hypot(w, beta);
  if (omega == 0.0 || t == 0.0) return pauli(Axis::Z);
  using namespace std::complex_literals;
  const BlochAxis axis{w / omega, 0.0, beta / omega};
  SquareMatrix u = axis.pauli_projection();
  u *= 1i * std::sin(omega * t);
  u += SquareMatrix::identity(2) * std::cos(omega * t);
  return (u * pauli(Axis::Z) * u.adjoint()).hermitian_part();
}

double pair_expectation(const TwoQubitState& state, const SquareMatrix& a, const SquareMatrix& b) {
  if (a.dim() != 2 || b.dim() != 2) fail(ErrorKind::Usage, "pair_expectation takes two 2x2 operators");
  if (!a.is_hermitian() || !b.is_hermitian())
    fail(ErrorKind::Contract, "pair_expectation requires Hermitian operators");
  const SquareMatrix ab = kron(a, b);
  const auto& psi = state.amplitudes();
  cplx acc = 0.0;
  for (int r = 0; r < 4; ++r) {
    cplx row = 0.0;
    for (int c = 0; c < 4; ++c) row += ab(r, c) * psi[c];
    acc += std::conj(psi[r]) * row;
  }
  const double bound = a.operator_norm() * b.operator_norm();
  if (std::abs(acc.imag()) > kHermitianTol * std::max(1.0, bound))
    fail(ErrorKind::Numeric, fmt::format("expectation has imaginary residue {:.3g}", acc.imag()));
  return std::clamp(acc.real(), -bound, bound);
}

}  // namespace fuzzyref
