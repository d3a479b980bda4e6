#pragma once

// Fourier representation of multivariate closed planar curves.
//
// Basis indexing (1-based, as used throughout the library documentation):
//   phi_{2l-1}(t) = sqrt(2) sin(2 pi l t),   phi_{2l}(t) = sqrt(2) cos(2 pi l t),   l = 1..M/2.
// In 0-based column terms, column c carries frequency l = c/2 + 1, sine when c is
// even and cosine when c is odd. The constant function is carried only by B.
//
// Reparametrization convention: reparametrize(c, delta) returns c o gamma_delta,
// i.e. the curve t -> c(mod(t - delta, 1)). On coefficients this is A_j <- A_j P_delta,
// where P_delta is block diagonal with planar rotations O_{2 pi l delta}.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mvshape/errors.hpp"

namespace mvshape {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using CoefficientRows = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/** Number M of Fourier functions; M is even and at least 2. */
class BasisSpec {
 public:
  explicit BasisSpec(int size) : size_(size) {
    if (size < 2 || size % 2 != 0)
      throw DomainError("basis size must be an even integer >= 2, got " + std::to_string(size));
  }

  int size() const { return size_; }
  int frequencies() const { return size_ / 2; }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;

 private:
  int size_;
};

/** Counter-clockwise planar rotation O_theta. */
template <typename Scalar>
Matrix2<Scalar> rotation_matrix(Scalar theta) {
  using std::cos;
  using std::sin;
  Matrix2<Scalar> o;
  o << cos(theta), -sin(theta), sin(theta), cos(theta);
  return o;
}

/** (phi_1(t), ..., phi_M(t)) for t in [0,1]. */
template <typename Scalar>
VectorX<Scalar> eval_basis(Scalar t, BasisSpec spec) {
  if (!(t >= Scalar(0) && t <= Scalar(1)))
    throw DomainError("basis evaluation requires t in [0,1]");
  using std::cos;
  using std::sin;
  const Scalar root2 = std::numbers::sqrt2_v<Scalar>;
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  VectorX<Scalar> phi(spec.size());
  for (int l = 1; l <= spec.frequencies(); ++l) {
    const Scalar a = two_pi * Scalar(l) * t;
    phi(2 * l - 2) = root2 * sin(a);
    phi(2 * l - 1) = root2 * cos(a);
  }
  return phi;
}

/** Coefficients (B_j, A_j) of a single planar component. */
template <typename Scalar>
struct ComponentCoefficients {
  Vector2<Scalar> B = Vector2<Scalar>::Zero();
  CoefficientRows<Scalar> A;

  int basis_size() const { return static_cast<int>(A.cols()); }
};

/**
 * A p-component closed planar curve C = B + A phi.
 *
 * Stored in stacked form: A is 2p x M (rows 2j, 2j+1 hold X_j, Y_j) and B is a
 * 2p-vector. Values are immutable through the public interface except for the
 * explicit component setter.
 */
template <typename Scalar>
class MultiCurve {
 public:
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;

  MultiCurve(Matrix A, Vector B) : A_(std::move(A)), B_(std::move(B)) { validate(); }

  static MultiCurve zeros(int p, BasisSpec spec) {
    return MultiCurve(Matrix::Zero(2 * p, spec.size()), Vector::Zero(2 * p));
  }

  static MultiCurve from_components(std::span<const ComponentCoefficients<Scalar>> comps) {
    if (comps.empty()) throw DimensionError("a multivariate curve needs at least one component");
    const int M = comps.front().basis_size();
    const int p = static_cast<int>(comps.size());
    Matrix A(2 * p, M);
    Vector B(2 * p);
    for (int j = 0; j < p; ++j) {
      if (comps[j].basis_size() != M)
        throw DimensionError("components do not share one basis size");
      A.middleRows(2 * j, 2) = comps[j].A;
      B.template segment<2>(2 * j) = comps[j].B;
    }
    return MultiCurve(std::move(A), std::move(B));
  }

  int p() const { return static_cast<int>(A_.rows() / 2); }
  int basis_size() const { return static_cast<int>(A_.cols()); }
  BasisSpec basis() const { return BasisSpec(basis_size()); }

  const Matrix& A() const { return A_; }
  const Vector& B() const { return B_; }

  auto A(int j) const { return A_.middleRows(2 * j, 2); }
  auto B(int j) const { return B_.template segment<2>(2 * j); }

  ComponentCoefficients<Scalar> component(int j) const {
    check_index(j);
    return {B(j), A(j)};
  }

  void set_component(int j, const ComponentCoefficients<Scalar>& c) {
    check_index(j);
    if (c.basis_size() != basis_size()) throw DimensionError("component basis size mismatch");
    A_.middleRows(2 * j, 2) = c.A;
    B_.template segment<2>(2 * j) = c.B;
  }

  /** Number of scalar coefficients, p (2M + 2). */
  Eigen::Index coefficient_count() const { return A_.size() + B_.size(); }

  MultiCurve& operator+=(const MultiCurve& o) {
    check_same_shape(*this, o);
    A_ += o.A_;
    B_ += o.B_;
    return *this;
  }
  MultiCurve& operator-=(const MultiCurve& o) {
    check_same_shape(*this, o);
    A_ -= o.A_;
    B_ -= o.B_;
    return *this;
  }
  MultiCurve& operator*=(Scalar s) {
    A_ *= s;
    B_ *= s;
    return *this;
  }
  MultiCurve& operator/=(Scalar s) {
    A_ /= s;
    B_ /= s;
    return *this;
  }

  friend MultiCurve operator+(MultiCurve a, const MultiCurve& b) { return a += b; }
  friend MultiCurve operator-(MultiCurve a, const MultiCurve& b) { return a -= b; }
  friend MultiCurve operator-(MultiCurve a) { return a *= Scalar(-1); }
  friend MultiCurve operator*(MultiCurve a, Scalar s) { return a *= s; }
  friend MultiCurve operator*(Scalar s, MultiCurve a) { return a *= s; }
  friend MultiCurve operator/(MultiCurve a, Scalar s) { return a /= s; }

  static void check_same_shape(const MultiCurve& f, const MultiCurve& g) {
    if (f.p() != g.p() || f.basis_size() != g.basis_size())
      throw DimensionError("curves differ in number of components or basis size");
  }

 private:
  void validate() const {
    if (A_.rows() < 2 || A_.rows() % 2 != 0)
      throw DimensionError("coefficient matrix must have 2p rows with p >= 1");
    if (B_.size() != A_.rows()) throw DimensionError("B must have 2p entries");
    BasisSpec check(static_cast<int>(A_.cols()));
    (void)check;
    if (!A_.allFinite() || !B_.allFinite()) throw DomainError("non-finite curve coefficient");
  }

  void check_index(int j) const {
    if (j < 0 || j >= p()) throw DimensionError("component index out of range");
  }

  Matrix A_;
  Vector B_;
};

/** Value of every component at t, stacked as (X_1, Y_1, ..., X_p, Y_p). */
template <typename Scalar>
VectorX<Scalar> eval_curve(const MultiCurve<Scalar>& c, Scalar t) {
  return c.B() + c.A() * eval_basis(t, c.basis());
}

/** Inner product of H^p, exact in coefficient space. */
template <typename Scalar>
Scalar inner_product(const MultiCurve<Scalar>& f, const MultiCurve<Scalar>& g) {
  MultiCurve<Scalar>::check_same_shape(f, g);
  return f.A().cwiseProduct(g.A()).sum() + f.B().dot(g.B());
}

template <typename Scalar>
Scalar squared_norm(const MultiCurve<Scalar>& f) {
  return f.A().squaredNorm() + f.B().squaredNorm();
}

template <typename Scalar>
Scalar norm(const MultiCurve<Scalar>& f) {
  using std::sqrt;
  return sqrt(squared_norm(f));
}

/** (I_p kron O_theta) c. */
template <typename Scalar>
MultiCurve<Scalar> rotate(const MultiCurve<Scalar>& c, Scalar theta) {
  const Matrix2<Scalar> o = rotation_matrix(theta);
  auto A = c.A();
  auto B = c.B();
  for (int j = 0; j < c.p(); ++j) {
    A.middleRows(2 * j, 2) = o * c.A(j);
    B.template segment<2>(2 * j) = o * c.B(j);
  }
  return MultiCurve<Scalar>(std::move(A), std::move(B));
}

/**
 * The block-diagonal orthogonal matrix P_delta acting on Fourier coefficients.
 * Block l (l = 1..M/2) is the planar rotation O_{2 pi l delta}.
 */
template <typename Scalar>
class ReparamMatrix {
 public:
  ReparamMatrix(Scalar delta, BasisSpec spec) : delta_(wrap(delta)), spec_(spec) {}

  Scalar delta() const { return delta_; }
  BasisSpec basis() const { return spec_; }

  Matrix2<Scalar> block(int l) const {
    return rotation_matrix(Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(l) * delta_);
  }

  MatrixX<Scalar> dense() const {
    MatrixX<Scalar> P = MatrixX<Scalar>::Zero(spec_.size(), spec_.size());
    for (int l = 1; l <= spec_.frequencies(); ++l) P.template block<2, 2>(2 * l - 2, 2 * l - 2) = block(l);
    return P;
  }

  /** rows * P_delta, computed block by block. */
  template <typename Derived>
  MatrixX<Scalar> apply_right(const Eigen::MatrixBase<Derived>& rows) const {
    if (rows.cols() != spec_.size()) throw DimensionError("reparametrization basis size mismatch");
    MatrixX<Scalar> out(rows.rows(), rows.cols());
    for (int l = 1; l <= spec_.frequencies(); ++l)
      out.middleCols(2 * l - 2, 2) = rows.middleCols(2 * l - 2, 2) * block(l);
    return out;
  }

  /** P_delta P_delta' = P_{mod(delta + delta', 1)}. */
  friend ReparamMatrix operator*(const ReparamMatrix& a, const ReparamMatrix& b) {
    if (!(a.spec_ == b.spec_)) throw DimensionError("reparametrization basis size mismatch");
    return ReparamMatrix(a.delta_ + b.delta_, a.spec_);
  }

  static Scalar wrap(Scalar delta) {
    using std::floor;
    Scalar w = delta - floor(delta);
    return w >= Scalar(1) ? Scalar(0) : w;
  }

 private:
  Scalar delta_;
  BasisSpec spec_;
};

/** Componentwise composition c o (gamma_{delta_1}, ..., gamma_{delta_p}); B is unchanged. */
template <typename Scalar, typename Derived>
MultiCurve<Scalar> reparametrize(const MultiCurve<Scalar>& c, const Eigen::MatrixBase<Derived>& delta) {
  if (delta.size() != c.p()) throw DimensionError("one reparametrization parameter per component expected");
  auto A = c.A();
  for (int j = 0; j < c.p(); ++j)
    A.middleRows(2 * j, 2) = ReparamMatrix<Scalar>(delta(j), c.basis()).apply_right(c.A(j));
  return MultiCurve<Scalar>(std::move(A), c.B());
}

}  // namespace mvshape
