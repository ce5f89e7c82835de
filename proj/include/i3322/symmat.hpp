#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace i3322 {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kIdempotenceTol = 1e-8;
inline constexpr double kKernelTol = 1e-10;

// Raised for malformed user data. `field` names the offending item
// (e.g. "A1", "schmidt", "constraints[1].matrix").
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Dense real symmetric matrix. Symmetry is checked on construction; the
// entries are stored as given so that file round-trips are exact.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Matrix m, double tol = kSymmetryTol);

  static SymMatrix zero(int dim);
  static SymMatrix identity(int dim);
  // Caller guarantees symmetry (results of symmetric arithmetic).
  static SymMatrix trusted(Matrix m);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double k) const;
  // Congruence Dᵀ M D with D diagonal.
  SymMatrix scaled(const Vector& diag) const;

 private:
  Matrix m_;
};

inline SymMatrix operator*(double k, const SymMatrix& m) { return m * k; }

// Eigenvalues sorted descending, eigenvectors as matching columns.
struct Spectrum {
  Vector values;
  Matrix vectors;
};

Spectrum eig_sym(const SymMatrix& m);

// Frobenius distance from symmetric/idempotent; nullopt when the matrix is a
// projector at `tol`, otherwise a description of the violated invariant.
std::optional<std::string> projector_violation(const Matrix& m, double tol);
bool is_projector(const Matrix& m, double tol = kIdempotenceTol);

class Projector {
 public:
  Projector() = default;
  // Throws ValidationError(field, ...) when `m` is not a projector at `tol`.
  explicit Projector(SymMatrix m, double tol = kIdempotenceTol,
                     const std::string& field = "projector");

  static Projector zero(int dim);
  static Projector identity(int dim);
  static Projector trusted(SymMatrix m);

  int dim() const noexcept { return m_.dim(); }
  const SymMatrix& sym() const noexcept { return m_; }
  const Matrix& matrix() const noexcept { return m_.matrix(); }
  int rank() const;

 private:
  SymMatrix m_;
};

// Projector onto the span of eigenvectors with eigenvalue > kKernelTol.
Projector positive_eigenspace_projector(const SymMatrix& m);

// Smallest eigenvalue; the matrix is PSD iff this is >= -tolerance.
double psd_margin(const SymMatrix& m);

// Tr(A B) for symmetric A, B (elementwise sum, no product formed).
double trace_product(const Matrix& a, const Matrix& b);

}  // namespace i3322
