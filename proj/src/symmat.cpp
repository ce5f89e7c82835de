#include "i3322/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace i3322 {

namespace {

constexpr double kTieTol = 1e-12;

double asymmetry(const Matrix& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

// Flip so the first component with |x| > kTieTol is positive.
void fix_sign(Eigen::Ref<Vector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > kTieTol) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i) - kTieTol) return true;
    if (a(i) > b(i) + kTieTol) return false;
  }
  return false;
}

}  // namespace

SymMatrix::SymMatrix(Matrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    std::ostringstream os;
    os << "matrix is " << m_.rows() << "x" << m_.cols() << ", expected square";
    throw ValidationError("matrix", os.str());
  }
  if (m_.rows() == 0) throw ValidationError("matrix", "empty matrix");
  if (!m_.allFinite()) throw ValidationError("matrix", "non-finite entry");
  if (double a = asymmetry(m_); a > tol) {
    std::ostringstream os;
    os << "not symmetric (max |M_ij - M_ji| = " << a << " > " << tol << ")";
    throw ValidationError("matrix", os.str());
  }
}

SymMatrix SymMatrix::zero(int dim) { return trusted(Matrix::Zero(dim, dim)); }
SymMatrix SymMatrix::identity(int dim) { return trusted(Matrix::Identity(dim, dim)); }

SymMatrix SymMatrix::trusted(Matrix m) {
  SymMatrix s;
  s.m_ = std::move(m);
  return s;
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const { return trusted(m_ + o.m_); }
SymMatrix SymMatrix::operator-(const SymMatrix& o) const { return trusted(m_ - o.m_); }
SymMatrix SymMatrix::operator*(double k) const { return trusted(m_ * k); }

SymMatrix SymMatrix::scaled(const Vector& diag) const {
  return trusted(diag.asDiagonal() * m_ * diag.asDiagonal());
}

Spectrum eig_sym(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig_sym: solver failed");
  const Vector& w = solver.eigenvalues();  // ascending
  Matrix v = solver.eigenvectors();
  const int n = m.dim();
  for (int i = 0; i < n; ++i) fix_sign(v.col(i));

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w(a) > w(b); });
  // Within clusters of (numerically) equal eigenvalues, order lexicographically.
  for (int start = 0; start < n;) {
    int end = start + 1;
    while (end < n && std::abs(w(order[start]) - w(order[end])) <= kTieTol) ++end;
    std::stable_sort(order.begin() + start, order.begin() + end,
                     [&](int a, int b) { return lex_less(v.col(b), v.col(a)); });
    start = end;
  }

  Spectrum s{Vector(n), Matrix(n, n)};
  for (int i = 0; i < n; ++i) {
    s.values(i) = w(order[i]);
    s.vectors.col(i) = v.col(order[i]);
  }
  return s;
}

std::optional<std::string> projector_violation(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) return "not a non-empty square matrix";
  if (!m.allFinite()) return "non-finite entry";
  if (double a = asymmetry(m); a > kSymmetryTol) {
    std::ostringstream os;
    os << "symmetry violated (max |M_ij - M_ji| = " << a << ")";
    return os.str();
  }
  if (double e = (m * m - m).norm(); e > tol) {
    std::ostringstream os;
    os << "idempotence violated (||P^2 - P||_F = " << e << ")";
    return os.str();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double x = solver.eigenvalues()(i);
    if (std::min(std::abs(x), std::abs(x - 1.0)) > tol) {
      std::ostringstream os;
      os << "eigenvalue " << x << " not in {0,1}";
      return os.str();
    }
  }
  return std::nullopt;
}

bool is_projector(const Matrix& m, double tol) { return !projector_violation(m, tol); }

Projector::Projector(SymMatrix m, double tol, const std::string& field) : m_(std::move(m)) {
  if (auto why = projector_violation(m_.matrix(), tol)) throw ValidationError(field, *why);
}

Projector Projector::zero(int dim) { return trusted(SymMatrix::zero(dim)); }
Projector Projector::identity(int dim) { return trusted(SymMatrix::identity(dim)); }

Projector Projector::trusted(SymMatrix m) {
  Projector p;
  p.m_ = std::move(m);
  return p;
}

int Projector::rank() const { return static_cast<int>(std::lround(matrix().trace())); }

Projector positive_eigenspace_projector(const SymMatrix& m) {
  const Spectrum s = eig_sym(m);
  Matrix p = Matrix::Zero(m.dim(), m.dim());
  for (int i = 0; i < m.dim() && s.values(i) > kKernelTol; ++i) {
    p.noalias() += s.vectors.col(i) * s.vectors.col(i).transpose();
  }
  // Exact symmetry so that downstream validation never trips on round-off.
  return Projector::trusted(SymMatrix::trusted(0.5 * (p + p.transpose())));
}

double psd_margin(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double trace_product(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

}  // namespace i3322
