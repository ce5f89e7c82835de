#include "i3322/bell.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace i3322 {

namespace {

constexpr std::array<std::string_view, 6> kOperatorNames = {"A1", "A2", "A3", "B1", "B2", "B3"};

bool is_uniform(const Vector& schmidt) {
  const double u = 1.0 / std::sqrt(static_cast<double>(schmidt.size()));
  return ((schmidt.array() - u).abs() <= 1e-14).all();
}

void check_dims(const Strategy::Triple& alice, const Strategy::Triple& bob) {
  const int d = alice[0].dim();
  if (d < 1) throw ValidationError("dim", "dimension must be positive");
  for (int k = 0; k < 3; ++k) {
    if (alice[k].dim() != d) throw ValidationError(std::string(kOperatorNames[k]), "dimension mismatch");
    if (bob[k].dim() != d) throw ValidationError(std::string(kOperatorNames[3 + k]), "dimension mismatch");
  }
}

}  // namespace

std::string_view to_string(Operator op) { return kOperatorNames[static_cast<int>(op)]; }

Vector uniform_schmidt(int dim) { return Vector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim))); }

void validate_schmidt(const Vector& schmidt, int dim) {
  if (schmidt.size() != dim) {
    std::ostringstream os;
    os << "expected " << dim << " weights, got " << schmidt.size();
    throw ValidationError("schmidt", os.str());
  }
  if (!schmidt.allFinite()) throw ValidationError("schmidt", "non-finite weight");
  if ((schmidt.array() < 0.0).any()) throw ValidationError("schmidt", "negative weight");
  if (double n = schmidt.squaredNorm(); std::abs(n - 1.0) > kSchmidtTol) {
    std::ostringstream os;
    os.precision(17);
    os << "sum of squared weights is " << n << ", expected 1";
    throw ValidationError("schmidt", os.str());
  }
}

Strategy::Strategy(Vector schmidt, Triple alice, Triple bob)
    : schmidt_(std::move(schmidt)), alice_(std::move(alice)), bob_(std::move(bob)) {
  check_dims(alice_, bob_);
  validate_schmidt(schmidt_, dim());
  uniform_ = is_uniform(schmidt_);
}

Strategy::Strategy(Triple alice, Triple bob)
    : Strategy(uniform_schmidt(alice[0].dim()), alice, std::move(bob)) {}

Strategy Strategy::from_matrices(const Vector& schmidt, const std::array<Matrix, 6>& ops) {
  Triple alice, bob;
  for (int k = 0; k < 6; ++k) {
    const std::string name(kOperatorNames[k]);
    SymMatrix sym;
    try {
      sym = SymMatrix(ops[k]);
    } catch (const ValidationError& e) {
      throw ValidationError(name, std::string(e.what()).substr(e.field().size() + 2));
    }
    Projector p(std::move(sym), kIdempotenceTol, name);
    (k < 3 ? alice[k] : bob[k - 3]) = std::move(p);
  }
  return Strategy(schmidt, std::move(alice), std::move(bob));
}

Strategy Strategy::zero(int dim) {
  const Projector z = Projector::zero(dim);
  return Strategy(Triple{z, z, z}, Triple{z, z, z});
}

const Projector& Strategy::op(Operator o) const {
  const int k = static_cast<int>(o);
  return k < 3 ? alice_[k] : bob_[k - 3];
}

Strategy Strategy::with(Operator o, Projector p) const {
  if (p.dim() != dim()) throw ValidationError(std::string(to_string(o)), "dimension mismatch");
  Strategy s = *this;
  const int k = static_cast<int>(o);
  (k < 3 ? s.alice_[k] : s.bob_[k - 3]) = std::move(p);
  return s;
}

Strategy Strategy::with_schmidt(Vector schmidt) const {
  validate_schmidt(schmidt, dim());
  Strategy s = *this;
  s.schmidt_ = std::move(schmidt);
  s.uniform_ = is_uniform(s.schmidt_);
  return s;
}

Strategy Strategy::with_bob_signs(const Vector& signs) const {
  Strategy s = *this;
  for (auto& b : s.bob_) b = Projector::trusted(b.sym().scaled(signs));
  return s;
}

Strategy Strategy::swapped() const {
  Strategy s = *this;
  std::swap(s.alice_, s.bob_);
  return s;
}

Strategy direct_sum(const Strategy& s, const Strategy& t) {
  if (!s.uniform() || !t.uniform()) throw ValidationError("schmidt", "direct_sum needs uniform weights");
  const int d1 = s.dim();
  const int d = d1 + t.dim();
  auto block = [&](const Projector& p, const Projector& q) {
    Matrix m = Matrix::Zero(d, d);
    m.topLeftCorner(d1, d1) = p.matrix();
    m.bottomRightCorner(t.dim(), t.dim()) = q.matrix();
    return Projector::trusted(SymMatrix::trusted(std::move(m)));
  };
  Strategy::Triple alice, bob;
  for (int k = 0; k < 3; ++k) {
    alice[k] = block(s.alice()[k], t.alice()[k]);
    bob[k] = block(s.bob()[k], t.bob()[k]);
  }
  return Strategy(std::move(alice), std::move(bob));
}

double correlator(const SymMatrix& a, const SymMatrix& b, const Vector& schmidt) {
  if (a.dim() != b.dim() || a.dim() != schmidt.size()) {
    throw ValidationError("correlator", "dimension mismatch");
  }
  // Tr(Λ A Λ B) = sum_ij λ_i λ_j A_ij B_ji.
  const Matrix weights = schmidt * schmidt.transpose();
  return (weights.array() * a.matrix().array() * b.matrix().transpose().array()).sum();
}

const std::array<std::string_view, 11>& BellValue::labels() {
  static const std::array<std::string_view, 11> kLabels = {
      "-<A2>", "-<B1>", "-2<B2>", "<A1B1>", "<A1B2>", "<A2B1>",
      "<A2B2>", "-<A1B3>", "<A2B3>", "-<A3B1>", "<A3B2>"};
  return kLabels;
}

BellValue i3322_value(const Strategy& s) {
  const Vector& w = s.schmidt();
  const SymMatrix id = SymMatrix::identity(s.dim());
  const auto& a = s.alice();
  const auto& b = s.bob();
  auto c = [&](const Projector& x, const Projector& y) { return correlator(x.sym(), y.sym(), w); };
  auto marginal_a = [&](const Projector& x) { return correlator(x.sym(), id, w); };
  auto marginal_b = [&](const Projector& y) { return correlator(id, y.sym(), w); };

  BellValue v;
  v.terms = {-marginal_a(a[1]),  -marginal_b(b[0]), -2.0 * marginal_b(b[1]), c(a[0], b[0]),
             c(a[0], b[1]),      c(a[1], b[0]),     c(a[1], b[1]),          -c(a[0], b[2]),
             c(a[1], b[2]),      -c(a[2], b[0]),    c(a[2], b[1])};
  v.value = 0.0;
  for (double t : v.terms) v.value += t;
  return v;
}

double classical_value(const Assignment& x) {
  const int a1 = x[0], a2 = x[1], a3 = x[2], b1 = x[3], b2 = x[4], b3 = x[5];
  return -a2 - b1 - 2 * b2 + a1 * b1 + a1 * b2 + a2 * b1 + a2 * b2 - a1 * b3 + a2 * b3 - a3 * b1 +
         a3 * b2;
}

ClassicalResult classical_max() {
  ClassicalResult r;
  r.max = -std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < 64; ++mask) {
    Assignment x;
    for (int k = 0; k < 6; ++k) x[k] = (mask >> (5 - k)) & 1;
    const double v = classical_value(x);
    ++r.evaluated;
    if (v > r.max) {
      r.max = v;
      r.maximizers.clear();
    }
    if (v == r.max) r.maximizers.push_back(x);
  }
  return r;
}

double entanglement_entropy(const Vector& schmidt) {
  validate_schmidt(schmidt, static_cast<int>(schmidt.size()));
  double h = 0.0;
  for (Eigen::Index i = 0; i < schmidt.size(); ++i) {
    const double p = schmidt(i) * schmidt(i);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

}  // namespace i3322
