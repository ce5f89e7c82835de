#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "i3322/symmat.hpp"

namespace i3322 {

inline constexpr double kSchmidtTol = 1e-10;

enum class Operator { A1, A2, A3, B1, B2, B3 };
inline constexpr std::array<Operator, 6> kSweepOrder = {Operator::A1, Operator::A2, Operator::A3,
                                                        Operator::B1, Operator::B2, Operator::B3};
std::string_view to_string(Operator op);

Vector uniform_schmidt(int dim);

// Six projective measurements on a Schmidt-diagonal state
// sum_i schmidt_i |ii>. Uniform weights give the maximally entangled state.
// Immutable once constructed; the "with_*" members return modified copies.
class Strategy {
 public:
  using Triple = std::array<Projector, 3>;

  // Validates dimensions, projectors (as given) and the Schmidt vector.
  Strategy(Vector schmidt, Triple alice, Triple bob);
  Strategy(Triple alice, Triple bob);  // uniform weights

  // Validates A1..B3 from raw matrices, naming the offending operator.
  static Strategy from_matrices(const Vector& schmidt, const std::array<Matrix, 6>& ops);
  static Strategy zero(int dim);

  int dim() const noexcept { return alice_[0].dim(); }
  const Vector& schmidt() const noexcept { return schmidt_; }
  bool uniform() const noexcept { return uniform_; }
  const Triple& alice() const noexcept { return alice_; }
  const Triple& bob() const noexcept { return bob_; }
  const Projector& op(Operator o) const;

  Strategy with(Operator o, Projector p) const;
  Strategy with_schmidt(Vector schmidt) const;
  // Conjugate every Bob operator by diag(signs), signs in {-1,+1}.
  Strategy with_bob_signs(const Vector& signs) const;
  // Alice <-> Bob relabeling, A_j <-> B_j.
  Strategy swapped() const;

 private:
  Vector schmidt_;
  Triple alice_;
  Triple bob_;
  bool uniform_ = true;
};

// Direct sum of two uniform-weight strategies (uniform weights on d1 + d2).
Strategy direct_sum(const Strategy& s, const Strategy& t);

// <Psi| A (x) B |Psi> = Tr(Λ Aᵀ Λ B), Λ = diag(schmidt). Strategies are real
// symmetric, so the transpose on Alice's side never changes anything.
double correlator(const SymMatrix& a, const SymMatrix& b, const Vector& schmidt);

struct BellValue {
  double value = 0.0;
  // Terms in the order the functional is written:
  // -<A2>, -<B1>, -2<B2>, <A1B1>, <A1B2>, <A2B1>, <A2B2>, -<A1B3>, <A2B3>, -<A3B1>, <A3B2>
  std::array<double, 11> terms{};
  static const std::array<std::string_view, 11>& labels();
};

BellValue i3322_value(const Strategy& s);

// (a1,a2,a3,b1,b2,b3) in {0,1}^6.
using Assignment = std::array<int, 6>;

struct ClassicalResult {
  double max = 0.0;
  std::vector<Assignment> maximizers;
  int evaluated = 0;
};

double classical_value(const Assignment& a);
ClassicalResult classical_max();

// Von Neumann entropy of the reduced state in bits, -sum p log2 p with
// p = schmidt^2.
double entanglement_entropy(const Vector& schmidt);

// Throws ValidationError when weights are negative, non-finite or not
// normalized within kSchmidtTol.
void validate_schmidt(const Vector& schmidt, int dim);

// Strategy JSON file:
//   {"dim": d, "schmidt": [..]?, "A": [m, m, m], "B": [m, m, m]}
// Numbers are written with 17 significant digits.
std::string strategy_to_json(const Strategy& s);
Strategy strategy_from_json(std::string_view text);
Strategy load_strategy(const std::filesystem::path& path);
void save_strategy(const Strategy& s, const std::filesystem::path& path);

}  // namespace i3322
