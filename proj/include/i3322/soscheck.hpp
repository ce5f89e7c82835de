#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "i3322/bounds.hpp"
#include "i3322/symmat.hpp"

namespace i3322 {

struct SosConstraint {
  SymMatrix matrix;  // vᵀ M v vanishes on the feasible set
  double multiplier = 0.0;
};

// Independent description of a feasible set: a sampler for the variables and
// the objective written directly (not through the certificate's matrices).
struct FeasibleModel {
  std::vector<std::string> variables;
  std::function<std::vector<double>(std::mt19937_64&)> sample;
  std::function<double(const std::vector<double>&)> objective;
};

// Claim: objective <= bound on the feasible set, witnessed by
//   Q = T - M0 - Σ t_i M_i  ⪰ 0,   T = bound at the constant monomial.
struct Certificate {
  std::string id;
  std::vector<std::string> monomials;  // e.g. "1", "x", "a^2", "x*z"
  double bound = 0.0;
  SymMatrix objective;  // M0, vᵀ M0 v = objective
  std::vector<SosConstraint> constraints;
  double psd_tolerance = 1e-10;
  std::optional<SymMatrix> gram;  // supplied Gram matrix, checked against the built one
  std::optional<FeasibleModel> model;

  int size() const { return static_cast<int>(monomials.size()); }
  int constant_index() const;
  // Monomial i of the result is monomial order[i] of this one.
  Certificate permuted(std::span<const int> order) const;
  Certificate with_bound(double t) const;
};

// Throws ValidationError naming the field.
void validate_certificate(const Certificate& c);

SymMatrix build_gram(const Certificate& c);

// Monomial labels: "1" or factors joined by '*', each "name" or "name^k".
struct Monomial {
  std::vector<std::pair<std::string, int>> factors;
  double eval(const std::vector<std::string>& vars, const std::vector<double>& values) const;
};
Monomial parse_monomial(std::string_view label);
std::vector<std::string> monomial_variables(const std::vector<std::string>& labels);

inline constexpr double kIdentityTol = 1e-10;

struct Verdict {
  SymMatrix gram;
  double psd_margin = 0.0;  // λ_min(Q)
  // Q_kk - Σ Q_ki²/Q_ii (k the constant monomial) when Q is an arrow matrix
  // around k with a positive diagonal elsewhere.
  std::optional<double> schur_margin;
  double identity_residual = 0.0;  // max over samples
  int samples = 0;
  bool feasible_samples = false;  // residual measured on the model's feasible set
  // min over samples of bound - objective (feasible samples only).
  std::optional<double> min_slack;
  double psd_tolerance = 1e-10;
  bool accepted = false;

  std::string text() const;
};

Verdict verify(const Certificate& c, int samples = 10000, std::uint64_t seed = 0);

// "i3322-case3": t ≥ x + z/2 - 2 on x² = a²+2a+2, z² = 1-a².
// "f-cap": f(x,y) ≤ 1/2 with r² = (x+y)²+1, p² = 1-x², q² = 1-y².
Certificate builtin_certificate(std::string_view id);
std::vector<std::string> builtin_certificate_ids();

// JSON: {"monomials", "bound", "objective", "constraints": [{"matrix",
// "multiplier"}], "psd_tolerance"?, "gram"?, "id"?}
Certificate certificate_from_json(std::string_view text);
std::string certificate_to_json(const Certificate& c);
Certificate load_certificate(const std::filesystem::path& path);

struct CrossCheck {
  BoundReport grid;
  Verdict certificate;
  double gap = 0.0;  // t - grid max
  bool ok = false;   // both accept and grid max <= t

  std::string text() const;
};

// Grid oracle for case 3 against the built-in certificate.
CrossCheck cross_check_case3(double step = 1e-4, int samples = 10000, std::uint64_t seed = 0);

}  // namespace i3322
