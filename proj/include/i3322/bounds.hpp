#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "i3322/ascent.hpp"
#include "i3322/structure.hpp"

namespace i3322 {

// √((x+y)²+1) + √(1-x²)/2 + √(1-y²)/2 - 2 on [-1,1]².
double f_value(double x, double y);

// Closed-form value of a chain-even, chain-odd or cyclic normal form.
double omega_closed(const NormalFormSpec& spec);

// c_d c_{d+1} + (c1 - c_{d+1})/2 - 1 + √(1-c_d²)/2.
double odd_aux_expression(double c1, double c_last, double c_d);

// Σ a_i x_i + b >= 0.
struct LinearConstraint {
  std::vector<double> a;
  double b = 0.0;
};

// Maximize F(x) over x ∈ [-1,1]^k on the grid x_i = cos(j·h), h = π/n,
// n = ceil(π/step). `lipschitz[i]` bounds |∂F(cos θ)/∂θ_i|.
struct GridProblem {
  std::vector<std::string> names;
  std::function<double(const std::vector<double>&)> objective;
  std::vector<double> lipschitz;
  std::vector<LinearConstraint> constraints;
};

struct GridMax {
  double value = 0.0;
  std::vector<double> argmax;  // in x = cos θ
  bool argmax_feasible = false;  // all constraints >= 0 (not just within the margin)
  int intervals = 0;
  double step = 0.0;  // π / intervals
  long long evaluations = 0;
};

// Exact maximum over the grid points that satisfy every constraint up to the
// margin (h/2)·Σ|a_i|, found by branch and bound over index boxes. Every
// feasible point lies within h/2 per angle of such a grid point.
GridMax grid_maximum(const GridProblem& p, double step);

enum class BoundVerdict { Holds, Refuted, Inconclusive };
std::string_view to_string(BoundVerdict v);

struct BoundReport {
  std::string claim;
  double bound = 0.0;
  bool strict = false;  // claim is "< bound"
  double grid_max = 0.0;
  std::vector<std::string> names;
  std::vector<double> argmax;
  bool argmax_feasible = false;
  double slack = 0.0;          // 2.5·h·√k
  double lipschitz_max = 0.0;  // grid_max + slack
  double certified_max = 0.0;  // lipschitz_max, or the SOS bound when smaller
  double requested_step = 0.0;
  double step = 0.0;
  int intervals = 0;
  long long evaluations = 0;
  std::string method;  // "lipschitz-grid" or "sos-identity"
  BoundVerdict verdict = BoundVerdict::Inconclusive;

  bool holds() const { return verdict == BoundVerdict::Holds; }
  std::string text() const;
  std::string csv_row() const;
  static std::string csv_header();
};

inline constexpr double kAngleLipschitz = 2.5;

// Claim names: "f-cap", "case1", "case2", "case3", "d4".
std::vector<std::string> claim_names();
double default_step(std::string_view claim);
BoundReport run_claim(std::string_view claim, double step);

// f ≤ 1/2 on the square. A grid cannot certify an attained bound, so the
// verdict comes from the built-in "f-cap" SOS certificate; the grid still
// locates the maximizer.
BoundReport verify_f_cap(double step);
// 1: f(a,b)+f(b,c) < .244 s.t. a+b >= 0, b+c <= 0
// 2: f(1,b)+f(b,c) < .103 s.t. b+c <= 0
// 3: f(a,1) < .368
BoundReport claim_numerics(int which, double step);
// f(1,c)+f(c,-1) < 0.
BoundReport d4_subclaim(double step);

struct ChainMax {
  int dim = 0;
  Branch branch = Branch::ChainEven;
  double value = 0.0;
  std::vector<double> coeffs;
};

struct Num2Audit {
  BoundReport d4;
  std::vector<ChainMax> chains;
  bool all_below_quarter = true;
  bool non_decreasing = true;
  // Max of odd_aux_expression over c1, c_{d+1} = ±1, c_d ∈ [-1,1].
  double aux_max = 0.0;
  double aux_c1 = 0.0, aux_c_last = 0.0, aux_c_d = 0.0;
  // Max of ω_odd over the odd dims requested (NaN if none).
  double odd_direct_max = 0.0;

  std::string text() const;
};

Num2Audit lemma_num2_audit(const std::vector<int>& dims, double step, const OmegaSearch& search = {});

}  // namespace i3322
