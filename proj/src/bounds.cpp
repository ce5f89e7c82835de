#include "i3322/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "i3322/io_format.hpp"
#include "i3322/soscheck.hpp"

namespace i3322 {

namespace {

// Round-off slightly outside [-1,1] is clamped; anything else is an error.
double unit(double x, const char* name) {
  if (!(x >= -1.0 - 1e-12 && x <= 1.0 + 1e-12)) throw ValidationError(name, "outside [-1, 1]");
  return std::clamp(x, -1.0, 1.0);
}

// |∂/∂θ f(cos θ, y)| <= √5/2 by Cauchy-Schwarz on (sin θ, cos θ).
constexpr double kTermLipschitz = 1.1180339887498949;

constexpr int kMaxVars = 6;

struct Box {
  std::array<int, kMaxVars> lo{}, hi{};
  double ub = 0.0;
};

}  // namespace

double f_value(double x, double y) {
  x = unit(x, "x");
  y = unit(y, "y");
  return std::sqrt((x + y) * (x + y) + 1) + 0.5 * std::sqrt(1 - x * x) + 0.5 * std::sqrt(1 - y * y) - 2;
}

double odd_aux_expression(double c1, double c_last, double c_d) {
  return c_d * c_last + 0.5 * (c1 - c_last) - 1 + 0.5 * std::sqrt(std::max(0.0, 1 - c_d * c_d));
}

double omega_closed(const NormalFormSpec& spec) {
  validate_spec(spec);
  const auto& c = spec.coeffs;
  const int d = spec.dim;
  const int n = static_cast<int>(c.size());
  double sum = 0.0;
  switch (spec.branch) {
    case Branch::ChainEven:
      for (int i = 0; i + 1 < n; ++i) sum += f_value(c[i], c[i + 1]);
      return sum / d + (c.front() - c.back()) / (2.0 * d);
    case Branch::ChainOdd: {
      const int m = (d - 1) / 2;
      for (int i = 0; i < m; ++i) sum += f_value(c[i], c[i + 1]);
      return (sum + odd_aux_expression(c.front(), c[m + 1], c[m])) / d;
    }
    case Branch::Cyclic:
      for (int i = 0; i < n; ++i) sum += f_value(c[i], c[(i + 1) % n]);
      return sum / d;
    default:
      throw ValidationError("branch", std::string(to_string(spec.branch)) + " has no closed form");
  }
}

GridMax grid_maximum(const GridProblem& p, double step) {
  const int k = static_cast<int>(p.lipschitz.size());
  if (k < 1 || k > kMaxVars) throw ValidationError("grid", "1 to 6 variables supported");
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("step", "must be positive");
  const double nd = std::ceil(std::numbers::pi / step - 1e-9);
  if (nd > 1e8) throw ValidationError("step", "too small");
  const int n = static_cast<int>(std::max(1.0, nd));
  const double h = std::numbers::pi / n;

  GridMax out;
  out.intervals = n;
  out.step = h;
  out.value = -std::numeric_limits<double>::infinity();

  std::vector<double> margin;
  for (const auto& c : p.constraints) {
    double s = 0.0;
    for (double a : c.a) s += std::abs(a);
    margin.push_back(0.5 * h * s);
  }

  std::vector<double> x(k);
  auto eval_at = [&](const auto& theta) {
    for (int i = 0; i < k; ++i) x[i] = std::cos(theta[i]);
    ++out.evaluations;
    return p.objective(x);
  };
  // Largest constraint value over the box; cos decreases on [0, π].
  auto box_feasible = [&](const Box& b) {
    for (std::size_t j = 0; j < p.constraints.size(); ++j) {
      double best = p.constraints[j].b;
      for (int i = 0; i < k; ++i) {
        const double a = p.constraints[j].a[i];
        best += a * std::cos((a > 0 ? b.lo[i] : b.hi[i]) * h);
      }
      if (best < -margin[j]) return false;
    }
    return true;
  };
  std::array<double, kMaxVars> theta{};
  auto upper = [&](Box& b) {
    double slack = 0.0;
    for (int i = 0; i < k; ++i) {
      theta[i] = 0.5 * (b.lo[i] + b.hi[i]) * h;
      slack += p.lipschitz[i] * 0.5 * (b.hi[i] - b.lo[i]) * h;
    }
    b.ub = eval_at(theta) + slack;
  };

  std::vector<Box> stack;
  Box root;
  for (int i = 0; i < k; ++i) root.hi[i] = n;
  if (box_feasible(root)) {
    upper(root);
    stack.push_back(root);
  }
  std::vector<int> best_idx;
  while (!stack.empty()) {
    Box b = stack.back();
    stack.pop_back();
    if (b.ub < out.value) continue;
    int split = -1;
    for (int i = 0; i < k; ++i) {
      if (b.hi[i] > b.lo[i] && (split < 0 || b.hi[i] - b.lo[i] > b.hi[split] - b.lo[split])) split = i;
    }
    if (split < 0) {
      // A single grid point: the bound was its exact value.
      const double v = b.ub;
      std::vector<int> idx(b.lo.begin(), b.lo.begin() + k);
      if (v > out.value || (v == out.value && idx < best_idx)) {
        out.value = v;
        best_idx = idx;
      }
      continue;
    }
    const int mid = (b.lo[split] + b.hi[split]) / 2;
    Box left = b, right = b;
    left.hi[split] = mid;
    right.lo[split] = mid + 1;
    std::array<Box*, 2> kids{&left, &right};
    std::array<bool, 2> keep{};
    for (int c = 0; c < 2; ++c) {
      keep[c] = box_feasible(*kids[c]);
      if (keep[c]) upper(*kids[c]);
    }
    // Push the weaker child first so the stronger one is explored next.
    if (keep[0] && keep[1] && left.ub > right.ub) {
      stack.push_back(right);
      stack.push_back(left);
    } else {
      if (keep[0]) stack.push_back(left);
      if (keep[1]) stack.push_back(right);
    }
  }
  if (best_idx.empty()) throw ValidationError("grid", "no grid point satisfies the constraints");
  out.argmax.resize(k);
  for (int i = 0; i < k; ++i) out.argmax[i] = std::cos(best_idx[i] * h);
  out.argmax_feasible = true;
  for (const auto& c : p.constraints) {
    double v = c.b;
    for (int i = 0; i < k; ++i) v += c.a[i] * out.argmax[i];
    if (v < 0.0) out.argmax_feasible = false;
  }
  return out;
}

std::string_view to_string(BoundVerdict v) {
  switch (v) {
    case BoundVerdict::Holds: return "holds";
    case BoundVerdict::Refuted: return "refuted";
    default: return "inconclusive";
  }
}

namespace {

BoundReport grid_report(std::string claim, double bound, bool strict, const GridProblem& p, double step) {
  const GridMax g = grid_maximum(p, step);
  BoundReport r;
  r.claim = std::move(claim);
  r.bound = bound;
  r.strict = strict;
  r.grid_max = g.value;
  r.names = p.names;
  r.argmax = g.argmax;
  r.argmax_feasible = g.argmax_feasible;
  r.slack = kAngleLipschitz * g.step * std::sqrt(static_cast<double>(p.lipschitz.size()));
  r.lipschitz_max = r.grid_max + r.slack;
  r.certified_max = r.lipschitz_max;
  r.requested_step = step;
  r.step = g.step;
  r.intervals = g.intervals;
  r.evaluations = g.evaluations;
  r.method = "lipschitz-grid";
  const bool below = strict ? r.certified_max < bound : r.certified_max <= bound;
  const bool above = strict ? r.grid_max >= bound : r.grid_max > bound;
  r.verdict = below ? BoundVerdict::Holds
                    : (above && g.argmax_feasible ? BoundVerdict::Refuted : BoundVerdict::Inconclusive);
  return r;
}

}  // namespace

BoundReport verify_f_cap(double step) {
  GridProblem p{{"x", "y"},
                [](const std::vector<double>& x) { return f_value(x[0], x[1]); },
                {kTermLipschitz, kTermLipschitz},
                {}};
  BoundReport r = grid_report("f-cap", 0.5, false, p, step);
  const Verdict sos = verify(builtin_certificate("f-cap"), 10000, 0);
  if (sos.accepted && sos.min_slack && *sos.min_slack >= -1e-12) {
    r.method = "sos-identity";
    r.certified_max = std::min(r.lipschitz_max, 0.5);
    r.verdict = r.certified_max <= r.bound ? BoundVerdict::Holds : r.verdict;
  }
  return r;
}

BoundReport claim_numerics(int which, double step) {
  switch (which) {
    case 1: {
      GridProblem p{{"a", "b", "c"},
                    [](const std::vector<double>& x) { return f_value(x[0], x[1]) + f_value(x[1], x[2]); },
                    {kTermLipschitz, 2 * kTermLipschitz, kTermLipschitz},
                    {{{1, 1, 0}, 0}, {{0, -1, -1}, 0}}};
      return grid_report("case1", 0.244, true, p, step);
    }
    case 2: {
      GridProblem p{{"b", "c"},
                    [](const std::vector<double>& x) { return f_value(1, x[0]) + f_value(x[0], x[1]); },
                    {2 * kTermLipschitz, kTermLipschitz},
                    {{{-1, -1}, 0}}};
      return grid_report("case2", 0.103, true, p, step);
    }
    case 3: {
      GridProblem p{{"a"}, [](const std::vector<double>& x) { return f_value(x[0], 1); }, {kTermLipschitz}, {}};
      return grid_report("case3", 0.368, true, p, step);
    }
    default:
      throw ValidationError("case", "must be 1, 2 or 3");
  }
}

BoundReport d4_subclaim(double step) {
  GridProblem p{{"c3"},
                [](const std::vector<double>& x) { return f_value(1, x[0]) + f_value(x[0], -1); },
                {2 * kTermLipschitz},
                {}};
  return grid_report("d4", 0.0, true, p, step);
}

std::vector<std::string> claim_names() { return {"f-cap", "case1", "case2", "case3", "d4"}; }

double default_step(std::string_view claim) {
  if (claim == "case1") return 5e-5;
  if (claim == "case2" || claim == "case3") return 1e-4;
  if (claim == "f-cap" || claim == "d4") return 1e-3;
  throw ValidationError("claim", "unknown claim \"" + std::string(claim) + "\"");
}

BoundReport run_claim(std::string_view claim, double step) {
  if (claim == "f-cap") return verify_f_cap(step);
  if (claim == "case1") return claim_numerics(1, step);
  if (claim == "case2") return claim_numerics(2, step);
  if (claim == "case3") return claim_numerics(3, step);
  if (claim == "d4") return d4_subclaim(step);
  throw ValidationError("claim", "unknown claim \"" + std::string(claim) + "\"");
}

std::string BoundReport::text() const {
  std::ostringstream os;
  os << "claim: " << claim << (strict ? " < " : " <= ") << format_fixed12(bound) << "\n";
  os << "grid max: " << format_fixed12(grid_max) << " at";
  for (std::size_t i = 0; i < argmax.size(); ++i) os << " " << names[i] << "=" << format_fixed12(argmax[i]);
  os << (argmax_feasible ? "" : " (inside the boundary margin)") << "\n";
  os << "step: " << format_g17(step) << " (" << intervals << " intervals per angle, requested "
     << format_g17(requested_step) << ")\n";
  os << "lipschitz slack: " << format_fixed12(slack) << "\n";
  os << "grid + slack: " << format_fixed12(lipschitz_max) << "\n";
  os << "certified max: " << format_fixed12(certified_max) << " (" << method << ")\n";
  os << "evaluations: " << evaluations << "\n";
  os << "verdict: " << to_string(verdict) << "\n";
  return os.str();
}

std::string BoundReport::csv_header() { return "claim,bound,grid_max,slack,certified_max,verdict,step,argmax"; }

std::string BoundReport::csv_row() const {
  std::ostringstream os;
  os << claim << "," << format_fixed12(bound) << "," << format_fixed12(grid_max) << "," << format_fixed12(slack) << ","
     << format_fixed12(certified_max) << "," << to_string(verdict) << "," << format_g17(step) << ",";
  for (std::size_t i = 0; i < argmax.size(); ++i) os << (i ? ";" : "") << format_fixed12(argmax[i]);
  return os.str();
}

Num2Audit lemma_num2_audit(const std::vector<int>& dims, double step, const OmegaSearch& search) {
  Num2Audit a;
  a.d4 = d4_subclaim(step);
  std::vector<int> sorted = dims;
  std::sort(sorted.begin(), sorted.end());
  a.odd_direct_max = std::numeric_limits<double>::quiet_NaN();
  for (int d : sorted) {
    const Branch b = d % 2 ? Branch::ChainOdd : Branch::ChainEven;
    const OmegaResult r = optimize_omega(b, d, search);
    a.chains.push_back({d, b, r.value, r.spec.coeffs});
    if (r.value > 0.25) a.all_below_quarter = false;
    if (a.chains.size() > 1 && r.value < a.chains[a.chains.size() - 2].value - 1e-12) a.non_decreasing = false;
    if (d % 2) a.odd_direct_max = std::isnan(a.odd_direct_max) ? r.value : std::max(a.odd_direct_max, r.value);
  }

  // The expression is concave in c_d, so golden section finds the maximum.
  a.aux_max = -std::numeric_limits<double>::infinity();
  for (double c1 : {-1.0, 1.0}) {
    for (double cl : {-1.0, 1.0}) {
      double lo = -1.0, hi = 1.0;
      const double r = 0.5 * (std::sqrt(5.0) - 1.0);
      while (hi - lo > 1e-12) {
        const double m1 = hi - r * (hi - lo), m2 = lo + r * (hi - lo);
        if (odd_aux_expression(c1, cl, m1) >= odd_aux_expression(c1, cl, m2)) {
          hi = m2;
        } else {
          lo = m1;
        }
      }
      const double cd = 0.5 * (lo + hi);
      const double v = odd_aux_expression(c1, cl, cd);
      if (v > a.aux_max) {
        a.aux_max = v;
        a.aux_c1 = c1;
        a.aux_c_last = cl;
        a.aux_c_d = cd;
      }
    }
  }
  return a;
}

std::string Num2Audit::text() const {
  std::ostringstream os;
  os << "d=4 sub-claim f(1,c3)+f(c3,-1) < 0: " << to_string(d4.verdict) << ", grid max "
     << format_fixed12(d4.grid_max) << " at c3=" << format_fixed12(d4.argmax.at(0)) << ", certified "
     << format_fixed12(d4.certified_max) << "\n";
  os << "chain maxima:\n";
  for (const auto& c : chains) {
    os << "  d=" << c.dim << " " << to_string(c.branch) << " " << format_fixed12(c.value) << " coeffs";
    for (double x : c.coeffs) os << " " << format_fixed12(x);
    os << "\n";
  }
  os << "all <= 0.25: " << (all_below_quarter ? "yes" : "no") << "\n";
  os << "non-decreasing in d: " << (non_decreasing ? "yes" : "no") << "\n";
  os << "odd auxiliary expression max: " << format_fixed12(aux_max) << " at (c1, c_{d+1}, c_d) = ("
     << format_fixed12(aux_c1) << ", " << format_fixed12(aux_c_last) << ", " << format_fixed12(aux_c_d) << ")\n";
  os << "odd chain direct max: " << (std::isnan(odd_direct_max) ? std::string("n/a") : format_fixed12(odd_direct_max))
     << "\n";
  return os.str();
}

}  // namespace i3322
