// One line per acceptance criterion. Exit status is nonzero when a blocking
// criterion fails; criterion 10 is exploratory and never blocks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>

#include "i3322/ascent.hpp"
#include "i3322/bounds.hpp"
#include "i3322/soscheck.hpp"
#include "i3322/structure.hpp"

using namespace i3322;

namespace {

// Pinned tolerances.
constexpr double kTolEpr = 1e-12;
constexpr double kTolUniform = 1e-6;
constexpr double kTolClosed = 1e-9;
constexpr double kTolCyclic = 1e-9;
constexpr double kTolChain2 = 1e-6;
constexpr double kCase1Grid = 0.2430, kCase1GridTol = 2e-3;
constexpr double kCase2Grid = 0.1019, kCase2GridTol = 2e-3;
constexpr double kCase3Grid = 0.36716, kCase3GridTol = 5e-4;
constexpr double kPsdLo = 3e-4, kPsdHi = 6e-4;
constexpr double kResidual = 1e-10;
constexpr double kRecon = 1e-10;
constexpr double kTracePq = 1e-9;
constexpr double kMonotone = -1e-12;
constexpr double kExploratoryFloor = 0.25 - 1e-9;

int failures = 0;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void line(int id, bool pass, const std::string& detail, bool blocking = true) {
  const char* tag = pass ? "PASS" : (blocking ? "FAIL" : "MISS");
  std::printf("[%s] criterion %2d%s: %s\n", tag, id, blocking ? "" : " (exploratory)", detail.c_str());
  std::fflush(stdout);
  if (!pass && blocking) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void criterion1() {
  const auto t0 = Clock::now();
  const ClassicalResult r = classical_max();
  const bool pass = r.max == 0.0 && r.evaluated == 64;
  line(1, pass,
       fmt("classical max = %.17g over %d assignments, %zu maximizers (%.3f ms)", r.max, r.evaluated,
           r.maximizers.size(), 1e3 * seconds_since(t0)));
}

void criterion2() {
  const Strategy s = build_normal_form(NormalFormSpec::make(Branch::Cyclic, {std::sqrt(3.0) / 2.0}));
  const double v = i3322_value(s).value;
  line(2, std::abs(v - 0.25) <= kTolEpr, fmt("cyclic d=2 value %.15f, |v - 1/4| = %.2e (tol %.0e)", v, std::abs(v - 0.25), kTolEpr));
}

// Criteria 3 and 9 share the runs.
void criteria3_9() {
  const auto t0 = Clock::now();
  const int dims[] = {2, 3, 4, 5, 6, 8};
  double overall = -1e9, worst_step = 0.0;
  int worst_dim = 0;
  std::string per_dim;
  long steps = 0;
  for (int d : dims) {
    const RestartRun run = seesaw_restarts(d, 50, 1000 + d);
    const double best = *std::max_element(run.values.begin(), run.values.end());
    overall = std::max(overall, best);
    for (const SeesawTrace& t : run.traces) {
      steps += static_cast<long>(t.steps.size());
      double prev = t.initial_value;
      for (const TraceStep& st : t.steps) {
        if (st.value - prev < worst_step) worst_step = st.value - prev, worst_dim = d;
        prev = st.value;
      }
    }
    per_dim += fmt(" d%d=%.9f", d, best);
  }
  line(3, overall <= 0.25 + kTolUniform,
       fmt("max over 50 restarts per dim:%s; overall %.12f <= 0.25 + %.0e (%.1f s)", per_dim.c_str(), overall,
           kTolUniform, seconds_since(t0)));
  line(9, worst_step >= kMonotone,
       fmt("worst single-step change %.3e over %ld steps (d=%d), threshold %.0e", worst_step, steps, worst_dim, kMonotone));
}

void criterion4() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> half(1, 10);
  const Branch branches[] = {Branch::ChainEven, Branch::ChainOdd, Branch::Cyclic};
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Branch b = branches[trial % 3];
    const int d = b == Branch::ChainOdd ? 2 * half(rng) - 1 : 2 * half(rng);
    std::vector<double> c(NormalFormSpec::num_coeffs_for(b, d));
    for (double& x : c) x = u(rng);
    if (b != Branch::Cyclic) {
      c.front() = rng() & 1 ? 1.0 : -1.0;
      c.back() = rng() & 1 ? 1.0 : -1.0;
    }
    const NormalFormSpec spec = NormalFormSpec::make(b, c);
    worst = std::max(worst, std::abs(omega_closed(spec) - i3322_value(build_normal_form(spec)).value));
  }
  line(4, worst <= kTolClosed,
       fmt("max |closed - direct| = %.2e over 1000 random normal forms, d <= 20 (tol %.0e, %.2f s)", worst, kTolClosed, seconds_since(t0)));
}

void criterion5() {
  const auto t0 = Clock::now();
  bool pass = true;
  std::string cyc, chain;
  for (int d : {2, 4, 6, 8}) {
    const double vc = optimize_omega(Branch::Cyclic, d).value;
    const double ve = optimize_omega(Branch::ChainEven, d).value;
    pass &= std::abs(vc - 0.25) <= kTolCyclic && ve < 0.25;
    if (d == 2) pass &= std::abs(ve - (std::sqrt(5.0) / 2.0 - 1.0)) <= kTolChain2;
    cyc += fmt(" %.12f", vc);
    chain += fmt(" %.9f", ve);
  }
  line(5, pass, fmt("cyclic d=2,4,6,8:%s; chain:%s (%.1f s)", cyc.c_str(), chain.c_str(), seconds_since(t0)));
}

void criterion6() {
  const auto t0 = Clock::now();
  const BoundReport f = verify_f_cap(default_step("f-cap"));
  const BoundReport c1 = claim_numerics(1, default_step("case1"));
  const BoundReport c2 = claim_numerics(2, default_step("case2"));
  const BoundReport c3 = claim_numerics(3, default_step("case3"));
  const BoundReport d4 = d4_subclaim(default_step("d4"));
  const bool pass = f.holds() && c1.holds() && c2.holds() && c3.holds() && d4.holds() &&
                    std::abs(c1.grid_max - kCase1Grid) <= kCase1GridTol &&
                    std::abs(c2.grid_max - kCase2Grid) <= kCase2GridTol &&
                    std::abs(c3.grid_max - kCase3Grid) <= kCase3GridTol;
  auto brief = [](const BoundReport& r) {
    return fmt("%s grid %.6f cert %.6f %s", r.claim.c_str(), r.grid_max, r.certified_max,
               std::string(to_string(r.verdict)).c_str());
  };
  line(6, pass,
       brief(f) + "; " + brief(c1) + "; " + brief(c2) + "; " + brief(c3) + "; " + brief(d4) +
           fmt(" (%.1f s)", seconds_since(t0)));
}

void criterion7() {
  const auto t0 = Clock::now();
  const Certificate c = builtin_certificate("i3322-case3");
  const Verdict v = verify(c, 10000, 0);
  const Verdict low = verify(c.with_bound(0.36), 1000, 0);
  const bool band = v.psd_margin >= kPsdLo && v.psd_margin <= kPsdHi;
  const bool pass = v.accepted && band && v.feasible_samples && v.identity_residual <= kResidual && !low.accepted;
  line(7, pass,
       fmt("accepted=%d, min eigenvalue %.4e (band [%.0e, %.0e]: %s), arrow Schur %.4e, residual %.1e over %d "
           "feasible samples, t=0.36 %s (margin %.3e) (%.3f s)",
           v.accepted, v.psd_margin, kPsdLo, kPsdHi, band ? "in" : "out", v.schur_margin.value_or(NAN),
           v.identity_residual, v.samples, low.accepted ? "accepted" : "rejected", low.psd_margin, seconds_since(t0)));
}

void criterion8() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(8);
  double recon = 0.0, trace = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + trial % 10;
    std::uniform_int_distribution<int> r(0, d);
    const Projector p = random_projector(d, r(rng), rng);
    const Projector q = random_projector(d, r(rng), rng);
    const BlockDecomposition dec = cs_decompose(p, q);
    const Matrix& u = dec.basis;
    const double e = std::max((u.transpose() * p.matrix() * u - dec.model_p()).norm(),
                              (u.transpose() * q.matrix() * u - dec.model_q()).norm());
    recon = std::max(recon, e / d);
    trace = std::max(trace, std::abs((p.matrix() * q.matrix()).trace() - dec.trace_pq()));
  }
  int align_bad = 0;
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 600; ++trial) {
    const int d = 1 + trial % 6;
    std::vector<double> a(d), b(d);
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1e300;
    do best = std::max(best, matched_inner_product(a, b, perm));
    while (std::next_permutation(perm.begin(), perm.end()));
    if (std::abs(matched_inner_product(a, b, align_bases(a, b)) - best) > 1e-12 * (1 + std::abs(best))) ++align_bad;
  }
  const bool pass = recon <= kRecon && trace <= kTracePq && align_bad == 0;
  line(8, pass,
       fmt("1000 pairs: reconstruction/dim %.2e (tol %.0e), |Tr(PQ) - model| %.2e (tol %.0e); align_bases vs "
           "brute force: %d mismatches in 600 (%.2f s)",
           recon, kRecon, trace, kTracePq, align_bad, seconds_since(t0)));
}

void criterion10() {
  const auto t0 = Clock::now();
  bool pass = true;
  std::string detail;
  for (int d : {8, 12, 16}) {
    const SchmidtRun r = schmidt_seesaw(d, 50, 10 + d, true);
    pass &= r.best_value >= kExploratoryFloor;
    detail += fmt(" d=%d best %.9f (%s 1/4) entropy %.4f bits;", d, r.best_value,
                  r.best_value > 0.25 + 1e-9 ? "above" : "at", r.entropy);
  }
  line(10, pass, "free weights, 50 restarts:" + detail + fmt(" (%.1f s)", seconds_since(t0)), false);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criteria3_9();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion10();
  std::printf("%d blocking criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
