#include "i3322/ascent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace i3322 {

namespace {

// Coefficient of <A_j B_k> in the functional, and of the marginals.
constexpr double kCorr[3][3] = {{1, 1, -1}, {1, 1, 1}, {-1, 1, 0}};
constexpr double kMargA[3] = {0, -1, 0};
constexpr double kMargB[3] = {-1, -2, 0};

double value_of(const Strategy& s) { return i3322_value(s).value; }

void sweep(Strategy& s, double& value, SeesawTrace& trace) {
  for (Operator op : kSweepOrder) {
    s = s.with(op, best_response(s, op));
    value = value_of(s);
    trace.steps.push_back({static_cast<int>(trace.steps.size()), op, value});
  }
}

}  // namespace

double SeesawTrace::worst_step() const {
  double worst = 0.0;
  double prev = initial_value;
  for (const TraceStep& st : steps) {
    worst = std::min(worst, st.value - prev);
    prev = st.value;
  }
  return worst;
}

SymMatrix effective_operator(const Strategy& s, Operator which) {
  const int k = static_cast<int>(which);
  const int d = s.dim();
  Matrix e = Matrix::Zero(d, d);
  if (k < 3) {
    for (int j = 0; j < 3; ++j) e += kCorr[k][j] * s.bob()[j].matrix();
    e.diagonal().array() += kMargA[k];
  } else {
    for (int j = 0; j < 3; ++j) e += kCorr[j][k - 3] * s.alice()[j].matrix();
    e.diagonal().array() += kMargB[k - 3];
  }
  return SymMatrix::trusted(std::move(e));
}

Projector best_response(const Strategy& s, Operator which) {
  const SymMatrix e = effective_operator(s, which);
  // Tr(Λ X Λ E) = Tr(X · ΛEΛ). Uniform weights only rescale, so use E as is
  // and keep the kernel threshold independent of d.
  return positive_eigenspace_projector(s.uniform() ? e : e.scaled(s.schmidt()));
}

SeesawResult seesaw(const Strategy& initial, const SeesawOptions& opt, std::uint64_t seed) {
  SeesawResult r{initial, {}};
  r.trace.seed = seed;
  double value = value_of(initial);
  r.trace.initial_value = value;
  for (int k = 0; k < opt.max_sweeps; ++k) {
    const double before = value;
    sweep(r.strategy, value, r.trace);
    ++r.trace.sweeps;
    if (value - before < opt.tol) {
      r.trace.converged = true;
      break;
    }
  }
  r.trace.final_value = value;
  return r;
}

Projector random_projector(int dim, int rank, std::mt19937_64& rng) {
  if (rank <= 0) return Projector::zero(dim);
  if (rank >= dim) return Projector::identity(dim);
  std::normal_distribution<double> gauss;
  Matrix g(dim, rank);
  for (int j = 0; j < rank; ++j) {
    for (int i = 0; i < dim; ++i) g(i, j) = gauss(rng);
  }
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ() * Matrix::Identity(dim, rank);
  Matrix p = q * q.transpose();
  return Projector::trusted(SymMatrix::trusted(0.5 * (p + p.transpose())));
}

Strategy random_strategy(int dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank_dist(dim == 1 ? 0 : 1, dim == 1 ? 1 : dim - 1);
  Strategy::Triple alice, bob;
  for (auto& p : alice) p = random_projector(dim, rank_dist(rng), rng);
  for (auto& p : bob) p = random_projector(dim, rank_dist(rng), rng);
  return Strategy(std::move(alice), std::move(bob));
}

std::mt19937_64 restart_rng(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

RestartRun seesaw_restarts(int dim, int restarts, std::uint64_t seed, const SeesawOptions& opt) {
  if (dim < 1) throw ValidationError("dim", "must be >= 1");
  if (restarts < 1) throw ValidationError("restarts", "must be >= 1");
  RestartRun run;
  run.dim = dim;
  run.seed = seed;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < restarts; ++i) {
    auto rng = restart_rng(seed, i);
    SeesawResult r = seesaw(random_strategy(dim, rng), opt, seed);
    run.values.push_back(r.trace.final_value);
    if (r.trace.final_value > best) {
      best = r.trace.final_value;
      run.best_index = i;
      run.best = r.strategy;
    }
    run.traces.push_back(std::move(r.trace));
  }
  return run;
}

Strategy schmidt_weight_update(const Strategy& s) {
  const int d = s.dim();
  Matrix k = Matrix::Zero(d, d);
  Vector diag = Vector::Zero(d);
  for (int j = 0; j < 3; ++j) {
    for (int l = 0; l < 3; ++l) {
      if (kCorr[j][l] != 0) {
        k += kCorr[j][l] * s.alice()[j].matrix().cwiseProduct(s.bob()[l].matrix());
      }
    }
    diag += kMargA[j] * s.alice()[j].matrix().diagonal() + kMargB[j] * s.bob()[j].matrix().diagonal();
  }
  k.diagonal() += diag;
  const Spectrum sp = eig_sym(SymMatrix::trusted(0.5 * (k + k.transpose())));
  const Vector v = sp.vectors.col(0);
  Vector signs(d);
  for (int i = 0; i < d; ++i) signs(i) = v(i) < 0 ? -1.0 : 1.0;
  const Vector weights = v.cwiseAbs().normalized();

  // λ_i λ_j K_ij is unchanged by |v| once Bob absorbs the signs.
  Strategy next = s.with_bob_signs(signs).with_schmidt(weights);
  if (value_of(next) < value_of(s)) return s;
  return next;
}

Strategy cyclic_quarter(int dim) {
  const int even = dim - dim % 2;
  Strategy s = build_normal_form(
      NormalFormSpec::make(Branch::Cyclic, std::vector<double>(even / 2, std::sqrt(3.0) / 2)));
  return dim % 2 ? direct_sum(s, Strategy::zero(1)) : s;
}

SchmidtRun schmidt_seesaw(int dim, int restarts, std::uint64_t seed, bool free_weights,
                          const SeesawOptions& opt) {
  if (dim < 1) throw ValidationError("dim", "must be >= 1");
  if (restarts < 1) throw ValidationError("restarts", "must be >= 1");
  SchmidtRun run;
  run.dim = dim;
  run.seed = seed;
  run.free_weights = free_weights;
  run.best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < restarts; ++i) {
    auto rng = restart_rng(seed, i);
    Strategy s = random_strategy(dim, rng);
    if (free_weights && i == 0 && dim >= 2) s = cyclic_quarter(dim);
    SeesawTrace trace;
    double value = value_of(s);
    trace.initial_value = value;
    for (int k = 0; k < opt.max_sweeps; ++k) {
      const double before = value;
      sweep(s, value, trace);
      if (free_weights) {
        s = schmidt_weight_update(s);
        const double after = value_of(s);
        trace.steps.push_back({static_cast<int>(trace.steps.size()), Operator::A1, after});
        value = after;
      }
      if (value - before < opt.tol) break;
    }
    run.worst_step = std::min(run.worst_step, trace.worst_step());
    run.values.push_back(value);
    if (value > run.best_value) {
      run.best_value = value;
      run.best_index = i;
      run.best = s;
    }
  }
  run.entropy = entanglement_entropy(run.best.schmidt());
  return run;
}

namespace {

struct Candidate {
  double value;
  std::vector<double> coeffs;
};

// Higher value first; ties go to the lexicographically larger vector.
bool better(const Candidate& a, const Candidate& b) {
  if (a.value > b.value + 1e-12) return true;
  if (b.value > a.value + 1e-12) return false;
  return a.coeffs > b.coeffs;
}

double evaluate(Branch branch, const std::vector<double>& coeffs) {
  return value_of(build_normal_form(NormalFormSpec::make(branch, coeffs)));
}

// Golden-section maximization of g on [lo, hi].
template <class G>
std::pair<double, double> golden_max(G&& g, double lo, double hi, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = g(x1), f2 = g(x2);
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = g(x2);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

OmegaResult optimize_omega(Branch branch, int dim, const OmegaSearch& search) {
  if (!(search.step > 0.0)) throw ValidationError("step", "must be positive");
  const int n = static_cast<int>(NormalFormSpec::num_coeffs_for(branch, dim));
  const bool chain = branch != Branch::Cyclic;
  std::vector<int> free_idx;
  for (int i = chain ? 1 : 0; i < (chain ? n - 1 : n); ++i) free_idx.push_back(i);
  const int k = static_cast<int>(free_idx.size());
  const int combos = chain ? 4 : 1;

  int g = static_cast<int>(std::floor(2.0 / search.step + 1e-9)) + 1;
  if (k > 0) {
    const double budget = std::max(1.0, static_cast<double>(search.max_grid_points) / combos);
    if (std::pow(static_cast<double>(g), k) > budget) {
      g = std::max(2, static_cast<int>(std::floor(std::pow(budget, 1.0 / k) + 1e-9)));
    }
  } else {
    g = 1;
  }
  const double spacing = g > 1 ? 2.0 / (g - 1) : 2.0;

  OmegaResult res;
  res.grid_step = spacing;
  std::vector<Candidate> pool;
  for (int combo = 0; combo < combos; ++combo) {
    std::vector<double> c(n, 0.0);
    if (chain) {
      c.front() = (combo & 2) ? 1.0 : -1.0;
      c.back() = (combo & 1) ? 1.0 : -1.0;
    }
    std::vector<int> idx(k, 0);
    while (true) {
      for (int j = 0; j < k; ++j) c[free_idx[j]] = g > 1 ? -1.0 + spacing * idx[j] : 0.0;
      pool.push_back({evaluate(branch, c), c});
      ++res.grid_points;
      int j = k - 1;
      while (j >= 0 && ++idx[j] == g) idx[j--] = 0;
      if (j < 0) break;
    }
  }
  std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    return a.value != b.value ? a.value > b.value : a.coeffs < b.coeffs;
  });
  if (static_cast<int>(pool.size()) > search.refine_starts) pool.resize(std::max(1, search.refine_starts));

  Candidate best = pool.front();
  for (Candidate cand : pool) {
    for (int sweep_i = 0; sweep_i < search.refine_sweeps && k > 0; ++sweep_i) {
      const double before = cand.value;
      for (int j : free_idx) {
        std::vector<double> trial = cand.coeffs;
        auto g1 = [&](double x) {
          trial[j] = x;
          return evaluate(branch, trial);
        };
        const double x0 = cand.coeffs[j];
        auto [x, v] = golden_max(g1, std::max(-1.0, x0 - spacing), std::min(1.0, x0 + spacing), 1e-10);
        if (v > cand.value) {
          cand.coeffs[j] = x;
          cand.value = v;
        }
      }
      if (cand.value - before < 1e-15) break;
    }
    if (better(cand, best)) best = cand;
  }
  for (double& c : best.coeffs) c += 0.0;  // no -0 in reports
  res.spec = NormalFormSpec::make(branch, best.coeffs);
  res.value = evaluate(branch, best.coeffs);
  return res;
}

}  // namespace i3322
