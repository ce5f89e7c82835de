#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "i3322/bell.hpp"
#include "i3322/structure.hpp"

namespace i3322 {

struct SeesawOptions {
  int max_sweeps = 10000;
  double tol = 1e-10;  // stop when a full sweep gains less than this
};

struct TraceStep {
  int index = 0;  // 0-based update counter
  Operator op = Operator::A1;
  double value = 0.0;  // after the update
};

struct SeesawTrace {
  std::uint64_t seed = 0;
  double initial_value = 0.0;
  double final_value = 0.0;
  int sweeps = 0;
  bool converged = false;
  std::vector<TraceStep> steps;

  // Most negative single-step change (0 for an empty trace).
  double worst_step() const;
};

struct SeesawResult {
  Strategy strategy;
  SeesawTrace trace;
};

// Coefficient operator of `which` in the functional, e.g. B1+B2+B3-Id for A2.
SymMatrix effective_operator(const Strategy& s, Operator which);

// Projector onto the positive eigenspace of Λ E Λ (E itself for uniform
// weights), E the effective operator. Never lowers the value.
Projector best_response(const Strategy& s, Operator which);

// Sweeps A1..B3 until a sweep gains < tol. `seed` is only recorded.
SeesawResult seesaw(const Strategy& initial, const SeesawOptions& opt = {}, std::uint64_t seed = 0);

// Range of a d x rank Gaussian matrix, orthonormalized.
Projector random_projector(int dim, int rank, std::mt19937_64& rng);
// Six random projectors with ranks uniform in {1..d-1} ({0,1} for d = 1),
// uniform weights.
Strategy random_strategy(int dim, std::mt19937_64& rng);

// Generator for restart `index` of a run seeded with `seed`.
std::mt19937_64 restart_rng(std::uint64_t seed, int index);

struct RestartRun {
  int dim = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;      // final value per restart
  std::vector<SeesawTrace> traces;  // one per restart
  int best_index = 0;               // smallest index among the best values
  Strategy best = Strategy::zero(1);
};

RestartRun seesaw_restarts(int dim, int restarts, std::uint64_t seed, const SeesawOptions& opt = {});

// Top eigenvector of the weight form K with λ_i λ_j K_ij = functional; returns
// the strategy with weights |v| and Bob's operators conjugated by sign(v), or
// the input unchanged if that would lower the value.
Strategy schmidt_weight_update(const Strategy& s);

struct SchmidtRun {
  int dim = 0;
  std::uint64_t seed = 0;
  bool free_weights = true;
  std::vector<double> values;
  int best_index = 0;
  Strategy best = Strategy::zero(1);
  double best_value = 0.0;
  double entropy = 0.0;  // bits, of the best state
  double worst_step = 0.0;
};

// Cyclic normal form with every coefficient √3/2 (value 1/4); odd dims get an
// extra zero block, worth (d-1)/(4d) at uniform weights.
Strategy cyclic_quarter(int dim);

// Projector sweeps alternating with weight updates (free) or plain seesaw
// (uniform), from the same random operators per restart. In free mode restart
// 0 starts from cyclic_quarter instead, so the best value is never below the
// uniform optimum (for odd d the weights can drop the zero block).
SchmidtRun schmidt_seesaw(int dim, int restarts, std::uint64_t seed, bool free_weights,
                          const SeesawOptions& opt = {});

struct OmegaSearch {
  double step = 0.05;          // grid spacing on each free coefficient
  int max_grid_points = 20000;  // over all boundary choices; the step coarsens to fit
  int refine_starts = 4;        // best distinct grid points refined
  int refine_sweeps = 400;
  std::uint64_t seed = 0;       // recorded only: the search is deterministic
};

struct OmegaResult {
  NormalFormSpec spec;
  double value = 0.0;
  long grid_points = 0;
  double grid_step = 0.0;  // spacing actually used
};

// Grid over the free coefficients (chain boundaries enumerated over ±1), then
// coordinate-wise golden-section refinement. Values are direct evaluations.
OmegaResult optimize_omega(Branch branch, int dim, const OmegaSearch& search = {});

}  // namespace i3322
