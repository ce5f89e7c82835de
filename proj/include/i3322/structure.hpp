#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "i3322/bell.hpp"
#include "i3322/symmat.hpp"

namespace i3322 {

// |c| at or beyond this is treated as a degenerate angle and split into two
// 1-dim blocks.
inline constexpr double kDegenerateCosine = 1.0 - 1e-9;

// 1-dim block: basis column `position`, P and Q act as labels (0 or 1).
struct OneBlock {
  int position = 0;
  int label_p = 0;
  int label_q = 0;
};

// 2-dim block on columns (first, second):
//   P = ½[[1-c, -s], [-s, 1+c]],  Q = ½[[1-c, s], [s, 1+c]],  s = √(1-c²).
struct TwoBlock {
  int first = 0;
  int second = 0;
  double c = 0.0;
  double s = 1.0;
};

using Block = std::variant<OneBlock, TwoBlock>;

struct BlockDecomposition {
  Matrix basis;  // orthogonal, columns are the joint basis
  std::vector<Block> blocks;

  int dim() const { return static_cast<int>(basis.rows()); }
  // basisᵀ·P·basis (resp. Q) assembled from the declared blocks.
  Matrix model_p() const;
  Matrix model_q() const;
  // Σ c² over 2-dim blocks plus the number of (1,1) blocks; equals Tr(PQ).
  double trace_pq() const;
};

// Joint block-diagonalization of two projectors. Blocks come out with c >= 0
// (orthogonal directions are paired as c = 0 blocks),
// 2-dim blocks first by descending c, then 1-dim blocks by (label_p,
// label_q) descending.
BlockDecomposition cs_decompose(const Projector& p, const Projector& q);

// perm[j] is the index into `a` matched with b[j]: sorting both descending and
// pairing in order maximizes Σ_j a[perm[j]]·b[j].
std::vector<int> align_bases(std::span<const double> a, std::span<const double> b);
double matched_inner_product(std::span<const double> a, std::span<const double> b,
                             std::span<const int> perm);

enum class Branch { ChainEven, ChainOdd, ChainEvenExchanged, ChainOddExchanged, Cyclic };

std::string_view to_string(Branch b);
std::optional<Branch> parse_branch(std::string_view name);
bool is_exchanged(Branch b);

// Free coefficients of a joint normal form. Only the Bob-side (odd-indexed)
// coefficients and the boundary labels are free; Alice's 2-dim blocks are
// filled in by optimal_even_coefficient.
//   chain-even (d even):   (c1, c3, ..., c_{d+1}),        c1, c_{d+1} = ±1
//   chain-odd  (d odd):    (c1, c3, ..., c_d, c_{d+1}),   c1, c_{d+1} = ±1
//   cyclic     (d even):   (c1, c3, ..., c_{d-1})
// Exchanged chains use the same vectors with Alice and Bob swapped.
struct NormalFormSpec {
  Branch branch = Branch::ChainEven;
  int dim = 2;
  std::vector<double> coeffs;

  // Derives `dim` from the coefficient count and validates.
  static NormalFormSpec make(Branch branch, std::vector<double> coeffs);
  static int dim_for(Branch branch, std::size_t num_coeffs);
  static std::size_t num_coeffs_for(Branch branch, int dim);
};

// Throws ValidationError("coeffs", ...) on violated invariants.
void validate_spec(const NormalFormSpec& spec);

// 2τ/√(4τ²+1) with τ = (x+y)/2: the Alice coefficient maximizing
// cτ + √(1-c²)/2 given the neighbouring Bob coefficients.
double optimal_even_coefficient(double x, double y);

Strategy build_normal_form(const NormalFormSpec& spec);

enum class ComponentKind { Chain, Cycle };

struct Component {
  ComponentKind kind = ComponentKind::Chain;
  // Basis indices in path (or cycle) order.
  std::vector<int> vertices;
  // Side carrying the 1-dim end blocks for even chains.
  bool ends_on_alice = false;
  std::optional<NormalFormSpec> spec;
  std::string mismatch;  // non-empty when no branch fits
};

// Graph on basis indices with one edge per 2-dim block of either
// decomposition; each connected component is a path or a cycle. `dec_a`
// carries (A1, A2), `dec_b` carries (B1, B2), both over the same basis.
std::vector<Component> block_components(const BlockDecomposition& dec_a, const BlockDecomposition& dec_b);

struct NormalizeReport {
  Strategy aligned;  // Bob's pair transplanted onto Alice's CS basis, A3/B3 best responses
  double old_value = 0.0;
  double new_value = 0.0;
  double delta = 0.0;  // new - old
  BlockDecomposition dec_a;
  BlockDecomposition dec_b;  // over dec_a.basis after alignment
  std::vector<Component> components;
  // Value of the direct sum of the rebuilt components (all matched only).
  // The rebuild puts Alice's 2-dim blocks at their optimal coefficients, so
  // this is >= new_value and equal to it for optimal inputs.
  std::optional<double> rebuilt_value;
};

// Requires uniform weights.
NormalizeReport normalize(const Strategy& s);

}  // namespace i3322
