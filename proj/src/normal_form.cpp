#include <cmath>
#include <sstream>

#include "i3322/structure.hpp"

namespace i3322 {

namespace {

constexpr std::array<std::pair<Branch, std::string_view>, 5> kBranchNames = {{
    {Branch::ChainEven, "chain-even"},
    {Branch::ChainOdd, "chain-odd"},
    {Branch::ChainEvenExchanged, "chain-even-exchanged"},
    {Branch::ChainOddExchanged, "chain-odd-exchanged"},
    {Branch::Cyclic, "cyclic"},
}};

bool is_even_chain(Branch b) { return b == Branch::ChainEven || b == Branch::ChainEvenExchanged; }
bool is_odd_chain(Branch b) { return b == Branch::ChainOdd || b == Branch::ChainOddExchanged; }

// Writes ½[[1-c, σs], [σs, 1+c]] on (i, j); σ = -1 for the first operator of
// a pair, +1 for the second.
void put_block(Matrix& m, int i, int j, double c, double sign) {
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  m(i, i) += 0.5 * (1 - c);
  m(j, j) += 0.5 * (1 + c);
  m(i, j) += 0.5 * sign * s;
  m(j, i) += 0.5 * sign * s;
}

Projector as_projector(const Matrix& m) { return Projector::trusted(SymMatrix::trusted(m)); }

}  // namespace

std::string_view to_string(Branch b) {
  for (const auto& [branch, name] : kBranchNames) {
    if (branch == b) return name;
  }
  return "unknown";
}

std::optional<Branch> parse_branch(std::string_view name) {
  for (const auto& [branch, n] : kBranchNames) {
    if (n == name) return branch;
  }
  return std::nullopt;
}

bool is_exchanged(Branch b) { return b == Branch::ChainEvenExchanged || b == Branch::ChainOddExchanged; }

int NormalFormSpec::dim_for(Branch branch, std::size_t n) {
  const int k = static_cast<int>(n);
  if (is_even_chain(branch)) {
    if (k < 2) throw ValidationError("coeffs", "even chains need at least 2 coefficients");
    return 2 * (k - 1);
  }
  if (is_odd_chain(branch)) {
    if (k < 2) throw ValidationError("coeffs", "odd chains need at least 2 coefficients");
    return 2 * k - 3;
  }
  if (k < 1) throw ValidationError("coeffs", "cyclic forms need at least 1 coefficient");
  return 2 * k;
}

std::size_t NormalFormSpec::num_coeffs_for(Branch branch, int dim) {
  if (is_even_chain(branch) || branch == Branch::Cyclic) {
    if (dim < 2 || dim % 2) {
      throw ValidationError("dim", std::string(to_string(branch)) + " needs an even dimension >= 2");
    }
    return branch == Branch::Cyclic ? dim / 2 : dim / 2 + 1;
  }
  if (dim < 1 || dim % 2 == 0) {
    throw ValidationError("dim", std::string(to_string(branch)) + " needs an odd dimension >= 1");
  }
  return (dim + 1) / 2 + 1;
}

NormalFormSpec NormalFormSpec::make(Branch branch, std::vector<double> coeffs) {
  NormalFormSpec s;
  s.branch = branch;
  s.dim = dim_for(branch, coeffs.size());
  s.coeffs = std::move(coeffs);
  validate_spec(s);
  return s;
}

void validate_spec(const NormalFormSpec& spec) {
  if (NormalFormSpec::num_coeffs_for(spec.branch, spec.dim) != spec.coeffs.size()) {
    std::ostringstream os;
    os << to_string(spec.branch) << " in dimension " << spec.dim << " takes "
       << NormalFormSpec::num_coeffs_for(spec.branch, spec.dim) << " coefficients, got " << spec.coeffs.size();
    throw ValidationError("coeffs", os.str());
  }
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    const double c = spec.coeffs[i];
    if (!std::isfinite(c) || c < -1.0 || c > 1.0) {
      throw ValidationError("coeffs", "coefficient " + std::to_string(i) + " outside [-1, 1]");
    }
  }
  if (spec.branch != Branch::Cyclic) {
    for (std::size_t i : {std::size_t{0}, spec.coeffs.size() - 1}) {
      if (std::abs(spec.coeffs[i]) != 1.0) {
        throw ValidationError("coeffs", "boundary coefficient " + std::to_string(i) + " must be +1 or -1");
      }
    }
  }
}

double optimal_even_coefficient(double x, double y) {
  const double tau = 0.5 * (x + y);
  return 2 * tau / std::sqrt(4 * tau * tau + 1);
}

Strategy build_normal_form(const NormalFormSpec& spec) {
  validate_spec(spec);
  const int d = spec.dim;
  const auto& c = spec.coeffs;
  Matrix a1 = Matrix::Zero(d, d), a2 = Matrix::Zero(d, d);
  Matrix b1 = Matrix::Zero(d, d), b2 = Matrix::Zero(d, d);

  auto alice_block = [&](int i, int j, double x, double y) {
    const double ca = optimal_even_coefficient(x, y);
    put_block(a1, i, j, ca, -1.0);
    put_block(a2, i, j, ca, 1.0);
  };
  // Bob's blocks run with -c on the diagonal.
  auto bob_block = [&](int i, int j, double cb) {
    put_block(b1, i, j, -cb, -1.0);
    put_block(b2, i, j, -cb, 1.0);
  };
  auto bob_one = [&](int i, double v) { b1(i, i) = b2(i, i) = v; };

  switch (spec.branch) {
    case Branch::ChainEven:
    case Branch::ChainEvenExchanged: {
      const int m = d / 2;
      for (int i = 0; i < m; ++i) alice_block(2 * i, 2 * i + 1, c[i], c[i + 1]);
      bob_one(0, 0.5 * (1 - c[0]));
      for (int i = 1; i < m; ++i) bob_block(2 * i - 1, 2 * i, c[i]);
      bob_one(d - 1, 0.5 * (1 + c[m]));
      break;
    }
    case Branch::ChainOdd:
    case Branch::ChainOddExchanged: {
      const int m = (d - 1) / 2;
      for (int i = 0; i < m; ++i) alice_block(2 * i, 2 * i + 1, c[i], c[i + 1]);
      a1(d - 1, d - 1) = a2(d - 1, d - 1) = 0.5 * (1 - c[m + 1]);
      bob_one(0, 0.5 * (1 - c[0]));
      for (int i = 1; i <= m; ++i) bob_block(2 * i - 1, 2 * i, c[i]);
      break;
    }
    case Branch::Cyclic: {
      const int m = d / 2;
      for (int i = 0; i < m; ++i) alice_block(2 * i, 2 * i + 1, c[i], c[(i + 1) % m]);
      for (int i = 0; i < m; ++i) bob_block(2 * i + 1, (2 * i + 2) % d, c[(i + 1) % m]);
      break;
    }
  }

  const Projector pa1 = as_projector(a1), pa2 = as_projector(a2);
  const Projector pb1 = as_projector(b1), pb2 = as_projector(b2);
  const Projector a3 = positive_eigenspace_projector(pb2.sym() - pb1.sym());
  const Projector b3 = positive_eigenspace_projector(pa2.sym() - pa1.sym());
  Strategy s({pa1, pa2, a3}, {pb1, pb2, b3});
  return is_exchanged(spec.branch) ? s.swapped() : s;
}

}  // namespace i3322
