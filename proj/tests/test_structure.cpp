#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "helpers.hpp"
#include "i3322/ascent.hpp"
#include "i3322/bounds.hpp"
#include "i3322/structure.hpp"

using namespace i3322;

namespace {

Projector diag_proj(std::initializer_list<double> d) {
  Vector v(static_cast<int>(d.size()));
  int i = 0;
  for (double x : d) v(i++) = x;
  return Projector(SymMatrix(Matrix(v.asDiagonal())));
}

void check_decomposition(const Projector& p, const Projector& q, const BlockDecomposition& dec) {
  const int d = p.dim();
  const Matrix& u = dec.basis;
  CHECK((u.transpose() * u - Matrix::Identity(d, d)).norm() <= 1e-10 * d);
  CHECK((u.transpose() * p.matrix() * u - dec.model_p()).norm() <= 1e-10 * d);
  CHECK((u.transpose() * q.matrix() * u - dec.model_q()).norm() <= 1e-10 * d);
  CHECK(std::abs((p.matrix() * q.matrix()).trace() - dec.trace_pq()) <= 1e-9);
}

}  // namespace

TEST_CASE("cs_decompose on commuting pairs") {
  const Projector p = diag_proj({1, 0});
  const BlockDecomposition dec = cs_decompose(p, p);
  REQUIRE(dec.blocks.size() == 2);
  const auto& b0 = std::get<OneBlock>(dec.blocks[0]);
  const auto& b1 = std::get<OneBlock>(dec.blocks[1]);
  CHECK(b0.label_p == 1);
  CHECK(b0.label_q == 1);
  CHECK(b1.label_p == 0);
  CHECK(b1.label_q == 0);
  check_decomposition(p, p, dec);

  const BlockDecomposition id = cs_decompose(Projector::identity(3), Projector::zero(3));
  REQUIRE(id.blocks.size() == 3);
  for (const Block& b : id.blocks) {
    CHECK(std::get<OneBlock>(b).label_p == 1);
    CHECK(std::get<OneBlock>(b).label_q == 0);
  }
}

TEST_CASE("cs_decompose on a 45 degree pair") {
  const Projector p = diag_proj({1, 0});
  const Projector q{SymMatrix(testutil::p3())};
  const BlockDecomposition dec = cs_decompose(p, q);
  REQUIRE(dec.blocks.size() == 1);
  const auto& b = std::get<TwoBlock>(dec.blocks[0]);
  CHECK(b.c * b.c == doctest::Approx(0.5));
  CHECK(std::abs(b.c) == doctest::Approx(0.70710678118654752));
  check_decomposition(p, q, dec);
}

TEST_CASE("cs_decompose reconstructs random projector pairs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + trial % 9;
    std::uniform_int_distribution<int> r(0, d);
    const Projector p = random_projector(d, r(rng), rng);
    const Projector q = random_projector(d, r(rng), rng);
    check_decomposition(p, q, cs_decompose(p, q));
  }
}

TEST_CASE("cs_decompose handles orthogonal and shared directions") {
  // P = e1 + e2, Q = e2 + e3 in d=4: shared e2, e1 vs e3 orthogonal, e4 in neither.
  const Projector p = diag_proj({1, 1, 0, 0});
  const Projector q = diag_proj({0, 1, 1, 0});
  check_decomposition(p, q, cs_decompose(p, q));
}

TEST_CASE("align_bases small cases") {
  const std::vector<double> a{2, 1}, b{2, 1}, c{1, 2};
  CHECK(align_bases(a, b) == std::vector<int>{0, 1});
  const auto perm = align_bases(a, c);
  CHECK(perm == std::vector<int>{1, 0});
  CHECK(matched_inner_product(a, c, perm) == 5.0);
  const std::vector<int> ident{0, 1};
  CHECK(matched_inner_product(a, c, ident) == 4.0);
}

TEST_CASE("align_bases matches brute force") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 1 + trial % 6;
    std::vector<double> a(d), b(d);
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1e300;
    do {
      double s = 0;
      for (int j = 0; j < d; ++j) s += a[perm[j]] * b[j];
      best = std::max(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto got = align_bases(a, b);
    std::vector<int> sorted = got;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(d);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(sorted == expect);
    CHECK(matched_inner_product(a, b, got) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("coefficient validation and dimensions") {
  CHECK(NormalFormSpec::make(Branch::ChainEven, {1, 1}).dim == 2);
  CHECK(NormalFormSpec::make(Branch::ChainEven, {1, 0.9, 1}).dim == 4);
  CHECK(NormalFormSpec::make(Branch::ChainOdd, {1, -0.5, -1}).dim == 3);
  CHECK(NormalFormSpec::make(Branch::Cyclic, {0.5, 0.5}).dim == 4);
  CHECK_THROWS_AS(NormalFormSpec::make(Branch::ChainEven, {0.5, 1}), ValidationError);
  CHECK_THROWS_AS(NormalFormSpec::make(Branch::ChainEven, {1, 1.5, 1}), ValidationError);
  CHECK_THROWS_AS(NormalFormSpec::make(Branch::Cyclic, {}), ValidationError);
  CHECK(parse_branch("chain-odd-exchanged") == Branch::ChainOddExchanged);
  CHECK_FALSE(parse_branch("spiral").has_value());
  for (Branch b : {Branch::ChainEven, Branch::ChainOdd, Branch::ChainEvenExchanged, Branch::ChainOddExchanged,
                   Branch::Cyclic})
    CHECK(parse_branch(to_string(b)) == b);
}

TEST_CASE("optimal even coefficient") {
  CHECK(optimal_even_coefficient(1, -1) == doctest::Approx(0.0));
  CHECK(optimal_even_coefficient(1, 1) == doctest::Approx(2.0 / std::sqrt(5.0)));
  CHECK(optimal_even_coefficient(-0.5, -0.5) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  // Brute-force maximization of cτ + √(1-c²)/2.
  for (double tau : {-1.0, -0.3, 0.0, 0.2, 0.77}) {
    double best = -1e9, arg = 0;
    for (int i = 0; i <= 200000; ++i) {
      const double c = -1.0 + i * 1e-5;
      const double v = c * tau + std::sqrt(std::max(0.0, 1 - c * c)) / 2;
      if (v > best) best = v, arg = c;
    }
    CHECK(optimal_even_coefficient(tau, tau) == doctest::Approx(arg).epsilon(1e-4));
  }
}

TEST_CASE("normal forms evaluate to the hand-derived values") {
  const double epr = i3322_value(build_normal_form(NormalFormSpec::make(Branch::Cyclic, {std::sqrt(3.0) / 2}))).value;
  CHECK(std::abs(epr - 0.25) <= 1e-12);
  const double even = i3322_value(build_normal_form(NormalFormSpec::make(Branch::ChainEven, {1, 1}))).value;
  CHECK(even == doctest::Approx(std::sqrt(5.0) / 2 - 1).epsilon(1e-12));
  const double odd = i3322_value(build_normal_form(NormalFormSpec::make(Branch::ChainOdd, {1, -0.5, -1}))).value;
  CHECK(std::abs(odd - 0.161349) < 1e-5);
}

TEST_CASE("exchanged branches equal the swapped strategy") {
  const auto spec = NormalFormSpec::make(Branch::ChainEven, {1, 0.3, -1});
  const auto ex = NormalFormSpec::make(Branch::ChainEvenExchanged, {1, 0.3, -1});
  const Strategy a = build_normal_form(spec).swapped();
  const Strategy b = build_normal_form(ex);
  for (int k = 0; k < 3; ++k) CHECK((a.alice()[k].matrix() - b.alice()[k].matrix()).norm() < 1e-14);
}

TEST_CASE("block components classify normal forms") {
  // normalize aligns Bob onto Alice's CS basis before building the graph.
  auto components = [](const Strategy& s) { return normalize(s).components; };
  const auto chain = components(build_normal_form(NormalFormSpec::make(Branch::ChainEven, {1, 0.9, 1})));
  REQUIRE(chain.size() == 1);
  CHECK(chain[0].kind == ComponentKind::Chain);
  const auto cyc = components(build_normal_form(NormalFormSpec::make(Branch::Cyclic, {0.5, 0.7})));
  REQUIRE(cyc.size() == 1);
  CHECK(cyc[0].kind == ComponentKind::Cycle);
  CHECK(cyc[0].vertices.size() == 4);
}

TEST_CASE("normalize recovers optimal normal forms") {
  const double q = std::sqrt(3.0) / 2;
  SUBCASE("cyclic quarter") {
    const NormalizeReport r = normalize(build_normal_form(NormalFormSpec::make(Branch::Cyclic, {q})));
    CHECK(std::abs(r.delta) < 1e-9);
    REQUIRE(r.components.size() == 1);
    REQUIRE(r.components[0].spec.has_value());
    CHECK(r.components[0].spec->branch == Branch::Cyclic);
    CHECK(std::abs(std::abs(r.components[0].spec->coeffs[0]) - q) < 1e-9);
    REQUIRE(r.rebuilt_value.has_value());
    CHECK(*r.rebuilt_value == doctest::Approx(0.25).epsilon(1e-9));
  }
  SUBCASE("chain-even at its optimum") {
    const auto in = NormalFormSpec::make(Branch::ChainEven, {1, 1});
    const NormalizeReport r = normalize(build_normal_form(in));
    CHECK(std::abs(r.delta) < 1e-9);
    REQUIRE(r.components.size() == 1);
    REQUIRE(r.components[0].spec.has_value());
    CHECK(r.components[0].spec->branch == Branch::ChainEven);
    for (std::size_t i = 0; i < in.coeffs.size(); ++i)
      CHECK(r.components[0].spec->coeffs[i] == doctest::Approx(in.coeffs[i]).epsilon(1e-8));
    CHECK(*r.rebuilt_value == doctest::Approx(r.new_value).epsilon(1e-9));
  }
  SUBCASE("optimized d=4 chain") {
    const OmegaResult opt = optimize_omega(Branch::ChainEven, 4);
    const NormalizeReport r = normalize(build_normal_form(opt.spec));
    CHECK(std::abs(r.delta) < 1e-9);
    REQUIRE(r.components.size() == 1);
    REQUIRE(r.components[0].spec.has_value());
    CHECK(*r.rebuilt_value == doctest::Approx(opt.value).epsilon(1e-9));
  }
}

TEST_CASE("normalize splits a direct sum") {
  const Strategy epr = build_normal_form(NormalFormSpec::make(Branch::Cyclic, {std::sqrt(3.0) / 2}));
  const Strategy chain = build_normal_form(NormalFormSpec::make(Branch::ChainEven, {1, 1}));
  const NormalizeReport r = normalize(direct_sum(epr, chain));
  CHECK(r.components.size() == 2);
  CHECK(r.rebuilt_value.has_value());
}

TEST_CASE("normalize never loses value after a sweep") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    SeesawOptions one;
    one.max_sweeps = 1;
    const Strategy s = seesaw(random_strategy(4, rng), one).strategy;
    const NormalizeReport r = normalize(s);
    CHECK(r.delta >= -1e-8);
    if (r.rebuilt_value) CHECK(*r.rebuilt_value >= r.new_value - 1e-9);
  }
}

TEST_CASE("normalize rejects weighted states") {
  Vector w(2);
  w << std::sqrt(0.9), std::sqrt(0.1);
  CHECK_THROWS_AS(normalize(Strategy::zero(2).with_schmidt(w)), ValidationError);
}

TEST_CASE("block components reject decompositions over different bases") {
  std::mt19937_64 rng(6);
  const BlockDecomposition a = cs_decompose(random_projector(3, 1, rng), random_projector(3, 2, rng));
  const BlockDecomposition b = cs_decompose(random_projector(3, 1, rng), random_projector(3, 1, rng));
  CHECK_THROWS_AS(block_components(a, b), ValidationError);
}
