#include "i3322/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace i3322 {

namespace {

// Singular values below this are structural zeros: the two directions are
// orthogonal and form a c = 0 block.
constexpr double kZeroCosine = 1e-11;

Matrix range_basis(const Projector& p) {
  const Spectrum s = eig_sym(p.sym());
  int r = 0;
  while (r < p.dim() && s.values(r) > 0.5) ++r;
  return s.vectors.leftCols(r);
}

struct PendingTwo {
  double c;
  Vector ea, eb;
};

struct PendingOne {
  int label_p, label_q;
  Vector e;
};

}  // namespace

Matrix BlockDecomposition::model_p() const {
  Matrix m = Matrix::Zero(dim(), dim());
  for (const Block& b : blocks) {
    if (const auto* one = std::get_if<OneBlock>(&b)) {
      m(one->position, one->position) = one->label_p;
    } else {
      const auto& two = std::get<TwoBlock>(b);
      m(two.first, two.first) = 0.5 * (1 - two.c);
      m(two.second, two.second) = 0.5 * (1 + two.c);
      m(two.first, two.second) = m(two.second, two.first) = -0.5 * two.s;
    }
  }
  return m;
}

Matrix BlockDecomposition::model_q() const {
  Matrix m = Matrix::Zero(dim(), dim());
  for (const Block& b : blocks) {
    if (const auto* one = std::get_if<OneBlock>(&b)) {
      m(one->position, one->position) = one->label_q;
    } else {
      const auto& two = std::get<TwoBlock>(b);
      m(two.first, two.first) = 0.5 * (1 - two.c);
      m(two.second, two.second) = 0.5 * (1 + two.c);
      m(two.first, two.second) = m(two.second, two.first) = 0.5 * two.s;
    }
  }
  return m;
}

double BlockDecomposition::trace_pq() const {
  double t = 0.0;
  for (const Block& b : blocks) {
    if (const auto* one = std::get_if<OneBlock>(&b)) {
      t += one->label_p * one->label_q;
    } else {
      t += std::get<TwoBlock>(b).c * std::get<TwoBlock>(b).c;
    }
  }
  return t;
}

BlockDecomposition cs_decompose(const Projector& p, const Projector& q) {
  if (p.dim() != q.dim()) throw ValidationError("cs_decompose", "dimension mismatch");
  const int d = p.dim();
  const Matrix u = range_basis(p);
  const Matrix w = range_basis(q);

  // Principal vectors: SVD of Uᵀ W pairs u_i ∈ ran P with w_i ∈ ran Q at
  // cos θ_i = σ_i, and distinct pairs span mutually orthogonal planes.
  std::vector<PendingTwo> twos;
  if (u.cols() > 0 && w.cols() > 0) {
    Eigen::JacobiSVD<Matrix> svd(u.transpose() * w, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sigma = svd.singularValues();
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      double c = sigma(i);
      if (c >= kDegenerateCosine) continue;
      if (c <= kZeroCosine) c = 0.0;
      Vector ui = u * svd.matrixU().col(i);
      Vector wi = w * svd.matrixV().col(i);
      ui.normalize();
      wi.normalize();
      // e_a spans the (1-c)-eigenline of P+Q, e_b the (1+c)-eigenline; the
      // orientation of e_a makes P's off-diagonal -s/2 and Q's +s/2.
      twos.push_back({c, (wi - ui).normalized(), (ui + wi).normalized()});
    }
  }
  std::stable_sort(twos.begin(), twos.end(), [](const auto& a, const auto& b) { return a.c > b.c; });

  // On the complement of the 2-dim planes P and Q commute; diagonalize P + 2Q.
  Matrix planes(d, 2 * twos.size());
  for (std::size_t i = 0; i < twos.size(); ++i) {
    planes.col(2 * i) = twos[i].ea;
    planes.col(2 * i + 1) = twos[i].eb;
  }
  const int rest = d - static_cast<int>(2 * twos.size());
  std::vector<PendingOne> ones;
  if (rest > 0) {
    const Matrix complement = Matrix::Identity(d, d) - planes * planes.transpose();
    const Matrix r = eig_sym(SymMatrix::trusted(0.5 * (complement + complement.transpose())))
                         .vectors.leftCols(rest);
    const Matrix pr = r.transpose() * p.matrix() * r;
    const Matrix qr = r.transpose() * q.matrix() * r;
    const Matrix mix = pr + 2.0 * qr;
    const Spectrum joint = eig_sym(SymMatrix::trusted(0.5 * (mix + mix.transpose())));
    for (int i = 0; i < rest; ++i) {
      const Vector z = joint.vectors.col(i);
      const int lp = static_cast<int>(std::lround(z.dot(pr * z)));
      const int lq = static_cast<int>(std::lround(z.dot(qr * z)));
      ones.push_back({std::clamp(lp, 0, 1), std::clamp(lq, 0, 1), r * z});
    }
  }
  std::stable_sort(ones.begin(), ones.end(), [](const auto& a, const auto& b) {
    return std::pair(a.label_p, a.label_q) > std::pair(b.label_p, b.label_q);
  });

  BlockDecomposition dec;
  dec.basis = Matrix(d, d);
  int col = 0;
  for (const auto& t : twos) {
    dec.basis.col(col) = t.ea;
    dec.basis.col(col + 1) = t.eb;
    dec.blocks.push_back(TwoBlock{col, col + 1, t.c, t.c == 0.0 ? 1.0 : std::sqrt(std::max(0.0, 1 - t.c * t.c))});
    col += 2;
  }
  for (const auto& o : ones) {
    dec.basis.col(col) = o.e;
    dec.blocks.push_back(OneBlock{col, o.label_p, o.label_q});
    ++col;
  }
  return dec;
}

std::vector<int> align_bases(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("align_bases", "length mismatch");
  const int n = static_cast<int>(a.size());
  auto descending = [n](std::span<const double> v) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return v[i] > v[j]; });
    return idx;
  };
  const std::vector<int> oa = descending(a);
  const std::vector<int> ob = descending(b);
  std::vector<int> perm(n);
  for (int k = 0; k < n; ++k) perm[ob[k]] = oa[k];
  return perm;
}

double matched_inner_product(std::span<const double> a, std::span<const double> b, std::span<const int> perm) {
  double s = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) s += a[perm[j]] * b[j];
  return s;
}

namespace {

// Per basis index: partner in a 2-dim block (or -1) and the diagonal of the
// block's second operator; for 1-dim blocks the two labels.
struct Side {
  std::vector<int> partner;
  std::vector<double> q_diag;
  std::vector<int> label_p, label_q;
};

Side side_of(const BlockDecomposition& dec) {
  const int d = dec.dim();
  Side s{std::vector<int>(d, -1), std::vector<double>(d, 0.0), std::vector<int>(d, -1), std::vector<int>(d, -1)};
  for (const Block& b : dec.blocks) {
    if (const auto* one = std::get_if<OneBlock>(&b)) {
      s.label_p[one->position] = one->label_p;
      s.label_q[one->position] = one->label_q;
      s.q_diag[one->position] = one->label_q;
    } else {
      const auto& two = std::get<TwoBlock>(b);
      s.partner[two.first] = two.second;
      s.partner[two.second] = two.first;
      s.q_diag[two.first] = 0.5 * (1 - two.c);
      s.q_diag[two.second] = 0.5 * (1 + two.c);
    }
  }
  return s;
}

// Walk alternating edges from `start`, taking `first` side's edge first.
std::vector<int> walk(int start, const Side& first, const Side& second) {
  std::vector<int> path{start};
  int v = start;
  bool use_first = true;
  while (true) {
    const int next = (use_first ? first : second).partner[v];
    if (next < 0 || next == start) break;
    path.push_back(next);
    v = next;
    use_first = !use_first;
  }
  return path;
}

std::string label_mismatch(const char* side, int v, int lp, int lq) {
  std::ostringstream os;
  os << side << " 1-dim block at basis index " << v << " has unequal labels (" << lp << "," << lq << ")";
  return os.str();
}

// Normal form of a chain whose Bob-side ("bob") has the 1-dim block at the start
// vertex. Even chains have Bob 1-dim at both ends, odd chains at the start and
// Alice 1-dim at the end.
void extract_chain(Component& comp, const Side& alice, const Side& bob, bool exchanged) {
  const auto& v = comp.vertices;
  const int k = static_cast<int>(v.size());
  const char* bob_name = exchanged ? "Alice" : "Bob";
  const char* alice_name = exchanged ? "Bob" : "Alice";
  if (bob.label_p[v[0]] != bob.label_q[v[0]]) {
    comp.mismatch = label_mismatch(bob_name, v[0], bob.label_p[v[0]], bob.label_q[v[0]]);
    return;
  }
  std::vector<double> coeffs{1.0 - 2.0 * bob.label_q[v[0]]};
  for (int i = 1; i + 1 < k; i += 2) coeffs.push_back(bob.q_diag[v[i]] - bob.q_diag[v[i + 1]]);
  const int last = v[k - 1];
  if (k % 2 == 0) {
    if (bob.label_p[last] != bob.label_q[last]) {
      comp.mismatch = label_mismatch(bob_name, last, bob.label_p[last], bob.label_q[last]);
      return;
    }
    coeffs.push_back(2.0 * bob.label_q[last] - 1.0);
    // Walking the chain backwards negates and reverses the coefficients; keep
    // the lexicographically larger reading.
    std::vector<double> back(coeffs.rbegin(), coeffs.rend());
    for (double& c : back) c = -c;
    if (back > coeffs) {
      coeffs = std::move(back);
      std::reverse(comp.vertices.begin(), comp.vertices.end());
    }
    comp.spec = NormalFormSpec::make(exchanged ? Branch::ChainEvenExchanged : Branch::ChainEven, coeffs);
  } else {
    if (alice.label_p[last] != alice.label_q[last]) {
      comp.mismatch = label_mismatch(alice_name, last, alice.label_p[last], alice.label_q[last]);
      return;
    }
    coeffs.push_back(1.0 - 2.0 * alice.label_q[last]);
    comp.spec = NormalFormSpec::make(Branch::ChainOdd, coeffs);
  }
}

}  // namespace

std::vector<Component> block_components(const BlockDecomposition& dec_a, const BlockDecomposition& dec_b) {
  if (dec_a.dim() != dec_b.dim() || (dec_a.basis - dec_b.basis).cwiseAbs().maxCoeff() > 1e-8) {
    throw ValidationError("basis", "decompositions are not over a common basis");
  }
  const int d = dec_a.dim();
  const Side alice = side_of(dec_a);
  const Side bob = side_of(dec_b);

  std::vector<char> seen(d, 0);
  std::vector<Component> out;
  for (int root = 0; root < d; ++root) {
    if (seen[root]) continue;
    // Collect the component.
    std::vector<int> members;
    std::vector<int> stack{root};
    seen[root] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (int n : {alice.partner[v], bob.partner[v]}) {
        if (n >= 0 && !seen[n]) {
          seen[n] = 1;
          stack.push_back(n);
        }
      }
    }
    std::sort(members.begin(), members.end());

    Component comp;
    const bool cycle = std::all_of(members.begin(), members.end(),
                                   [&](int v) { return alice.partner[v] >= 0 && bob.partner[v] >= 0; });
    if (cycle) {
      comp.kind = ComponentKind::Cycle;
      comp.vertices = walk(members.front(), alice, bob);
      std::vector<double> coeffs;
      const auto& v = comp.vertices;
      const int k = static_cast<int>(v.size());
      coeffs.push_back(bob.q_diag[v[k - 1]] - bob.q_diag[v[0]]);
      for (int i = 1; i + 1 < k; i += 2) coeffs.push_back(bob.q_diag[v[i]] - bob.q_diag[v[i + 1]]);
      // Rotating the start by two vertices rotates the coefficients by one;
      // keep the lexicographically largest rotation.
      const int m = static_cast<int>(coeffs.size());
      int best = 0;
      auto rotated = [&](int r) {
        std::vector<double> out(coeffs.begin() + r, coeffs.end());
        out.insert(out.end(), coeffs.begin(), coeffs.begin() + r);
        return out;
      };
      for (int r = 1; r < m; ++r) {
        if (rotated(r) > rotated(best)) best = r;
      }
      coeffs = rotated(best);
      std::rotate(comp.vertices.begin(), comp.vertices.begin() + 2 * best, comp.vertices.end());
      comp.spec = NormalFormSpec::make(Branch::Cyclic, coeffs);
      out.push_back(std::move(comp));
      continue;
    }

    comp.kind = ComponentKind::Chain;
    std::vector<int> bob_ends, alice_ends;
    for (int v : members) {
      if (bob.partner[v] < 0) bob_ends.push_back(v);
      if (alice.partner[v] < 0) alice_ends.push_back(v);
    }
    if (members.size() % 2 == 1) {
      // Starts at the Bob-side 1-dim block and leaves along Alice's edge.
      comp.vertices = walk(bob_ends.front(), alice, bob);
      extract_chain(comp, alice, bob, false);
    } else if (!bob_ends.empty()) {
      comp.vertices = walk(bob_ends.front(), alice, bob);
      extract_chain(comp, alice, bob, false);
    } else {
      comp.ends_on_alice = true;
      comp.vertices = walk(alice_ends.front(), bob, alice);
      extract_chain(comp, bob, alice, true);
    }
    out.push_back(std::move(comp));
  }
  return out;
}

NormalizeReport normalize(const Strategy& s) {
  if (!s.uniform()) throw ValidationError("schmidt", "normalize requires uniform weights");
  const int d = s.dim();
  const auto& a = s.alice();
  const auto& b = s.bob();

  BlockDecomposition dec_a = cs_decompose(a[0], a[1]);
  BlockDecomposition dec_b = cs_decompose(b[0], b[1]);

  // A1+A2 (resp. B1+B2) is diagonal in its own CS basis.
  const Vector diag_a = (dec_a.model_p() + dec_a.model_q()).diagonal();
  const Vector diag_b = (dec_b.model_p() + dec_b.model_q()).diagonal();
  const std::vector<int> perm = align_bases({diag_a.data(), static_cast<std::size_t>(d)},
                                            {diag_b.data(), static_cast<std::size_t>(d)});

  // Move Bob's basis vector j onto Alice's basis vector perm[j].
  Matrix pi = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) pi(perm[j], j) = 1.0;
  const Matrix to_world = dec_a.basis * pi;
  auto transplant = [&](const Matrix& model) {
    Matrix m = to_world * model * to_world.transpose();
    return Projector::trusted(SymMatrix::trusted(0.5 * (m + m.transpose())));
  };
  const Projector b1 = transplant(dec_b.model_p());
  const Projector b2 = transplant(dec_b.model_q());

  BlockDecomposition aligned_b;
  aligned_b.basis = dec_a.basis;
  for (const Block& blk : dec_b.blocks) {
    if (const auto* one = std::get_if<OneBlock>(&blk)) {
      aligned_b.blocks.push_back(OneBlock{perm[one->position], one->label_p, one->label_q});
    } else {
      TwoBlock two = std::get<TwoBlock>(blk);
      two.first = perm[two.first];
      two.second = perm[two.second];
      aligned_b.blocks.push_back(two);
    }
  }

  const Projector a3 = positive_eigenspace_projector(b2.sym() - b1.sym());
  const Projector b3 = positive_eigenspace_projector(a[1].sym() - a[0].sym());
  Strategy aligned({a[0], a[1], a3}, {b1, b2, b3});

  NormalizeReport r{aligned, i3322_value(s).value, i3322_value(aligned).value, 0.0, dec_a, aligned_b, {}, {}};
  r.delta = r.new_value - r.old_value;
  r.components = block_components(r.dec_a, r.dec_b);

  const bool all_matched = std::all_of(r.components.begin(), r.components.end(),
                                       [](const Component& c) { return c.spec.has_value(); });
  if (all_matched) {
    double total = 0.0;
    for (const Component& c : r.components) {
      total += c.spec->dim * i3322_value(build_normal_form(*c.spec)).value;
    }
    r.rebuilt_value = total / d;
  }
  return r;
}

}  // namespace i3322
