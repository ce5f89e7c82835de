#include "i3322/soscheck.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "i3322/io_format.hpp"

namespace i3322 {

namespace {

using nlohmann::json;

Matrix square(int n, std::initializer_list<std::tuple<int, int, double>> entries) {
  Matrix m = Matrix::Zero(n, n);
  for (auto [i, j, v] : entries) {
    m(i, j) = v;
    m(j, i) = v;
  }
  return m;
}

SymMatrix parse_sym(const json& j, int n, const std::string& field) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ValidationError(field, "expected " + std::to_string(n) + " rows");
  }
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n) {
      throw ValidationError(field, "row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
    }
    for (int c = 0; c < n; ++c) {
      if (!j[r][c].is_number()) throw ValidationError(field, "non-numeric entry");
      m(r, c) = j[r][c].get<double>();
    }
  }
  try {
    return SymMatrix(std::move(m));
  } catch (const ValidationError& e) {
    throw ValidationError(field, std::string(e.what()).substr(e.field().size() + 2));
  }
}

double number(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number()) throw ValidationError(key, "missing or not a number");
  return doc[key].get<double>();
}

void write_sym(std::ostream& os, const SymMatrix& m, const char* indent) {
  os << "[";
  for (int r = 0; r < m.dim(); ++r) {
    os << (r ? ",\n" : "\n") << indent << "  [";
    for (int c = 0; c < m.dim(); ++c) os << (c ? ", " : "") << format_g17(m(r, c));
    os << "]";
  }
  os << "\n" << indent << "]";
}

// Apex k: every off-diagonal entry outside row/column k is zero.
std::optional<double> arrow_schur(const Matrix& q, int k) {
  const int n = static_cast<int>(q.rows());
  double s = q(k, k);
  for (int i = 0; i < n; ++i) {
    if (i == k) continue;
    if (!(q(i, i) > 0.0)) return std::nullopt;
    for (int j = 0; j < n; ++j) {
      if (j != k && i != j && q(i, j) != 0.0) return std::nullopt;
    }
    s -= q(k, i) * q(k, i) / q(i, i);
  }
  return s;
}

}  // namespace

int Certificate::constant_index() const {
  for (int i = 0; i < size(); ++i) {
    if (monomials[i] == "1") return i;
  }
  return -1;
}

Certificate Certificate::permuted(std::span<const int> order) const {
  const int n = size();
  if (static_cast<int>(order.size()) != n) throw ValidationError("order", "length mismatch");
  auto perm = [&](const SymMatrix& m) {
    Matrix out(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out(i, j) = m(order[i], order[j]);
    }
    return SymMatrix::trusted(std::move(out));
  };
  Certificate c = *this;
  for (int i = 0; i < n; ++i) c.monomials[i] = monomials[order[i]];
  c.objective = perm(objective);
  for (auto& con : c.constraints) con.matrix = perm(con.matrix);
  if (gram) c.gram = perm(*gram);
  return c;
}

Certificate Certificate::with_bound(double t) const {
  Certificate c = *this;
  c.bound = t;
  c.gram.reset();
  return c;
}

Monomial parse_monomial(std::string_view label) {
  Monomial m;
  if (label == "1") return m;
  if (label.empty()) throw ValidationError("monomials", "empty label");
  std::size_t pos = 0;
  while (pos <= label.size()) {
    const std::size_t end = std::min(label.find('*', pos), label.size());
    std::string_view factor = label.substr(pos, end - pos);
    int power = 1;
    if (const auto caret = factor.find('^'); caret != std::string_view::npos) {
      const std::string digits(factor.substr(caret + 1));
      if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
        throw ValidationError("monomials", "bad exponent in \"" + std::string(label) + "\"");
      }
      power = std::stoi(digits);
      factor = factor.substr(0, caret);
    }
    if (factor.empty() || !std::all_of(factor.begin(), factor.end(), [](char ch) { return std::isalnum(ch) || ch == '_'; })) {
      throw ValidationError("monomials", "bad factor in \"" + std::string(label) + "\"");
    }
    m.factors.emplace_back(std::string(factor), power);
    pos = end + 1;
  }
  return m;
}

double Monomial::eval(const std::vector<std::string>& vars, const std::vector<double>& values) const {
  double v = 1.0;
  for (const auto& [name, power] : factors) {
    const auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) throw ValidationError("monomials", "unknown variable " + name);
    v *= std::pow(values[it - vars.begin()], power);
  }
  return v;
}

std::vector<std::string> monomial_variables(const std::vector<std::string>& labels) {
  std::vector<std::string> vars;
  for (const auto& l : labels) {
    for (const auto& [name, power] : parse_monomial(l).factors) {
      if (std::find(vars.begin(), vars.end(), name) == vars.end()) vars.push_back(name);
    }
  }
  return vars;
}

void validate_certificate(const Certificate& c) {
  const int n = c.size();
  if (n == 0) throw ValidationError("monomials", "empty list");
  std::set<std::string> seen;
  for (const auto& m : c.monomials) {
    parse_monomial(m);
    if (!seen.insert(m).second) throw ValidationError("monomials", "duplicate \"" + m + "\"");
  }
  if (c.constant_index() < 0) throw ValidationError("monomials", "the constant monomial \"1\" is required");
  if (!std::isfinite(c.bound)) throw ValidationError("bound", "not finite");
  if (!(c.psd_tolerance >= 0.0) || !std::isfinite(c.psd_tolerance)) {
    throw ValidationError("psd_tolerance", "must be finite and >= 0");
  }
  if (c.objective.dim() != n) throw ValidationError("objective", "dimension differs from the monomial count");
  for (std::size_t i = 0; i < c.constraints.size(); ++i) {
    const std::string field = "constraints[" + std::to_string(i) + "]";
    if (c.constraints[i].matrix.dim() != n) throw ValidationError(field + ".matrix", "dimension differs from the monomial count");
    if (!std::isfinite(c.constraints[i].multiplier)) throw ValidationError(field + ".multiplier", "not finite");
  }
  if (c.gram && c.gram->dim() != n) throw ValidationError("gram", "dimension differs from the monomial count");
}

SymMatrix build_gram(const Certificate& c) {
  validate_certificate(c);
  Matrix q = -c.objective.matrix();
  const int k = c.constant_index();
  q(k, k) += c.bound;
  for (const auto& con : c.constraints) q -= con.multiplier * con.matrix.matrix();
  return SymMatrix::trusted(std::move(q));
}

Verdict verify(const Certificate& c, int samples, std::uint64_t seed) {
  if (samples < 0) throw ValidationError("samples", "must be >= 0");
  const SymMatrix built = build_gram(c);
  Verdict v;
  v.gram = c.gram ? *c.gram : built;
  v.psd_tolerance = c.psd_tolerance;
  v.psd_margin = psd_margin(v.gram);
  v.schur_margin = arrow_schur(v.gram.matrix(), c.constant_index());
  v.samples = samples;

  std::vector<Monomial> monos;
  for (const auto& m : c.monomials) monos.push_back(parse_monomial(m));
  std::mt19937_64 rng(seed);
  const int n = c.size();
  Vector mv(n);

  if (c.model) {
    // vᵀQv = t - objective holds on the feasible set iff M0 encodes the
    // objective and every constraint form vanishes there.
    v.feasible_samples = true;
    double slack = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
      const std::vector<double> x = c.model->sample(rng);
      for (int i = 0; i < n; ++i) mv(i) = monos[i].eval(c.model->variables, x);
      const double obj = c.model->objective(x);
      v.identity_residual = std::max(v.identity_residual, std::abs(mv.dot(v.gram.matrix() * mv) - (c.bound - obj)));
      slack = std::min(slack, c.bound - obj);
    }
    if (samples > 0) v.min_slack = slack;
  }
  if (c.gram) {
    // A supplied Gram matrix must represent the same polynomial as the built one.
    const std::vector<std::string> vars = monomial_variables(c.monomials);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> x(vars.size());
    for (int s = 0; s < samples; ++s) {
      for (double& xi : x) xi = uni(rng);
      for (int i = 0; i < n; ++i) mv(i) = monos[i].eval(vars, x);
      v.identity_residual = std::max(v.identity_residual, std::abs(mv.dot((c.gram->matrix() - built.matrix()) * mv)));
    }
  }
  v.accepted = v.psd_margin >= -c.psd_tolerance && v.identity_residual <= kIdentityTol;
  return v;
}

std::string Verdict::text() const {
  std::ostringstream os;
  os << "verdict: " << (accepted ? "accepted" : "rejected") << "\n";
  os << "psd margin (min eigenvalue): " << format_g17(psd_margin) << "  tolerance " << format_g17(psd_tolerance) << "\n";
  if (schur_margin) os << "arrow schur complement: " << format_g17(*schur_margin) << "\n";
  os << "identity residual: " << format_g17(identity_residual) << " over " << samples
     << (feasible_samples ? " feasible samples" : " samples") << "\n";
  if (min_slack) os << "min bound - objective on samples: " << format_g17(*min_slack) << "\n";
  os << "gram:\n";
  for (int i = 0; i < gram.dim(); ++i) {
    os << " ";
    for (int j = 0; j < gram.dim(); ++j) os << " " << format_fixed12(gram(i, j));
    os << "\n";
  }
  return os.str();
}

std::vector<std::string> builtin_certificate_ids() { return {"i3322-case3", "f-cap"}; }

Certificate builtin_certificate(std::string_view id) {
  Certificate c;
  c.id = std::string(id);
  if (id == "i3322-case3") {
    // v = (1, x, z, a)
    c.monomials = {"1", "x", "z", "a"};
    c.bound = 0.368;
    c.objective = SymMatrix::trusted(square(4, {{0, 0, -2.0}, {0, 1, 0.5}, {0, 2, 0.25}}));
    // 1 - a² - z²
    c.constraints.push_back({SymMatrix::trusted(square(4, {{0, 0, 1.0}, {2, 2, -1.0}, {3, 3, -1.0}})), 0.51});
    // a² + 2a + 2 - x²
    c.constraints.push_back(
        {SymMatrix::trusted(square(4, {{0, 0, 2.0}, {0, 3, 1.0}, {3, 3, 1.0}, {1, 1, -1.0}})), 0.24});
    c.model = FeasibleModel{{"x", "z", "a"},
                            [](std::mt19937_64& rng) {
                              const double a = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
                              return std::vector<double>{std::sqrt(a * a + 2 * a + 2), std::sqrt(1 - a * a), a};
                            },
                            [](const std::vector<double>& x) { return x[0] + 0.5 * x[1] - 2.0; }};
    return c;
  }
  if (id == "f-cap") {
    // v = (1, x, y, r, p, q); 1/2 - f = (r-2)²/4 + (p-1/2)²/2 + (q-1/2)²/2 + (x-y)²/4
    c.monomials = {"1", "x", "y", "r", "p", "q"};
    c.bound = 0.5;
    c.objective = SymMatrix::trusted(square(6, {{0, 0, -2.0}, {0, 3, 0.5}, {0, 4, 0.25}, {0, 5, 0.25}}));
    // (x+y)² + 1 - r²
    c.constraints.push_back(
        {SymMatrix::trusted(square(6, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}, {1, 2, 1.0}, {3, 3, -1.0}})), 0.25});
    // 1 - x² - p²,  1 - y² - q²
    c.constraints.push_back({SymMatrix::trusted(square(6, {{0, 0, 1.0}, {1, 1, -1.0}, {4, 4, -1.0}})), 0.5});
    c.constraints.push_back({SymMatrix::trusted(square(6, {{0, 0, 1.0}, {2, 2, -1.0}, {5, 5, -1.0}})), 0.5});
    c.model = FeasibleModel{{"x", "y", "r", "p", "q"},
                            [](std::mt19937_64& rng) {
                              std::uniform_real_distribution<double> uni(-1.0, 1.0);
                              const double x = uni(rng), y = uni(rng);
                              return std::vector<double>{x, y, std::sqrt((x + y) * (x + y) + 1), std::sqrt(1 - x * x),
                                                         std::sqrt(1 - y * y)};
                            },
                            [](const std::vector<double>& v) { return f_value(v[0], v[1]); }};
    return c;
  }
  throw ValidationError("cert", "unknown built-in certificate \"" + std::string(id) + "\"");
}

Certificate certificate_from_json(std::string_view text) {
  const json doc = parse_json_document(text);
  if (!doc.is_object()) throw ValidationError("json", "top level must be an object");
  Certificate c;
  if (doc.contains("id")) {
    if (!doc["id"].is_string()) throw ValidationError("id", "must be a string");
    c.id = doc["id"].get<std::string>();
  }
  if (!doc.contains("monomials") || !doc["monomials"].is_array()) throw ValidationError("monomials", "missing or not an array");
  for (const auto& m : doc["monomials"]) {
    if (!m.is_string()) throw ValidationError("monomials", "labels must be strings");
    c.monomials.push_back(m.get<std::string>());
  }
  const int n = c.size();
  c.bound = number(doc, "bound");
  if (!doc.contains("objective")) throw ValidationError("objective", "missing");
  c.objective = parse_sym(doc["objective"], n, "objective");
  if (doc.contains("constraints")) {
    if (!doc["constraints"].is_array()) throw ValidationError("constraints", "must be an array");
    for (std::size_t i = 0; i < doc["constraints"].size(); ++i) {
      const json& e = doc["constraints"][i];
      const std::string field = "constraints[" + std::to_string(i) + "]";
      if (!e.is_object() || !e.contains("matrix")) throw ValidationError(field + ".matrix", "missing");
      if (!e.contains("multiplier") || !e["multiplier"].is_number()) {
        throw ValidationError(field + ".multiplier", "missing or not a number");
      }
      c.constraints.push_back({parse_sym(e["matrix"], n, field + ".matrix"), e["multiplier"].get<double>()});
    }
  }
  if (doc.contains("psd_tolerance")) c.psd_tolerance = number(doc, "psd_tolerance");
  if (doc.contains("gram")) c.gram = parse_sym(doc["gram"], n, "gram");
  validate_certificate(c);
  return c;
}

std::string certificate_to_json(const Certificate& c) {
  std::ostringstream os;
  os << "{\n";
  if (!c.id.empty()) os << "  \"id\": " << json(c.id).dump() << ",\n";
  os << "  \"monomials\": [";
  for (int i = 0; i < c.size(); ++i) os << (i ? ", " : "") << json(c.monomials[i]).dump();
  os << "],\n  \"bound\": " << format_g17(c.bound) << ",\n  \"objective\": ";
  write_sym(os, c.objective, "  ");
  os << ",\n  \"constraints\": [";
  for (std::size_t i = 0; i < c.constraints.size(); ++i) {
    os << (i ? ",\n" : "\n") << "    {\"multiplier\": " << format_g17(c.constraints[i].multiplier) << ", \"matrix\": ";
    write_sym(os, c.constraints[i].matrix, "    ");
    os << "}";
  }
  os << "\n  ],\n  \"psd_tolerance\": " << format_g17(c.psd_tolerance);
  if (c.gram) {
    os << ",\n  \"gram\": ";
    write_sym(os, *c.gram, "  ");
  }
  os << "\n}\n";
  return os.str();
}

Certificate load_certificate(const std::filesystem::path& path) { return certificate_from_json(read_text_file(path)); }

CrossCheck cross_check_case3(double step, int samples, std::uint64_t seed) {
  CrossCheck r;
  r.grid = claim_numerics(3, step);
  const Certificate cert = builtin_certificate("i3322-case3");
  r.certificate = verify(cert, samples, seed);
  r.gap = cert.bound - r.grid.grid_max;
  r.ok = r.grid.holds() && r.certificate.accepted && r.grid.grid_max <= cert.bound;
  return r;
}

std::string CrossCheck::text() const {
  std::ostringstream os;
  os << "grid: " << to_string(grid.verdict) << ", grid max " << format_fixed12(grid.grid_max) << ", certified "
     << format_fixed12(grid.certified_max) << "\n";
  os << "certificate: " << (certificate.accepted ? "accepted" : "rejected") << ", psd margin "
     << format_g17(certificate.psd_margin);
  if (certificate.schur_margin) os << ", schur " << format_g17(*certificate.schur_margin);
  os << "\ngap t - grid max: " << format_fixed12(gap) << "\n";
  os << "cross-check: " << (ok ? "ok" : "failed") << "\n";
  return os.str();
}

}  // namespace i3322
