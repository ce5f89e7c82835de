#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "i3322/bell.hpp"
#include "i3322/io_format.hpp"

namespace i3322 {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& j, int dim, const std::string& field) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ValidationError(field, "expected " + std::to_string(dim) + " rows");
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ValidationError(field, "row " + std::to_string(r) + " must have " + std::to_string(dim) + " entries");
    }
    for (int c = 0; c < dim; ++c) {
      if (!row[c].is_number()) throw ValidationError(field, "non-numeric entry");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

void write_matrix(std::ostream& os, const Matrix& m, const char* indent) {
  os << "[\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << indent << "  [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ", ";
      os << format_g17(m(r, c));
    }
    os << "]" << (r + 1 < m.rows() ? "," : "") << "\n";
  }
  os << indent << "]";
}

}  // namespace

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_fixed12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  // Avoid "-0.000000000000".
  if (std::string_view(buf) == "-0.000000000000") return "0.000000000000";
  return buf;
}

nlohmann::json parse_json_document(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("json", e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("file", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("file", "cannot write " + path.string());
  out << text;
}

std::string strategy_to_json(const Strategy& s) {
  std::ostringstream os;
  os << "{\n  \"dim\": " << s.dim() << ",\n  \"schmidt\": [";
  for (int i = 0; i < s.dim(); ++i) os << (i ? ", " : "") << format_g17(s.schmidt()(i));
  os << "],\n";
  const char* names[2] = {"A", "B"};
  for (int side = 0; side < 2; ++side) {
    const auto& ops = side == 0 ? s.alice() : s.bob();
    os << "  \"" << names[side] << "\": [\n";
    for (int k = 0; k < 3; ++k) {
      os << "    ";
      write_matrix(os, ops[k].matrix(), "    ");
      os << (k < 2 ? ",\n" : "\n");
    }
    os << "  ]" << (side == 0 ? ",\n" : "\n");
  }
  os << "}\n";
  return os.str();
}

Strategy strategy_from_json(std::string_view text) {
  const json doc = parse_json_document(text);
  if (!doc.is_object()) throw ValidationError("json", "top level must be an object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) {
    throw ValidationError("dim", "missing or not an integer");
  }
  const int dim = doc["dim"].get<int>();
  if (dim < 1) throw ValidationError("dim", "must be positive");

  Vector schmidt = uniform_schmidt(dim);
  if (doc.contains("schmidt")) {
    const json& w = doc["schmidt"];
    if (!w.is_array() || static_cast<int>(w.size()) != dim) {
      throw ValidationError("schmidt", "expected an array of " + std::to_string(dim) + " reals");
    }
    for (int i = 0; i < dim; ++i) {
      if (!w[i].is_number()) throw ValidationError("schmidt", "non-numeric weight");
      schmidt(i) = w[i].get<double>();
    }
  }

  std::array<Matrix, 6> ops;
  const char* sides[2] = {"A", "B"};
  for (int side = 0; side < 2; ++side) {
    if (!doc.contains(sides[side]) || !doc[sides[side]].is_array() || doc[sides[side]].size() != 3) {
      throw ValidationError(sides[side], "expected an array of three matrices");
    }
    for (int k = 0; k < 3; ++k) {
      const std::string field = std::string(sides[side]) + std::to_string(k + 1);
      ops[3 * side + k] = parse_matrix(doc[sides[side]][k], dim, field);
    }
  }
  return Strategy::from_matrices(schmidt, ops);
}

Strategy load_strategy(const std::filesystem::path& path) { return strategy_from_json(read_text_file(path)); }

void save_strategy(const Strategy& s, const std::filesystem::path& path) {
  write_text_file(path, strategy_to_json(s));
}

}  // namespace i3322
