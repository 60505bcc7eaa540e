#include "choigram/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace choigram {

using nlohmann::json;

namespace {

constexpr const char* kConvention = "column-stacking";

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::runtime_error(what + ": entries must be [re, im] number pairs");
  }
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::runtime_error(what + ": non-finite entry rejected");
  }
  return z;
}

const json& require_field(const json& j, const char* key, const std::string& what) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw std::runtime_error(what + ": missing field '" + key + "'");
  }
  return *it;
}

}  // namespace

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                               const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    std::ostringstream msg;
    msg << what << ": expected " << rows << " rows";
    throw std::runtime_error(msg.str());
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      std::ostringstream msg;
      msg << what << ": row " << i << " must hold " << cols << " entries";
      throw std::runtime_error(msg.str());
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = complex_from_json(row[static_cast<std::size_t>(c)], what);
    }
  }
  return m;
}

LoadedChannel parse_channel_json(const json& j) {
  const std::string what = "channel file";
  if (!j.is_object()) throw std::runtime_error(what + ": top-level JSON object required");

  const json& dim_field = require_field(j, "dim", what);
  if (!dim_field.is_number_integer() || dim_field.get<long>() < 1) {
    throw std::runtime_error(what + ": 'dim' must be a positive integer");
  }
  const Eigen::Index d = dim_field.get<Eigen::Index>();

  const std::string representation =
      require_field(j, "representation", what).get<std::string>();
  const std::string convention = require_field(j, "convention", what).get<std::string>();
  if (convention != kConvention) {
    throw std::runtime_error(what + ": convention must be '" + kConvention + "', got '" +
                             convention + "'");
  }
  const json& entries = require_field(j, "entries", what);

  if (representation == "superop") {
    return LoadedChannel{representation,
                         Superoperator(d, matrix_from_json(entries, d * d, d * d, what))};
  }
  if (representation == "kraus") {
    if (!entries.is_array() || entries.empty()) {
      throw std::runtime_error(what + ": 'entries' must list Kraus matrices");
    }
    std::vector<ComplexMatrix> ops;
    ops.reserve(entries.size());
    for (const auto& op : entries) ops.push_back(matrix_from_json(op, d, d, what));
    return LoadedChannel{representation, kraus_to_superop(KrausChannel(d, std::move(ops)))};
  }
  if (representation == "choi") {
    const bool normalized = j.value("normalized", false);
    const ChoiOperator choi(d, HermitianMatrix(matrix_from_json(entries, d * d, d * d, what)),
                            normalized);
    return LoadedChannel{representation, superop_from_choi(choi)};
  }
  throw std::runtime_error(what + ": unknown representation '" + representation +
                           "' (expected kraus, superop, or choi)");
}

LoadedChannel load_channel_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("channel file: cannot open '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("channel file: JSON parse failure in '" + path +
                             "': " + e.what());
  }
  return parse_channel_json(j);
}

json channel_json(const KrausChannel& k) {
  json ops = json::array();
  for (const auto& op : k.kraus_ops) ops.push_back(matrix_json(op));
  return json{{"dim", k.dim},
              {"representation", "kraus"},
              {"convention", kConvention},
              {"entries", std::move(ops)}};
}

json channel_json(const Superoperator& s) {
  return json{{"dim", s.dim},
              {"representation", "superop"},
              {"convention", kConvention},
              {"entries", matrix_json(s.matrix)}};
}

json channel_json(const ChoiOperator& j) {
  return json{{"dim", j.dim},
              {"representation", "choi"},
              {"convention", kConvention},
              {"normalized", j.normalized},
              {"entries", matrix_json(j.matrix.matrix())}};
}

json gram_json(const GramMatrix& g, const UnitaryBasis& basis) {
  json order = json::array();
  for (std::size_t i = 0; i < basis.elements.size(); ++i) order.push_back(i);
  return json{{"basis", basis.name},
              {"order", std::move(order)},
              {"entries", matrix_json(g.entries.matrix())},
              {"min_eigenvalue", g.min_eigenvalue},
              {"source_trace", g.source_trace},
              {"source_dim", g.source_dim}};
}

json char_table_json(const CharFunctionTable& table, const UnitaryBasis& basis) {
  json order = json::array();
  for (std::size_t i = 0; i < basis.elements.size(); ++i) order.push_back(i);
  json values = json::array();
  for (const auto& v : table.values) values.push_back(complex_json(v));
  return json{{"basis", table.basis}, {"order", std::move(order)},
              {"values", std::move(values)}};
}

std::string format_float(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace choigram
