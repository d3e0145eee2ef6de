#include "sph2/io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>

namespace sph2 {

namespace {

using nlohmann::json;

[[noreturn]] void key_error(const std::string& key, const std::string& what) {
  throw ValidationError("problem JSON key '" + key + "': " + what);
}

const json& require_key(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ValidationError("problem JSON: missing key '" + key + "'");
  return j.at(key);
}

double parse_number(const json& j, const std::string& key) {
  const json& v = require_key(j, key);
  if (!v.is_number()) key_error(key, "expected a number");
  return v.get<double>();
}

Vector parse_vector(const json& v, const std::string& key) {
  if (!v.is_array()) key_error(key, "expected an array of numbers");
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (const auto& e : v) {
    if (!e.is_number()) key_error(key, "expected an array of numbers");
    out(i++) = e.get<double>();
  }
  return out;
}

// Accepts a scalar or an array; scalars broadcast downstream.
Vector parse_scalar_or_vector(const json& j, const std::string& key) {
  const json& v = require_key(j, key);
  if (v.is_number()) return Vector::Constant(1, v.get<double>());
  return parse_vector(v, key);
}

Matrix parse_matrix(const json& j, const std::string& key) {
  const json& v = require_key(j, key);
  if (!v.is_array() || v.empty() || !v.front().is_array())
    key_error(key, "expected row-major nested arrays");
  const Index rows = static_cast<Index>(v.size());
  const Index cols = static_cast<Index>(v.front().size());
  Matrix out(rows, cols);
  Index r = 0;
  for (const auto& row : v) {
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      key_error(key, "rows must all have the same length");
    Index c = 0;
    for (const auto& e : row) {
      if (!e.is_number()) key_error(key, "entries must be numbers");
      out(r, c++) = e.get<double>();
    }
    ++r;
  }
  return out;
}

// "Q" holds the diagonal as a flat array; a nested array is accepted only
// when it is literally a diagonal matrix.
Vector parse_q(const json& j) {
  const json& v = require_key(j, "Q");
  if (v.is_array() && !v.empty() && v.front().is_array()) {
    const Matrix M = parse_matrix(j, "Q");
    if (M.rows() != M.cols()) key_error("Q", "matrix form must be square");
    for (Index r = 0; r < M.rows(); ++r)
      for (Index c = 0; c < M.cols(); ++c)
        if (r != c && M(r, c) != 0.0)
          key_error("Q", "must be diagonal; off-diagonal entry at (" + std::to_string(r + 1) +
                             "," + std::to_string(c + 1) + ") is nonzero");
    return M.diagonal();
  }
  return parse_vector(v, "Q");
}

}  // namespace

OrientedGraph parse_graph_json(const json& j) {
  if (!j.is_object()) throw ValidationError("problem JSON key 'graph': expected an object");
  if (!j.contains("kind")) throw ValidationError("problem JSON key 'graph': missing 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (!j.contains("n")) throw ValidationError("problem JSON key 'graph': missing 'n'");
  if (!j.at("n").is_number_integer())
    throw ValidationError("problem JSON key 'graph.n': expected an integer");
  const Index n = j.at("n").get<Index>();
  if (kind == "line") return OrientedGraph::line(n);
  if (kind == "ring") return OrientedGraph::ring(n);
  if (kind == "complete") return OrientedGraph::complete(n);
  if (kind == "star") return OrientedGraph::star(n);
  if (kind == "explicit") {
    if (!j.contains("edges"))
      throw ValidationError("problem JSON key 'graph': kind 'explicit' requires 'edges'");
    std::vector<std::pair<Index, Index>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer())
        throw ValidationError("problem JSON key 'graph.edges': each edge must be [i, j]");
      // File edges are 1-based.
      edges.emplace_back(e[0].get<Index>() - 1, e[1].get<Index>() - 1);
    }
    return OrientedGraph::from_edges(n, std::move(edges));
  }
  throw ValidationError("problem JSON key 'graph.kind': unknown kind '" + kind +
                        "' (expected line|ring|complete|star|explicit)");
}

ProblemBundle parse_problem_json(const json& j) {
  if (!j.is_object()) throw ValidationError("problem JSON: top level must be an object");
  static const std::set<std::string> known = {"Q",     "c",     "S",   "W_b", "b",
                                              "tau_x", "tau_nu", "t_c", "t_b", "tau_delta",
                                              "tau_mu", "graph"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw ValidationError("problem JSON: unknown key '" + key + "'");

  ProblemBundle out;
  out.problem.q = parse_q(j);
  out.problem.c = parse_vector(require_key(j, "c"), "c");
  out.problem.S = parse_matrix(j, "S");
  out.problem.W_b = parse_matrix(j, "W_b");
  out.problem.b = parse_vector(require_key(j, "b"), "b");
  out.time_constants.tau_x = parse_scalar_or_vector(j, "tau_x");
  out.time_constants.tau_nu = parse_scalar_or_vector(j, "tau_nu");
  if (j.contains("tau_delta"))
    out.time_constants.tau_delta = parse_scalar_or_vector(j, "tau_delta");
  if (j.contains("tau_mu")) out.time_constants.tau_mu = parse_scalar_or_vector(j, "tau_mu");
  out.disturbance.t_c = parse_number(j, "t_c");
  out.disturbance.t_b = parse_number(j, "t_b");
  if (out.disturbance.t_c < 0) key_error("t_c", "must be >= 0");
  if (out.disturbance.t_b < 0) key_error("t_b", "must be >= 0");
  if (j.contains("graph")) out.graph = parse_graph_json(j.at("graph"));
  return out;
}

ProblemBundle load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open problem file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("problem file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_problem_json(j);
}

namespace {

json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json to_json(const StateSpace& sys) {
  json j;
  j["A"] = matrix_to_json(sys.A);
  j["B"] = matrix_to_json(sys.B);
  j["C"] = matrix_to_json(sys.C);
  j["state_labels"] = sys.state_labels;
  j["input_labels"] = sys.input_labels;
  j["output_labels"] = sys.output_labels;
  return j;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_escape(fields[i]);
  }
  os << "\r\n";
}

RunManifest make_manifest(const std::string& command, json config, std::uint64_t seed) {
  RunManifest m;
  m.command = command;
  m.config = std::move(config);
  m.tool_version = SPH2_VERSION;
  m.seed = seed;
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm_utc{};
  gmtime_r(&tt, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  m.timestamp = buf;
  return m;
}

json to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["config"] = m.config;
  j["tool_version"] = m.tool_version;
  j["seed"] = m.seed;
  j["timestamp"] = m.timestamp;
  return j;
}

void write_manifest_for(const std::string& output_path, const RunManifest& m) {
  std::ofstream out(output_path + ".manifest.json");
  if (!out) throw ValidationError("cannot write manifest for '" + output_path + "'");
  out << to_json(m).dump(2) << "\n";
}

}  // namespace sph2
