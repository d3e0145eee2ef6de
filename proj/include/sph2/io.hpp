#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sph2/graph.hpp"
#include "sph2/lti.hpp"
#include "sph2/problem.hpp"

namespace sph2 {

/// Everything a problem file carries: the program, the time constants,
/// the disturbance strengths, and an optional communication graph.
struct ProblemBundle {
  QuadraticProgram problem;
  TimeConstants time_constants;
  DisturbanceConfig disturbance;
  std::optional<OrientedGraph> graph;
};

/// Parses the problem JSON schema (see README). Every parse failure names
/// the offending key.
ProblemBundle parse_problem_json(const nlohmann::json& j);
ProblemBundle load_problem_file(const std::string& path);

/// Graph spec: {"kind": "line|ring|complete|star|explicit", "n": int,
/// "edges": [[i, j], ...]} with 1-based node indices for explicit edges.
OrientedGraph parse_graph_json(const nlohmann::json& j);

nlohmann::json to_json(const StateSpace& sys);  // row-major matrices

/// Shortest round-trip decimal representation ('.' decimal point).
std::string format_double(double x);

/// RFC 4180 field quoting.
std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string timestamp;
};

RunManifest make_manifest(const std::string& command, nlohmann::json config,
                          std::uint64_t seed);
nlohmann::json to_json(const RunManifest& m);

/// Writes m next to the output file at `output_path` + ".manifest.json".
void write_manifest_for(const std::string& output_path, const RunManifest& m);

}  // namespace sph2
