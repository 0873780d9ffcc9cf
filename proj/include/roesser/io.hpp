#pragma once

#include <string>
#include <string_view>

#include "roesser/certify.hpp"
#include "roesser/model.hpp"
#include "roesser/oracle.hpp"
#include "roesser/sim.hpp"

namespace roesser {

/// Parses a model document:
///   {"name": "...", "n": 2, "kinds": ["shift", "derivative"],
///    "blocks": [[A11, A12], [A21, A22]]}
/// with every block a nonempty array of equal-length rows of numbers.
/// Throws ParseError naming the offending field.
NdRoesserModel parse_model(std::string_view text);
NdRoesserModel load_model_file(const std::string& path);

/// Shortest round-trip decimal rendering of every entry.
std::string emit_model(const NdRoesserModel& m);

struct OracleContext {
  std::string model_name;
  std::size_t n = 2;
  SweepConfig config;
};

std::string oracle_text(const OracleVerdict& v, const OracleContext& ctx);
std::string oracle_json(const OracleVerdict& v, const OracleContext& ctx);

std::string certify_text(const CertificationReport& r);
std::string certify_json(const CertificationReport& r);

std::string sim_text(const SimReport& r);
std::string sim_json(const SimReport& r);

/// {"command": ..., "error": ...}
std::string error_json(std::string_view command, std::string_view message);

}  // namespace roesser
