#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qipm/ii_qipm.hpp"
#include "qipm/refine.hpp"

namespace qipm {

struct GenConfig {
  int m = 5;
  int n = 10;
  double cond = 2.0;
  double norm_A = 1.0;
  double norm_b = 2.0;
  /// 2-norm target of x* and s* (x* is rescaled afterwards to hit norm_b).
  double solution_norm = 2.0;
  bool degenerate = false;
  std::uint64_t seed = 0;

  void validate() const;
};

/// A = U diag(sv) V^T with prescribed extreme singular values, a random
/// complementary partition, and b, c built from the embedded optimum.
LpProblem generate(const GenConfig& config);

LpProblem problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const LpProblem& problem);

/// Throws IoError when the file cannot be read, SchemaError naming the field
/// on a schema violation.
LpProblem load_json(const std::string& path);
void write_json(const LpProblem& problem, const std::string& path);

/// NAME / ROWS / COLUMNS / RHS / BOUNDS (LO 0 only) / ENDATA. L rows get a +1
/// slack column and G rows a -1 surplus column. Throws UnsupportedFeatureError
/// for RANGES, integer markers and other bound types.
LpProblem load_mps_subset(const std::string& path);

/// Dispatch on extension: .mps reads MPS, anything else JSON.
LpProblem load_problem(const std::string& path);

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path);
std::vector<TraceRow> read_trace_csv(const std::string& path);
void write_ir_trace_csv(const std::vector<IrRound>& rounds, const std::string& path);

}  // namespace qipm
