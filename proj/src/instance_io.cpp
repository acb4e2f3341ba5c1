#include "qipm/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "qipm/errors.hpp"

namespace qipm {

using nlohmann::json;

namespace {

Mat random_orthonormal(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat G(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) G(i, j) = normal(rng);
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ() * Mat::Identity(rows, cols);
  // Fix the sign ambiguity so Q does not depend on the QR implementation.
  const Mat R = qr.matrixQR().topLeftCorner(cols, cols);
  for (int j = 0; j < cols; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  return Q;
}

Vec read_vector(const json& j, const char* field, int expected) {
  if (!j.contains(field)) throw SchemaError(std::string("missing field \"") + field + "\"");
  const json& v = j.at(field);
  if (!v.is_array()) throw SchemaError(std::string("field \"") + field + "\" must be an array");
  if (static_cast<int>(v.size()) != expected)
    throw DimensionError(std::string("field \"") + field + "\" has length " + std::to_string(v.size()) +
                         ", expected " + std::to_string(expected));
  Vec out(expected);
  for (int i = 0; i < expected; ++i) {
    if (!v[i].is_number()) throw SchemaError(std::string("field \"") + field + "\" must hold numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

json vector_json(const Vec& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << std::setprecision(17);
  return f;
}

}  // namespace

void GenConfig::validate() const {
  if (!(m >= 1 && m < n)) throw ConfigError("generator needs 1 <= m < n");
  if (!(cond >= 1.0)) throw ConfigError("cond must be >= 1");
  if (!(norm_A > 0.0 && norm_b > 0.0 && solution_norm > 0.0)) throw ConfigError("norms must be positive");
  if (degenerate && m < 2) throw ConfigError("a degenerate instance needs m >= 2");
}

LpProblem generate(const GenConfig& config) {
  config.validate();
  const int m = config.m;
  const int n = config.n;
  std::mt19937_64 rng(config.seed);

  const Mat U = random_orthonormal(m, m, rng);
  const Mat V = random_orthonormal(n, m, rng);
  Vec sv(m);
  sv[0] = config.norm_A;
  if (m > 1) sv[m - 1] = config.norm_A / config.cond;
  {
    std::uniform_real_distribution<double> unif(config.norm_A / config.cond, config.norm_A);
    std::vector<double> mid(std::max(0, m - 2));
    for (auto& v : mid) v = unif(rng);
    std::sort(mid.begin(), mid.end(), std::greater<>());
    for (int i = 0; i < m - 2; ++i) sv[i + 1] = mid[i];
  }
  const Mat A = U * sv.asDiagonal() * V.transpose();

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> pos(0.5, 1.5);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec x = Vec::Zero(n);
  Vec s = Vec::Zero(n);
  for (int k = 0; k < m; ++k) x[perm[k]] = pos(rng);
  for (int k = m; k < n; ++k) s[perm[k]] = pos(rng);
  if (config.degenerate) x[perm[0]] = 0.0;
  x *= config.solution_norm / x.norm();
  s *= config.solution_norm / s.norm();
  Vec y(m);
  for (int i = 0; i < m; ++i) y[i] = normal(rng);
  y *= config.solution_norm / y.norm();

  Vec b = A * x;
  if (!(b.norm() > 0.0)) throw ConfigError("generated right-hand side is zero");
  const double t = config.norm_b / b.norm();
  b *= t;
  x *= t;
  LpProblem p(A, b, A.transpose() * y + s);
  p.x_star = x;
  p.y_star = y;
  p.s_star = s;
  return p;
}

LpProblem problem_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("problem must be a JSON object");
  for (const char* f : {"m", "n", "A", "b", "c"})
    if (!j.contains(f)) throw SchemaError(std::string("missing field \"") + f + "\"");
  if (!j.at("m").is_number_integer() || !j.at("n").is_number_integer())
    throw SchemaError("fields \"m\" and \"n\" must be integers");
  const int m = j.at("m").get<int>();
  const int n = j.at("n").get<int>();
  if (m <= 0 || n <= 0) throw DimensionError("m and n must be positive");
  const json& ja = j.at("A");
  if (!ja.is_array()) throw SchemaError("field \"A\" must be an array");
  Mat A(m, n);
  if (!ja.empty() && ja[0].is_array()) {
    if (static_cast<int>(ja.size()) != m) throw DimensionError("field \"A\" has " + std::to_string(ja.size()) + " rows, expected m=" + std::to_string(m));
    for (int i = 0; i < m; ++i) {
      if (!ja[i].is_array() || static_cast<int>(ja[i].size()) != n)
        throw DimensionError("row " + std::to_string(i) + " of field \"A\" does not have n=" + std::to_string(n) + " entries");
      for (int k = 0; k < n; ++k) {
        if (!ja[i][k].is_number()) throw SchemaError("field \"A\" must hold numbers");
        A(i, k) = ja[i][k].get<double>();
      }
    }
  } else {
    if (static_cast<int>(ja.size()) != m * n)
      throw DimensionError("field \"A\" has " + std::to_string(ja.size()) + " entries, expected m*n=" + std::to_string(m * n));
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < n; ++k) {
        const json& e = ja[static_cast<std::size_t>(i) * n + k];
        if (!e.is_number()) throw SchemaError("field \"A\" must hold numbers");
        A(i, k) = e.get<double>();
      }
  }
  LpProblem p(A, read_vector(j, "b", m), read_vector(j, "c", n));
  if (j.contains("x_star")) p.x_star = read_vector(j, "x_star", n);
  if (j.contains("y_star")) p.y_star = read_vector(j, "y_star", m);
  if (j.contains("s_star")) p.s_star = read_vector(j, "s_star", n);
  return p;
}

json problem_to_json(const LpProblem& p) {
  json j;
  j["m"] = p.m();
  j["n"] = p.n();
  json rows = json::array();
  for (int i = 0; i < p.m(); ++i) {
    std::vector<double> row(p.n());
    for (int k = 0; k < p.n(); ++k) row[k] = p.A(i, k);
    rows.push_back(row);
  }
  j["A"] = rows;
  j["b"] = vector_json(p.b);
  j["c"] = vector_json(p.c);
  if (p.x_star) j["x_star"] = vector_json(*p.x_star);
  if (p.y_star) j["y_star"] = vector_json(*p.y_star);
  if (p.s_star) j["s_star"] = vector_json(*p.s_star);
  return j;
}

LpProblem load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return problem_from_json(j);
}

void write_json(const LpProblem& problem, const std::string& path) {
  std::ofstream f = open_out(path);
  f << problem_to_json(problem).dump(2) << '\n';
  if (!f) throw IoError("failed writing " + path);
}

LpProblem load_mps_subset(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);

  enum class Sec { None, Rows, Columns, Rhs, Bounds, Done };
  Sec sec = Sec::None;
  std::string objective;
  std::vector<std::string> row_names;
  std::map<std::string, char> row_type;
  std::map<std::string, int> row_index;
  std::vector<std::string> col_names;
  std::map<std::string, int> col_index;
  std::map<std::pair<int, int>, double> entries;
  std::map<int, double> cost;
  std::map<int, double> rhs;

  auto value = [&](const std::string& tok, int line) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw SchemaError(path + ":" + std::to_string(line) + ": bad number \"" + tok + "\"");
    }
  };

  std::string raw;
  int line = 0;
  while (std::getline(f, raw)) {
    ++line;
    if (raw.empty() || raw[0] == '*') continue;
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const bool header = raw[0] != ' ' && raw[0] != '\t';
    if (header) {
      const std::string& h = tok[0];
      if (h == "NAME") sec = Sec::None;
      else if (h == "ROWS") sec = Sec::Rows;
      else if (h == "COLUMNS") sec = Sec::Columns;
      else if (h == "RHS") sec = Sec::Rhs;
      else if (h == "BOUNDS") sec = Sec::Bounds;
      else if (h == "ENDATA") { sec = Sec::Done; break; }
      else throw UnsupportedFeatureError(path + ":" + std::to_string(line) + ": unsupported section " + h);
      continue;
    }
    switch (sec) {
      case Sec::Rows: {
        if (tok.size() != 2) throw SchemaError(path + ":" + std::to_string(line) + ": ROWS entry needs type and name");
        const char t = tok[0].size() == 1 ? tok[0][0] : '?';
        if (t != 'N' && t != 'L' && t != 'G' && t != 'E')
          throw UnsupportedFeatureError(path + ":" + std::to_string(line) + ": row type " + tok[0]);
        row_type[tok[1]] = t;
        if (t == 'N') {
          if (objective.empty()) objective = tok[1];
        } else {
          row_index[tok[1]] = static_cast<int>(row_names.size());
          row_names.push_back(tok[1]);
        }
        break;
      }
      case Sec::Columns: {
        if (std::find(tok.begin(), tok.end(), "'MARKER'") != tok.end())
          throw UnsupportedFeatureError(path + ":" + std::to_string(line) + ": integer markers");
        if (tok.size() != 3 && tok.size() != 5) throw SchemaError(path + ":" + std::to_string(line) + ": malformed COLUMNS entry");
        auto [it, fresh] = col_index.try_emplace(tok[0], static_cast<int>(col_names.size()));
        if (fresh) col_names.push_back(tok[0]);
        const int j = it->second;
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          const double v = value(tok[k + 1], line);
          if (!row_type.count(tok[k])) throw SchemaError(path + ":" + std::to_string(line) + ": unknown row " + tok[k]);
          if (tok[k] == objective) cost[j] += v;
          else if (row_type[tok[k]] != 'N') entries[{row_index[tok[k]], j}] += v;
        }
        break;
      }
      case Sec::Rhs: {
        if (tok.size() != 3 && tok.size() != 5) throw SchemaError(path + ":" + std::to_string(line) + ": malformed RHS entry");
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          if (!row_type.count(tok[k])) throw SchemaError(path + ":" + std::to_string(line) + ": unknown row " + tok[k]);
          if (row_type[tok[k]] == 'N') continue;
          rhs[row_index[tok[k]]] = value(tok[k + 1], line);
        }
        break;
      }
      case Sec::Bounds: {
        if (tok.size() != 4 || tok[0] != "LO" || value(tok[3], line) != 0.0)
          throw UnsupportedFeatureError(path + ":" + std::to_string(line) + ": only LO bounds of 0 are supported");
        if (!col_index.count(tok[2])) throw SchemaError(path + ":" + std::to_string(line) + ": unknown column " + tok[2]);
        break;
      }
      default:
        throw SchemaError(path + ":" + std::to_string(line) + ": data outside a section");
    }
  }
  if (sec != Sec::Done) throw SchemaError(path + ": missing ENDATA");
  const int m = static_cast<int>(row_names.size());
  int slacks = 0;
  for (const auto& r : row_names) slacks += row_type[r] != 'E';
  const int n0 = static_cast<int>(col_names.size());
  const int n = n0 + slacks;
  if (m == 0 || n0 == 0) throw SchemaError(path + ": no constraints or no columns");
  Mat A = Mat::Zero(m, n);
  for (const auto& [ij, v] : entries) A(ij.first, ij.second) = v;
  int next = n0;
  for (int i = 0; i < m; ++i) {
    const char t = row_type[row_names[i]];
    if (t == 'L') A(i, next++) = 1.0;
    else if (t == 'G') A(i, next++) = -1.0;
  }
  Vec b = Vec::Zero(m);
  for (const auto& [i, v] : rhs) b[i] = v;
  Vec c = Vec::Zero(n);
  for (const auto& [j, v] : cost) c[j] = v;
  return LpProblem(A, b, c);
}

LpProblem load_problem(const std::string& path) {
  const auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext == "mps" ? load_mps_subset(path) : load_json(path);
}

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path) {
  std::ofstream f = open_out(path);
  f << "iter,mu,alpha_hat,alpha_tilde,norm_rp,norm_rd,mnes_residual,kappa_mnes,kappa_nes,solver_calls,theta\n";
  for (const auto& r : trace) {
    f << r.iter << ',' << r.mu << ',' << r.alpha_hat << ',' << r.alpha_tilde << ',' << r.norm_rp << ','
      << r.norm_rd << ',' << r.mnes_residual << ',' << r.kappa_mnes << ',' << r.kappa_nes << ','
      << r.solver_calls << ',' << r.theta << '\n';
  }
  if (!f) throw IoError("failed writing " + path);
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  std::string line;
  std::getline(f, line);
  std::vector<TraceRow> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> cells;
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (cells.size() != 11) throw SchemaError(path + ": trace row with " + std::to_string(cells.size()) + " columns");
    TraceRow r;
    r.iter = std::stoi(cells[0]);
    r.mu = std::stod(cells[1]);
    r.alpha_hat = std::stod(cells[2]);
    r.alpha_tilde = std::stod(cells[3]);
    r.norm_rp = std::stod(cells[4]);
    r.norm_rd = std::stod(cells[5]);
    r.mnes_residual = std::stod(cells[6]);
    r.kappa_mnes = std::stod(cells[7]);
    r.kappa_nes = std::stod(cells[8]);
    r.solver_calls = std::stoi(cells[9]);
    r.theta = std::stod(cells[10]);
    out.push_back(r);
  }
  return out;
}

void write_ir_trace_csv(const std::vector<IrRound>& rounds, const std::string& path) {
  std::ofstream f = open_out(path);
  f << "round,nabla,r,inner_iters,max_kappa_mnes\n";
  for (const auto& r : rounds)
    f << r.round << ',' << r.nabla << ',' << r.r << ',' << r.inner_iters << ',' << r.max_kappa_mnes << '\n';
  if (!f) throw IoError("failed writing " + path);
}

}  // namespace qipm
