#include "roesser/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "roesser/errors.hpp"

namespace roesser {

using json = nlohmann::ordered_json;

namespace {

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const json& require_field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(key, "missing field");
  return *it;
}

CMatrix parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a nonempty array of rows");
  std::size_t cols = 0;
  std::vector<Complex> entries;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = index_path(path, r);
    const json& row = j[r];
    if (!row.is_array() || row.empty()) throw ParseError(rp, "expected a nonempty array of numbers");
    if (r == 0) cols = row.size();
    if (row.size() != cols) {
      throw ParseError(rp, "row has " + std::to_string(row.size()) + " entries, expected " +
                               std::to_string(cols));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!row[c].is_number()) throw ParseError(index_path(rp, c), "expected a number");
      const double v = row[c].get<double>();
      if (!std::isfinite(v)) throw ParseError(index_path(rp, c), "entry is not finite");
      entries.emplace_back(v, 0.0);
    }
  }
  return CMatrix(j.size(), cols, std::move(entries));
}

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

json matrix_json(const CMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ri = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json point_json(const ExtendedPoint& p) {
  if (p.infinite) return json{{"infinite", true}, {"re", nullptr}, {"im", nullptr}};
  return json{{"infinite", false}, {"re", p.value.real()}, {"im", p.value.imag()}};
}

json boundary_point_json(const BoundaryPoint& p) {
  json j = point_json(p.point);
  j["angle"] = number(p.source_angle);
  return j;
}

json sweep_config_json(const SweepConfig& c) {
  return json{{"samples_per_dim", c.samples_per_dim},
              {"margin_tol", c.margin_tol},
              {"include_infinity", c.include_infinity}};
}

json oracle_body(const OracleVerdict& v) {
  json pts = json::array();
  for (const auto& p : v.worst_point) pts.push_back(boundary_point_json(p));
  return json{{"status", std::string(to_string(v.status))},
              {"stage", std::string(to_string(v.stage))},
              {"worst_value", number(v.worst_value)},
              {"worst_point", std::move(pts)},
              {"samples_checked", v.samples_checked},
              {"max_adjacent_change", number(v.max_adjacent_change)},
              {"diagnostic", v.diagnostic}};
}

json boundary_check_json(const BoundaryCheck& b) {
  return json{{"passed", b.passed},
              {"samples_checked", b.samples_checked},
              {"max_stein", number(b.max_stein)},
              {"min_p", number(b.min_p)},
              {"worst_point", boundary_point_json(b.worst_point)},
              {"y_ok", b.y_ok},
              {"diagnostic", b.diagnostic}};
}

json interior_json(const InteriorResult& r) {
  return json{{"passed", r.passed},
              {"samples_checked", r.samples_checked},
              {"worst_point", point_json(r.worst_point)},
              {"worst_stein", number(r.worst_stein)},
              {"min_p", number(r.min_p)},
              {"diagnostic", r.diagnostic}};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_complex(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

std::string fmt_point(const ExtendedPoint& p) { return p.infinite ? "inf" : fmt_complex(p.value); }

void matrix_text(std::ostringstream& os, const CMatrix& m, const std::string& indent) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << indent << "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      os << (j ? ", " : "") << (m(i, j).imag() == 0.0 ? fmt(m(i, j).real()) : fmt_complex(m(i, j)));
    }
    os << "]\n";
  }
}

void oracle_lines(std::ostringstream& os, const OracleVerdict& v, const std::string& indent) {
  os << indent << "status: " << to_string(v.status) << " (stage " << to_string(v.stage) << ")\n";
  os << indent << "worst value: " << fmt(v.worst_value) << "\n";
  if (!v.worst_point.empty()) {
    os << indent << "worst delta:";
    for (const auto& p : v.worst_point) os << " " << fmt_point(p.point);
    os << "\n";
  }
  os << indent << "samples checked: " << v.samples_checked << "\n";
  os << indent << "max adjacent change: " << fmt(v.max_adjacent_change) << "\n";
  if (!v.diagnostic.empty()) os << indent << "diagnostic: " << v.diagnostic << "\n";
}

}  // namespace

NdRoesserModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", e.what());
  }
  if (!doc.is_object()) throw ParseError("", "model document must be an object");
  std::string name;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("name", "expected a string");
    name = it->get<std::string>();
  }
  const json& jn = require_field(doc, "n");
  if (!jn.is_number_integer() || jn.get<long long>() < 2)
    throw ParseError("n", "expected an integer >= 2");
  const auto n = static_cast<std::size_t>(jn.get<long long>());
  if (n > 16) throw ParseError("n", "more than 16 dimensions is not supported");

  const json& jk = require_field(doc, "kinds");
  if (!jk.is_array() || jk.size() != n)
    throw ParseError("kinds", "expected an array of " + std::to_string(n) + " kinds");
  std::vector<DimensionKind> kinds;
  for (std::size_t i = 0; i < n; ++i) {
    const auto kind = jk[i].is_string() ? parse_kind(jk[i].get<std::string>()) : std::nullopt;
    if (!kind) throw ParseError(index_path("kinds", i), "expected \"shift\" or \"derivative\"");
    kinds.push_back(*kind);
  }

  const json& jb = require_field(doc, "blocks");
  if (!jb.is_array() || jb.size() != n)
    throw ParseError("blocks", "expected " + std::to_string(n) + " block rows");
  std::vector<std::vector<CMatrix>> blocks(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string rp = index_path("blocks", i);
    if (!jb[i].is_array() || jb[i].size() != n)
      throw ParseError(rp, "expected " + std::to_string(n) + " blocks");
    for (std::size_t j = 0; j < n; ++j) blocks[i].push_back(parse_matrix(jb[i][j], index_path(rp, j)));
  }
  std::vector<std::size_t> sizes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CMatrix& d = blocks[i][i];
    if (!d.is_square()) {
      throw ParseError(index_path(index_path("blocks", i), i),
                       "diagonal block must be square, got " + std::to_string(d.rows()) + "x" +
                           std::to_string(d.cols()));
    }
    sizes[i] = d.rows();
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const CMatrix& b = blocks[i][j];
      if (b.rows() != sizes[i] || b.cols() != sizes[j]) {
        throw ParseError(index_path(index_path("blocks", i), j),
                         "block is " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                             ", expected " + std::to_string(sizes[i]) + "x" +
                             std::to_string(sizes[j]));
      }
    }
  }
  try {
    return NdRoesserModel(std::move(blocks), std::move(kinds), std::move(name));
  } catch (const Error& e) {
    throw ParseError("blocks", e.what());
  }
}

NdRoesserModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("", "cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_model(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path, e);
  }
}

std::string emit_model(const NdRoesserModel& m) {
  json doc;
  doc["name"] = m.name();
  doc["n"] = m.n();
  json kinds = json::array();
  for (std::size_t i = 0; i < m.n(); ++i) kinds.push_back(std::string(to_string(m.kinds()[i])));
  doc["kinds"] = std::move(kinds);
  json blocks = json::array();
  for (std::size_t i = 0; i < m.n(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.n(); ++j) {
      const CMatrix& b = m.block(i, j);
      json mat = json::array();
      for (std::size_t r = 0; r < b.rows(); ++r) {
        json mr = json::array();
        for (std::size_t c = 0; c < b.cols(); ++c) mr.push_back(b(r, c).real());
        mat.push_back(std::move(mr));
      }
      row.push_back(std::move(mat));
    }
    blocks.push_back(std::move(row));
  }
  doc["blocks"] = std::move(blocks);
  return doc.dump(2) + "\n";
}

std::string oracle_json(const OracleVerdict& v, const OracleContext& ctx) {
  json j{{"command", "oracle"}, {"model", ctx.model_name}, {"n", ctx.n}};
  j["verdict"] = std::string(to_string(v.status));
  j["oracle"] = oracle_body(v);
  j["config"] = sweep_config_json(ctx.config);
  return j.dump(2) + "\n";
}

std::string oracle_text(const OracleVerdict& v, const OracleContext& ctx) {
  std::ostringstream os;
  os << "model: " << (ctx.model_name.empty() ? "(unnamed)" : ctx.model_name) << " (n = " << ctx.n
     << ")\n";
  os << "verdict: " << to_string(v.status) << "\n";
  oracle_lines(os, v, "  ");
  if (v.status == OracleStatus::Unstable && !v.worst_point.empty()) {
    os << "counterexample: eigenvalue of M outside the stability region at delta =";
    for (const auto& p : v.worst_point) os << " " << fmt_point(p.point);
    os << "\n";
  }
  return os.str();
}

std::string certify_json(const CertificationReport& r) {
  json j{{"command", "certify"}, {"model", r.model_name}, {"n", r.n}};
  j["verdict"] = std::string(to_string(r.verdict));
  j["certifying_degree"] = r.certifying_degree ? json(*r.certifying_degree) : json(nullptr);
  j["basis"] = std::string(to_string(r.basis));
  j["eps"] = number(r.eps);
  j["sdp_margin"] = number(r.sdp_margin);
  j["y"] = r.y ? matrix_json(*r.y) : json(nullptr);
  if (r.p) {
    json ps = json::array();
    for (const auto& c : r.p->coeffs) ps.push_back(matrix_json(c));
    j["p"] = std::move(ps);
  } else {
    j["p"] = nullptr;
  }
  j["a22"] = r.a22 ? oracle_body(*r.a22) : json(nullptr);
  j["boundary_sweep"] = r.boundary_sweep ? oracle_body(*r.boundary_sweep) : json(nullptr);
  j["boundary_check"] = r.boundary_check ? boundary_check_json(*r.boundary_check) : json(nullptr);
  j["interior"] = r.interior ? interior_json(*r.interior) : json(nullptr);
  json atts = json::array();
  for (const auto& a : r.attempts) {
    atts.push_back(json{{"degree", a.degree},
                        {"round", a.round},
                        {"lmi_samples", a.lmi_samples},
                        {"num_vars", a.num_vars},
                        {"sdp_status", std::string(to_string(a.sdp_status))},
                        {"margin", number(a.margin)},
                        {"upper_bound", number(a.upper_bound)},
                        {"iterations", a.iterations},
                        {"boundary", a.boundary ? boundary_check_json(*a.boundary) : json(nullptr)},
                        {"interior", a.interior ? interior_json(*a.interior) : json(nullptr)},
                        {"note", a.note}});
  }
  j["attempts"] = std::move(atts);
  json samples = json::array();
  for (const auto& s : r.lmi_samples) samples.push_back(boundary_point_json(s));
  j["lmi_samples"] = std::move(samples);
  const auto& c = r.config;
  j["config"] = json{{"min_degree", c.min_degree},
                     {"max_degree", c.max_degree},
                     {"basis", std::string(to_string(c.basis))},
                     {"coarse_samples", c.coarse_samples},
                     {"refine_rounds", c.refine_rounds},
                     {"refine_points", c.refine_points},
                     {"eps", c.eps},
                     {"sweep", sweep_config_json(c.sweep)},
                     {"sdp",
                      {{"feas_tol", c.sdp.feas_tol},
                       {"gap_tol", c.sdp.gap_tol},
                       {"rel_gap_tol", c.sdp.rel_gap_tol},
                       {"max_iterations", c.sdp.max_iterations},
                       {"path_factor", c.sdp.path_factor}}}};
  json wt = json::object();
  for (const auto& [stage, secs] : r.wall_time) wt[stage] = secs;
  j["wall_time"] = std::move(wt);
  j["diagnostic"] = r.diagnostic;
  return j.dump(2) + "\n";
}

std::string certify_text(const CertificationReport& r) {
  std::ostringstream os;
  os << "model: " << (r.model_name.empty() ? "(unnamed)" : r.model_name) << " (n = " << r.n << ")\n";
  os << "verdict: " << to_string(r.verdict) << "\n";
  if (r.certifying_degree) os << "certifying degree: " << *r.certifying_degree << "\n";
  if (r.n == 2) os << "basis: " << to_string(r.basis) << ", eps: " << fmt(r.eps) << "\n";
  if (r.a22) {
    os << "A22 check:\n";
    oracle_lines(os, *r.a22, "  ");
  }
  if (r.boundary_sweep) {
    os << "boundary sweep:\n";
    oracle_lines(os, *r.boundary_sweep, "  ");
  }
  if (!r.attempts.empty()) {
    os << "attempts:\n";
    for (const auto& a : r.attempts) {
      os << "  degree " << a.degree << " round " << a.round << ": sdp " << to_string(a.sdp_status)
         << ", margin " << fmt(a.margin) << ", upper bound " << fmt(a.upper_bound) << ", "
         << a.lmi_samples << " samples, " << a.num_vars << " vars, " << a.iterations
         << " iterations";
      if (a.boundary) os << ", boundary " << (a.boundary->passed ? "pass" : "fail");
      if (a.interior) os << ", interior " << (a.interior->passed ? "pass" : "fail");
      if (!a.note.empty()) os << " (" << a.note << ")";
      os << "\n";
    }
  }
  if (r.verdict == CertifyVerdict::CertifiedStable) {
    os << "sdp margin: " << fmt(r.sdp_margin) << "\n";
    if (r.boundary_check) {
      os << "fine boundary check: max stein eigenvalue " << fmt(r.boundary_check->max_stein)
         << ", min P eigenvalue " << fmt(r.boundary_check->min_p) << " over "
         << r.boundary_check->samples_checked << " samples\n";
    }
    if (r.interior) {
      os << "interior check: max stein eigenvalue " << fmt(r.interior->worst_stein) << " at "
         << fmt_point(r.interior->worst_point) << ", min P eigenvalue " << fmt(r.interior->min_p)
         << " over " << r.interior->samples_checked << " samples\n";
    }
    if (r.y) {
      os << "Y =\n";
      matrix_text(os, *r.y, "  ");
    }
    if (r.p) {
      for (std::size_t i = 0; i < r.p->coeffs.size(); ++i) {
        os << "P_" << i << " =\n";
        matrix_text(os, r.p->coeffs[i], "  ");
      }
    }
  }
  if (!r.diagnostic.empty()) os << "note: " << r.diagnostic << "\n";
  os << "wall time:";
  for (const auto& [stage, secs] : r.wall_time) os << " " << stage << "=" << fmt(secs) << "s";
  os << "\n";
  return os.str();
}

std::string sim_json(const SimReport& r) {
  json j{{"command", "simulate"}, {"model", r.model_name}, {"n", 2}};
  j["verdict"] = std::string(to_string(r.verdict));
  j["max_rate"] = number(r.max_rate);
  json trials = json::array();
  for (const auto& t : r.trials) {
    trials.push_back(json{{"rate", number(t.rate)}, {"fit_first", t.fit_first}, {"fit_last", t.fit_last}});
  }
  j["trials"] = std::move(trials);
  const auto& c = r.config;
  j["config"] = json{{"j1", c.j1},
                     {"j2", c.j2},
                     {"seed", c.boundary_seed},
                     {"trials", c.trials},
                     {"decay_window", c.decay_window},
                     {"boundary_support", c.boundary_support}};
  return j.dump(2) + "\n";
}

std::string sim_text(const SimReport& r) {
  std::ostringstream os;
  os << "model: " << (r.model_name.empty() ? "(unnamed)" : r.model_name) << "\n";
  os << "verdict: " << to_string(r.verdict) << "\n";
  os << "grid: " << r.config.j1 << "x" << r.config.j2 << ", seed " << r.config.boundary_seed
     << ", " << r.config.trials << " trials\n";
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    const auto& t = r.trials[i];
    os << "  trial " << i << ": rate " << fmt(t.rate) << " over anti-diagonals " << t.fit_first
       << ".." << t.fit_last << "\n";
  }
  os << "max rate: " << fmt(r.max_rate) << "\n";
  return os.str();
}

std::string error_json(std::string_view command, std::string_view message) {
  json j{{"command", std::string(command)}, {"error", std::string(message)}};
  return j.dump(2) + "\n";
}

}  // namespace roesser
