#include "roesser/roesser.h"

#include <fstream>
#include <memory>
#include <optional>
#include <string>

#include "roesser/certify.hpp"
#include "roesser/errors.hpp"
#include "roesser/io.hpp"
#include "roesser/lyapunov.hpp"
#include "roesser/oracle.hpp"
#include "roesser/sdp.hpp"
#include "roesser/sim.hpp"

struct roesser_model {
  roesser::NdRoesserModel model;
  std::string json;
};

struct roesser_report {
  roesser_verdict verdict = ROESSER_VERDICT_INDETERMINATE;
  std::string verdict_name;
  std::string text;
  std::string json;
  std::optional<roesser::SimReport> sim;
};

namespace {

thread_local std::string g_last_error;

struct io_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

roesser_status fail(roesser_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Maps exceptions escaping the core onto status codes.
template <typename F>
roesser_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return ROESSER_OK;
  } catch (const roesser::ParseError& e) {
    return fail(ROESSER_E_PARSE, e.what());
  } catch (const roesser::InvalidArgument& e) {
    return fail(ROESSER_E_INVALID_ARGUMENT, e.what());
  } catch (const roesser::DimensionMismatch& e) {
    return fail(ROESSER_E_DIMENSION, e.what());
  } catch (const roesser::UnsupportedKind& e) {
    return fail(ROESSER_E_UNSUPPORTED_KIND, e.what());
  } catch (const roesser::ConfigTooLarge& e) {
    return fail(ROESSER_E_CONFIG_TOO_LARGE, e.what());
  } catch (const roesser::Error& e) {
    return fail(ROESSER_E_NUMERICAL, e.what());
  } catch (const io_failure& e) {
    return fail(ROESSER_E_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ROESSER_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ROESSER_E_INTERNAL, e.what());
  } catch (...) {
    return fail(ROESSER_E_INTERNAL, "unknown error");
  }
}

roesser::SweepConfig sweep_from(const roesser_oracle_options* o) {
  roesser::SweepConfig c;
  if (o) {
    c.samples_per_dim = o->samples_per_dim;
    c.margin_tol = o->margin_tol;
    c.include_infinity = o->include_infinity != 0;
  }
  return c;
}

roesser::CertifyConfig certify_from(const roesser_certify_options* o) {
  roesser::CertifyConfig c;
  if (!o) return c;
  c.min_degree = o->min_degree;
  c.max_degree = o->max_degree;
  switch (o->basis) {
    case ROESSER_BASIS_AUTO:
      c.basis = roesser::BasisChoice::Auto;
      break;
    case ROESSER_BASIS_MONOMIAL:
      c.basis = roesser::BasisChoice::Monomial;
      break;
    case ROESSER_BASIS_MOEBIUS:
      c.basis = roesser::BasisChoice::Moebius;
      break;
    default:
      throw roesser::InvalidArgument("unknown basis");
  }
  c.coarse_samples = o->coarse_samples;
  c.refine_rounds = o->refine_rounds;
  c.sweep.samples_per_dim = o->samples_per_dim;
  c.eps = o->eps;
  return c;
}

roesser_verdict verdict_of(roesser::OracleStatus s) {
  switch (s) {
    case roesser::OracleStatus::Stable:
      return ROESSER_VERDICT_STABLE;
    case roesser::OracleStatus::Unstable:
      return ROESSER_VERDICT_UNSTABLE;
    default:
      return ROESSER_VERDICT_INDETERMINATE;
  }
}

roesser_verdict verdict_of(roesser::CertifyVerdict v) {
  switch (v) {
    case roesser::CertifyVerdict::CertifiedStable:
    case roesser::CertifyVerdict::GridStable:
      return ROESSER_VERDICT_STABLE;
    case roesser::CertifyVerdict::Unstable:
      return ROESSER_VERDICT_UNSTABLE;
    default:
      return ROESSER_VERDICT_INDETERMINATE;
  }
}

roesser_verdict verdict_of(roesser::SimVerdict v) {
  switch (v) {
    case roesser::SimVerdict::Decaying:
      return ROESSER_VERDICT_STABLE;
    case roesser::SimVerdict::Growing:
      return ROESSER_VERDICT_UNSTABLE;
    default:
      return ROESSER_VERDICT_INDETERMINATE;
  }
}

roesser_status null_arg(const char* what) {
  return fail(ROESSER_E_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

}  // namespace

extern "C" {

const char* roesser_version(void) { return "0.1.0"; }

const char* roesser_last_error(void) { return g_last_error.c_str(); }

void roesser_oracle_options_init(roesser_oracle_options* opts) {
  if (!opts) return;
  const roesser::SweepConfig d;
  opts->samples_per_dim = d.samples_per_dim;
  opts->margin_tol = d.margin_tol;
  opts->include_infinity = d.include_infinity ? 1 : 0;
}

void roesser_certify_options_init(roesser_certify_options* opts) {
  if (!opts) return;
  const roesser::CertifyConfig d;
  opts->min_degree = d.min_degree;
  opts->max_degree = d.max_degree;
  opts->basis = ROESSER_BASIS_AUTO;
  opts->coarse_samples = d.coarse_samples;
  opts->refine_rounds = d.refine_rounds;
  opts->samples_per_dim = d.sweep.samples_per_dim;
  opts->eps = d.eps;
}

void roesser_sim_options_init(roesser_sim_options* opts) {
  if (!opts) return;
  const roesser::SimConfig d;
  opts->j1 = d.j1;
  opts->j2 = d.j2;
  opts->seed = d.boundary_seed;
  opts->trials = d.trials;
  opts->decay_window = d.decay_window;
  opts->boundary_support = d.boundary_support;
}

roesser_status roesser_model_load_file(const char* path, roesser_model** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    if (!std::ifstream(path)) throw io_failure(std::string("cannot open model file '") + path + "'");
    auto m = roesser::load_model_file(path);
    std::string doc = roesser::emit_model(m);
    *out = new roesser_model{std::move(m), std::move(doc)};
  });
}

roesser_status roesser_model_load_string(const char* text, roesser_model** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto m = roesser::parse_model(text);
    std::string doc = roesser::emit_model(m);
    *out = new roesser_model{std::move(m), std::move(doc)};
  });
}

size_t roesser_model_dimensions(const roesser_model* model) { return model ? model->model.n() : 0; }

const char* roesser_model_json(const roesser_model* model) {
  return model ? model->json.c_str() : "";
}

void roesser_model_free(roesser_model* model) { delete model; }

roesser_status roesser_run_oracle(const roesser_model* model, const roesser_oracle_options* opts,
                                  roesser_report** out) {
  if (!model) return null_arg("model");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const roesser::SweepConfig cfg = sweep_from(opts);
    cfg.validate();
    const auto& m = model->model;
    const roesser::OracleVerdict v =
        m.n() == 2 ? roesser::oracle_2d(m.to_2d(), cfg) : roesser::sweep_nd(m, cfg);
    const roesser::OracleContext ctx{m.name(), m.n(), cfg};
    auto rep = std::make_unique<roesser_report>();
    rep->verdict = verdict_of(v.status);
    rep->verdict_name = std::string(roesser::to_string(v.status));
    rep->text = roesser::oracle_text(v, ctx);
    rep->json = roesser::oracle_json(v, ctx);
    *out = rep.release();
  });
}

roesser_status roesser_run_certify(const roesser_model* model, const roesser_certify_options* opts,
                                   roesser_report** out) {
  if (!model) return null_arg("model");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const roesser::CertifyConfig cfg = certify_from(opts);
    const roesser::CertificationReport r = roesser::certify_nd(model->model, cfg);
    auto rep = std::make_unique<roesser_report>();
    rep->verdict = verdict_of(r.verdict);
    rep->verdict_name = std::string(roesser::to_string(r.verdict));
    rep->text = roesser::certify_text(r);
    rep->json = roesser::certify_json(r);
    *out = rep.release();
  });
}

roesser_status roesser_run_simulate(const roesser_model* model, const roesser_sim_options* opts,
                                    roesser_report** out) {
  if (!model) return null_arg("model");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    roesser::SimConfig cfg;
    if (opts) {
      cfg.j1 = opts->j1;
      cfg.j2 = opts->j2;
      cfg.boundary_seed = opts->seed;
      cfg.trials = opts->trials;
      cfg.decay_window = opts->decay_window;
      cfg.boundary_support = opts->boundary_support;
    }
    const auto& m = model->model;
    for (const auto k : m.kinds()) {
      if (k != roesser::DimensionKind::Shift)
        throw roesser::UnsupportedKind("simulation requires every dimension of kind shift");
    }
    if (m.n() != 2) throw roesser::UnsupportedKind("simulation supports 2D models only");
    roesser::SimReport r = roesser::simulate(m.to_2d(), cfg);
    auto rep = std::make_unique<roesser_report>();
    rep->verdict = verdict_of(r.verdict);
    rep->verdict_name = std::string(roesser::to_string(r.verdict));
    rep->text = roesser::sim_text(r);
    rep->json = roesser::sim_json(r);
    rep->sim = std::move(r);
    *out = rep.release();
  });
}

roesser_status roesser_dump_sdp(const roesser_model* model, const roesser_certify_options* opts,
                                size_t degree, const char* path) {
  if (!model) return null_arg("model");
  if (!path) return null_arg("path");
  return guarded([&] {
    const roesser::CertifyConfig cfg = certify_from(opts);
    cfg.validate();
    if (model->model.n() != 2) throw roesser::InvalidArgument("LMI problems exist for 2D models only");
    const roesser::RoesserModel m = model->model.to_2d();
    const roesser::Basis basis = roesser::resolve_basis(cfg.basis, m.kind2());
    const auto samples = roesser::boundary_samples(m.kind2(), cfg.coarse_samples, true);
    const double eps = cfg.eps > 0.0 ? cfg.eps : roesser::default_eps(m);
    const roesser::LmiProblem p = roesser::assemble_lmi(m, degree, basis, samples, eps);
    std::ofstream f(path);
    if (!f) throw io_failure("cannot open '" + std::string(path) + "' for writing");
    roesser::write_problem(p, f);
    if (!f) throw io_failure("write to '" + std::string(path) + "' failed");
  });
}

roesser_verdict roesser_report_verdict(const roesser_report* report) {
  return report ? report->verdict : ROESSER_VERDICT_INDETERMINATE;
}

const char* roesser_report_verdict_name(const roesser_report* report) {
  return report ? report->verdict_name.c_str() : "";
}

const char* roesser_report_text(const roesser_report* report) {
  return report ? report->text.c_str() : "";
}

const char* roesser_report_json(const roesser_report* report) {
  return report ? report->json.c_str() : "";
}

roesser_status roesser_report_write_csv(const roesser_report* report, const char* path) {
  if (!report) return null_arg("report");
  if (!path) return null_arg("path");
  if (!report->sim) return fail(ROESSER_E_INVALID_ARGUMENT, "CSV output exists for simulation reports only");
  g_last_error.clear();
  std::ofstream f(path);
  if (!f) return fail(ROESSER_E_IO, "cannot open '" + std::string(path) + "' for writing");
  roesser::write_csv(*report->sim, 0, f);
  if (!f) return fail(ROESSER_E_IO, "write to '" + std::string(path) + "' failed");
  return ROESSER_OK;
}

void roesser_report_free(roesser_report* report) { delete report; }

}  // extern "C"
