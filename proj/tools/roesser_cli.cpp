// roesser: stability oracle, LMI certification and simulation of Roesser models.
#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "roesser/roesser.h"

namespace {

constexpr int kUsageError = 64;

struct Common {
  std::string file;
  bool json = false;
};

int report_error(const char* command, bool json, const std::string& msg) {
  if (json) {
    // minimal hand-built document; msg is escaped below
    std::string esc;
    for (char c : msg) {
      switch (c) {
        case '"':
          esc += "\\\"";
          break;
        case '\\':
          esc += "\\\\";
          break;
        case '\n':
          esc += "\\n";
          break;
        case '\t':
          esc += "\\t";
          break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            esc += buf;
          } else {
            esc += c;
          }
      }
    }
    std::printf("{\n  \"command\": \"%s\",\n  \"error\": \"%s\"\n}\n", command, esc.c_str());
  }
  std::fprintf(stderr, "roesser %s: %s\n", command, msg.c_str());
  return kUsageError;
}

// Numerical failures inside a run are not configuration errors.
int status_exit(roesser_status s) {
  switch (s) {
    case ROESSER_E_NUMERICAL:
    case ROESSER_E_INTERNAL:
      return 2;
    default:
      return kUsageError;
  }
}

int emit(const Common& c, roesser_report* rep) {
  std::fputs(c.json ? roesser_report_json(rep) : roesser_report_text(rep), stdout);
  const int code = static_cast<int>(roesser_report_verdict(rep));
  roesser_report_free(rep);
  return code;
}

roesser_model* load(const char* command, const Common& c, int& code) {
  roesser_model* m = nullptr;
  if (roesser_model_load_file(c.file.c_str(), &m) != ROESSER_OK) {
    code = report_error(command, c.json, roesser_last_error());
    return nullptr;
  }
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability analysis of 2D and nD Roesser models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", roesser_version());

  Common oc;
  roesser_oracle_options oopt;
  roesser_oracle_options_init(&oopt);
  bool no_inf = false;
  auto* oracle = app.add_subcommand("oracle", "boundary-sweep stability oracle");
  oracle->add_option("file", oc.file, "model file")->required();
  oracle->add_option("--samples", oopt.samples_per_dim, "samples per swept dimension")
      ->capture_default_str();
  oracle->add_option("--margin-tol", oopt.margin_tol, "indicator tolerance")->capture_default_str();
  oracle->add_flag("--no-infinity", no_inf, "skip the infinity sample of derivative dimensions");
  oracle->add_flag("--json", oc.json, "structured report");

  Common cc;
  roesser_certify_options copt;
  roesser_certify_options_init(&copt);
  std::string basis = "auto";
  std::string dump_path;
  std::size_t dump_degree = 0;
  auto* cert = app.add_subcommand("certify", "LMI certification with a polynomial Lyapunov matrix");
  cert->add_option("file", cc.file, "model file")->required();
  cert->add_option("--max-degree", copt.max_degree, "highest polynomial degree")->capture_default_str();
  cert->add_option("--min-degree", copt.min_degree, "lowest polynomial degree")->capture_default_str();
  cert->add_option("--basis", basis, "auto, monomial or moebius")
      ->check(CLI::IsMember({"auto", "monomial", "moebius"}))
      ->capture_default_str();
  cert->add_option("--samples", copt.samples_per_dim, "fine verification samples")
      ->capture_default_str();
  cert->add_option("--coarse", copt.coarse_samples, "LMI sample points")->capture_default_str();
  cert->add_option("--refine", copt.refine_rounds, "cutting-plane rounds per degree")
      ->capture_default_str();
  cert->add_option("--eps", copt.eps, "LMI margin (0 = scale-aware default)")->capture_default_str();
  cert->add_option("--dump-sdp", dump_path, "write the LMI problem in sparse text form and exit");
  cert->add_option("--dump-degree", dump_degree, "degree of the dumped problem")->capture_default_str();
  cert->add_flag("--json", cc.json, "structured report");

  Common sc;
  roesser_sim_options sopt;
  roesser_sim_options_init(&sopt);
  std::string grid = "200x200";
  std::string csv_path;
  auto* sim = app.add_subcommand("simulate", "simulate the discrete recursion and estimate decay");
  sim->add_option("file", sc.file, "model file")->required();
  sim->add_option("--grid", grid, "grid size J1xJ2")->capture_default_str();
  sim->add_option("--seed", sopt.seed, "boundary data seed")->capture_default_str();
  sim->add_option("--trials", sopt.trials, "independent boundary draws")->capture_default_str();
  sim->add_option("--window", sopt.decay_window, "anti-diagonals in the rate fit")
      ->capture_default_str();
  sim->add_option("--csv", csv_path, "write d,s per anti-diagonal of the first trial");
  sim->add_flag("--json", sc.json, "structured report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  int code = 0;
  if (oracle->parsed()) {
    oopt.include_infinity = no_inf ? 0 : 1;
    roesser_model* m = load("oracle", oc, code);
    if (!m) return code;
    roesser_report* rep = nullptr;
    const roesser_status s = roesser_run_oracle(m, &oopt, &rep);
    roesser_model_free(m);
    if (s != ROESSER_OK) {
      report_error("oracle", oc.json, roesser_last_error());
      return status_exit(s);
    }
    return emit(oc, rep);
  }

  if (cert->parsed()) {
    copt.basis = basis == "monomial" ? ROESSER_BASIS_MONOMIAL
                 : basis == "moebius" ? ROESSER_BASIS_MOEBIUS
                                      : ROESSER_BASIS_AUTO;
    roesser_model* m = load("certify", cc, code);
    if (!m) return code;
    if (!dump_path.empty()) {
      const roesser_status s = roesser_dump_sdp(m, &copt, dump_degree, dump_path.c_str());
      roesser_model_free(m);
      if (s != ROESSER_OK) {
        report_error("certify", cc.json, roesser_last_error());
        return status_exit(s);
      }
      return 0;
    }
    roesser_report* rep = nullptr;
    const roesser_status s = roesser_run_certify(m, &copt, &rep);
    roesser_model_free(m);
    if (s != ROESSER_OK) {
      report_error("certify", cc.json, roesser_last_error());
      return status_exit(s);
    }
    return emit(cc, rep);
  }

  if (sim->parsed()) {
    unsigned long long g1 = 0, g2 = 0;
    char tail = 0;
    if (std::sscanf(grid.c_str(), "%llux%llu%c", &g1, &g2, &tail) != 2) {
      return report_error("simulate", sc.json, "--grid expects J1xJ2, got '" + grid + "'");
    }
    sopt.j1 = static_cast<std::size_t>(g1);
    sopt.j2 = static_cast<std::size_t>(g2);
    roesser_model* m = load("simulate", sc, code);
    if (!m) return code;
    roesser_report* rep = nullptr;
    const roesser_status s = roesser_run_simulate(m, &sopt, &rep);
    roesser_model_free(m);
    if (s != ROESSER_OK) {
      report_error("simulate", sc.json, roesser_last_error());
      return status_exit(s);
    }
    if (!csv_path.empty() && roesser_report_write_csv(rep, csv_path.c_str()) != ROESSER_OK) {
      roesser_report_free(rep);
      return report_error("simulate", sc.json, roesser_last_error());
    }
    return emit(sc, rep);
  }
  return kUsageError;
}
