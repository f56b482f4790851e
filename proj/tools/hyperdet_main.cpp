// hyperdet command-line front-end. Talks to the library only through the C API.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "hyperdet/hyperdet.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitNotHyperbolic = 2;
constexpr int kExitSolveFailed = 3;
constexpr int kExitIo = 4;
constexpr int kExitParse = 5;

struct CliError {
  int exit_code;
  std::string message;
};

int exit_code_for(hd_status s) {
  switch (s) {
    case HD_OK: return kExitOk;
    case HD_ERR_NOT_HYPERBOLIC: return kExitNotHyperbolic;
    case HD_ERR_SOLVE_FAILED: return kExitSolveFailed;
    case HD_ERR_IO: return kExitIo;
    case HD_ERR_PARSE:
    case HD_ERR_INHOMOGENEOUS_INPUT: return kExitParse;
    default: return kExitFailure;
  }
}

void check(hd_status s) {
  if (s != HD_OK) throw CliError{exit_code_for(s), hd_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Poly = std::unique_ptr<hd_poly, Deleter<hd_poly, hd_poly_free>>;
using Pair = std::unique_ptr<hd_pair, Deleter<hd_pair, hd_pair_free>>;
using Rep = std::unique_ptr<hd_rep, Deleter<hd_rep, hd_rep_free>>;
using Options = std::unique_ptr<hd_options, Deleter<hd_options, hd_options_free>>;
using Cache = std::unique_ptr<hd_cache, Deleter<hd_cache, hd_cache_free>>;

std::string take_string(char* s) {
  std::string out(s ? s : "");
  hd_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitIo, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw CliError{kExitIo, "cannot read " + path};
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError{kExitIo, "cannot open " + path + " for writing"};
  out << text << '\n';
  if (!out) throw CliError{kExitIo, "cannot write " + path};
}

// key = value lines; '#' starts a comment, [section] headers are ignored.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::map<std::string, std::string> out;
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CliError{kExitParse, path + ":" + std::to_string(lineno) + ": expected key = value"};
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    for (auto& c : key) {
      if (c == '_') c = '-';
    }
    out[key] = value;
  }
  return out;
}

struct SolveArgs {
  std::string input;
  std::string text;
  std::string output;
  std::string path = "original";
  std::uint64_t seed = 0;
  std::string detour = "auto";
  double tol = 1e-10;
  int max_steps = 10000;
  double h_init = 0.05;
  std::string predictor = "rk4";
  std::string cache_dir;
  int parallel_attempts = 1;
  int max_retries = 5;
  std::string forms;
  std::string config;
};

Poly load_poly(const std::string& input, const std::string& text) {
  const std::string src = text.empty() ? read_file(input) : text;
  hd_poly* p = nullptr;
  check(hd_poly_read(src.c_str(), &p));
  return Poly(p);
}

// Applies config entries for options that were not given on the command line.
void apply_config(CLI::App& sub, const std::map<std::string, std::string>& cfg) {
  for (const auto& [key, value] : cfg) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw CliError{kExitParse, "unknown config key '" + key + "'"};
    }
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

Options build_options(const SolveArgs& a) {
  hd_options* raw = nullptr;
  check(hd_options_create(&raw));
  Options opts(raw);
  check(hd_options_set_path(raw, a.path == "randomized" ? HD_PATH_RANDOMIZED : HD_PATH_ORIGINAL));
  check(hd_options_set_seed(raw, a.seed));
  const hd_detour_mode detour = a.detour == "off"    ? HD_DETOUR_OFF
                                : a.detour == "always" ? HD_DETOUR_ALWAYS
                                                       : HD_DETOUR_AUTO;
  check(hd_options_set_detour(raw, detour));
  check(hd_options_set_newton_tol(raw, a.tol));
  check(hd_options_set_max_steps(raw, a.max_steps));
  check(hd_options_set_h_init(raw, a.h_init));
  check(hd_options_set_predictor(raw, a.predictor == "euler" ? HD_PREDICTOR_EULER : HD_PREDICTOR_RK4));
  check(hd_options_set_parallel_attempts(raw, a.parallel_attempts));
  check(hd_options_set_max_retries(raw, a.max_retries));
  if (!a.forms.empty()) check(hd_options_set_forms_json(raw, read_file(a.forms).c_str()));
  return opts;
}

int run_solve(const SolveArgs& a, bool verbose) {
  Poly poly = load_poly(a.input, a.text);
  Options opts = build_options(a);
  std::string cache_dir = a.cache_dir;
  if (const char* env = std::getenv("HYPERDET_CACHE_DIR"); env && *env) cache_dir = env;
  hd_cache* cache_raw = nullptr;
  check(hd_cache_create(cache_dir.c_str(), &cache_raw));
  Cache cache(cache_raw);

  hd_rep* rep_raw = nullptr;
  check(hd_solve(poly.get(), opts.get(), cache.get(), &rep_raw));
  Rep rep(rep_raw);
  char* json = nullptr;
  check(hd_rep_to_json(rep.get(), opts.get(), &json));
  write_output(a.output, take_string(json));
  if (verbose) {
    std::cerr << "residual " << hd_rep_residual(rep.get()) << ", real " << (hd_rep_is_real(rep.get()) ? "yes" : "no")
              << ", seed " << a.seed << '\n';
  }
  return kExitOk;
}

int run_verify(const std::string& input, const std::string& text, const std::string& rep_path, double tol,
               const std::string& output) {
  Poly poly = load_poly(input, text);
  hd_rep* rep_raw = nullptr;
  check(hd_rep_from_json(read_file(rep_path).c_str(), &rep_raw));
  Rep rep(rep_raw);
  double residual = 0.0;
  check(hd_verify(poly.get(), rep.get(), &residual));
  const bool ok = residual < tol;
  std::ostringstream ss;
  ss.precision(17);
  ss << "{\"residual\": " << residual << ", \"tolerance\": " << tol << ", \"ok\": " << (ok ? "true" : "false") << "}";
  write_output(output, ss.str());
  if (!ok) std::cerr << "verify: residual " << residual << " exceeds " << tol << '\n';
  return ok ? kExitOk : kExitFailure;
}

int run_forward(const std::string& pair_path, const std::string& output) {
  hd_pair* pair_raw = nullptr;
  check(hd_pair_from_json(read_file(pair_path).c_str(), &pair_raw));
  Pair pair(pair_raw);
  hd_poly* poly_raw = nullptr;
  check(hd_forward(pair.get(), &poly_raw));
  Poly poly(poly_raw);
  char* json = nullptr;
  check(hd_poly_to_json(poly.get(), &json));
  write_output(output, take_string(json));
  return kExitOk;
}

int run_endpoint(int degree, const std::string& path, std::uint64_t seed, const std::string& output,
                 const std::string& forms_out) {
  hd_poly* poly_raw = nullptr;
  char* forms = nullptr;
  const hd_path_kind kind = path == "randomized" ? HD_PATH_RANDOMIZED : HD_PATH_ORIGINAL;
  check(hd_endpoint(degree, kind, seed, &poly_raw, &forms));
  Poly poly(poly_raw);
  const std::string forms_json = take_string(forms);
  char* json = nullptr;
  check(hd_poly_to_json(poly.get(), &json));
  write_output(output, take_string(json));
  if (!forms_out.empty()) write_output(forms_out, forms_json);
  return kExitOk;
}

int run_hyperbolic(const std::string& input, const std::string& text, int n_dirs, const std::string& output) {
  Poly poly = load_poly(input, text);
  hd_hyperbolicity report{};
  check(hd_check_hyperbolic(poly.get(), n_dirs, 0.0, &report));
  std::ostringstream ss;
  ss.precision(17);
  ss << "{\"is_hyperbolic\": " << (report.is_hyperbolic ? "true" : "false")
     << ", \"is_strict\": " << (report.is_strict ? "true" : "false") << ", \"max_imag\": " << report.max_imag
     << ", \"min_gap\": " << report.min_gap << ", \"witness_direction\": [" << report.witness_u << ", "
     << report.witness_v << "]}";
  write_output(output, ss.str());
  if (!report.is_hyperbolic) {
    std::cerr << "not hyperbolic: non-real roots along direction (" << report.witness_u << ", " << report.witness_v
              << ")\n";
    return kExitNotHyperbolic;
  }
  return kExitOk;
}

int run_oracle(const std::string& input, const std::string& text, const std::string& output) {
  Poly poly = load_poly(input, text);
  char* json = nullptr;
  check(hd_oracle_conic(poly.get(), &json));
  write_output(output, take_string(json));
  return kExitOk;
}

void add_input(CLI::App* sub, std::string& input, std::string& text) {
  auto* in = sub->add_option("-i,--input", input, "polynomial file (JSON or text expression)");
  auto* tx = sub->add_option("--expr", text, "polynomial given inline as a text expression");
  in->excludes(tx);
  tx->excludes(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperdet: p = det(tI + xD + yR) for hyperbolic ternary forms"};
  app.require_subcommand(1);
  app.fallthrough();
  bool verbose = false;
  bool quiet = false;
  auto* v_opt = app.add_flag("-v,--verbose", verbose, "report progress on standard error");
  auto* q_opt = app.add_flag("-q,--quiet", quiet, "suppress diagnostics");
  v_opt->excludes(q_opt);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "compute (D, R) with det(tI + xD + yR) = p");
  add_input(solve, sa.input, sa.text);
  solve->add_option("-o,--output", sa.output, "output file (default: standard output)");
  solve->add_option("--path", sa.path, "Nuij path variant")->check(CLI::IsMember({"original", "randomized"}));
  auto* seed_opt = solve->add_option("--seed", sa.seed, "random seed (drawn and echoed when absent)");
  solve->add_option("--detour", sa.detour, "complex detour around real singular fibers")
      ->check(CLI::IsMember({"off", "auto", "always"}));
  solve->add_option("--tol", sa.tol, "Newton corrector tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--max-steps", sa.max_steps, "tracker step budget per segment")->check(CLI::PositiveNumber);
  solve->add_option("--h-init", sa.h_init, "initial step size")->check(CLI::PositiveNumber);
  solve->add_option("--predictor", sa.predictor, "predictor scheme")->check(CLI::IsMember({"euler", "rk4"}));
  solve->add_option("--cache-dir", sa.cache_dir, "endpoint cache directory (HYPERDET_CACHE_DIR overrides)");
  solve->add_option("--parallel-attempts", sa.parallel_attempts, "concurrent attempts with distinct seeds")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-retries", sa.max_retries, "attempts per seed, fallbacks included")
      ->check(CLI::PositiveNumber);
  solve->add_option("--forms", sa.forms, "linear forms file {\"forms\": [[a, b], ...]} for the randomized path");
  solve->add_option("--config", sa.config, "key = value config file; command-line flags win");

  std::string v_input, v_text, v_rep, v_output;
  double v_tol = 1e-6;
  auto* verify = app.add_subcommand("verify", "check a representation against a polynomial");
  add_input(verify, v_input, v_text);
  verify->add_option("--rep", v_rep, "representation JSON from solve")->required();
  verify->add_option("--tol", v_tol, "accepted coefficient residual")->check(CLI::PositiveNumber);
  verify->add_option("-o,--output", v_output, "output file");

  std::string f_pair, f_output;
  auto* forward = app.add_subcommand("forward", "expand det(tI + xD + yR)");
  forward->add_option("--pair", f_pair, "pair JSON {\"d\", \"diag\", \"sym\"}")->required();
  forward->add_option("-o,--output", f_output, "output file");

  int e_degree = 0;
  std::string e_path = "original", e_output, e_forms;
  std::uint64_t e_seed = 0;
  auto* endpoint = app.add_subcommand("endpoint", "print the fixed endpoint F_1(t^d)");
  endpoint->add_option("--degree", e_degree, "degree d")->required()->check(CLI::PositiveNumber);
  endpoint->add_option("--path", e_path, "Nuij path variant")->check(CLI::IsMember({"original", "randomized"}));
  endpoint->add_option("--seed", e_seed, "seed for the randomized linear forms");
  endpoint->add_option("-o,--output", e_output, "output file");
  endpoint->add_option("--forms-output", e_forms, "write the linear forms JSON here");

  std::string h_input, h_text, h_output;
  int h_dirs = 64;
  auto* hyper = app.add_subcommand("hyperbolic", "sampled hyperbolicity check with respect to (1, 0, 0)");
  add_input(hyper, h_input, h_text);
  hyper->add_option("--directions", h_dirs, "number of sampled directions")->check(CLI::PositiveNumber);
  hyper->add_option("-o,--output", h_output, "output file");

  std::string o_input, o_text, o_output;
  auto* oracle = app.add_subcommand("oracle-conic", "closed-form fiber of a conic");
  oracle->group("");
  add_input(oracle, o_input, o_text);
  oracle->add_option("-o,--output", o_output, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  auto need_input = [](const std::string& input, const std::string& text) {
    if (input.empty() && text.empty()) throw CliError{kExitParse, "one of --input or --expr is required"};
  };

  try {
    if (*solve) {
      if (!sa.config.empty()) apply_config(*solve, read_config(sa.config));
      if (seed_opt->count() == 0) {
        std::random_device rd;
        sa.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
      }
      need_input(sa.input, sa.text);
      return run_solve(sa, verbose);
    }
    if (*verify) {
      need_input(v_input, v_text);
      return run_verify(v_input, v_text, v_rep, v_tol, v_output);
    }
    if (*forward) return run_forward(f_pair, f_output);
    if (*endpoint) return run_endpoint(e_degree, e_path, e_seed, e_output, e_forms);
    if (*hyper) {
      need_input(h_input, h_text);
      return run_hyperbolic(h_input, h_text, h_dirs, h_output);
    }
    if (*oracle) {
      need_input(o_input, o_text);
      return run_oracle(o_input, o_text, o_output);
    }
  } catch (const CliError& e) {
    if (!quiet) std::cerr << "hyperdet: " << e.message << '\n';
    return e.exit_code;
  } catch (const CLI::ParseError& e) {
    if (!quiet) std::cerr << "hyperdet: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    if (!quiet) std::cerr << "hyperdet: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
