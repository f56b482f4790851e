#include "hyperdet/hyperdet.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "hyperdet/error.hpp"
#include "hyperdet/oracle.hpp"
#include "hyperdet/pipeline.hpp"
#include "hyperdet/serialize.hpp"
#include "hyperdet/text_parser.hpp"

struct hd_poly {
  hyperdet::TernaryForm form;
};
struct hd_pair {
  hyperdet::SymPair pair;
};
struct hd_rep {
  hyperdet::Representation rep;
};
struct hd_options {
  hyperdet::SolveOptions opts;
};
struct hd_cache {
  hyperdet::EndpointCache cache;
  explicit hd_cache(std::string dir) : cache(std::move(dir)) {}
};

namespace {

using hyperdet::Error;
using hyperdet::ErrorCode;

thread_local std::string g_last_error;

hd_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return HD_ERR_INVALID_ARGUMENT;
    case ErrorCode::ZeroDirection: return HD_ERR_ZERO_DIRECTION;
    case ErrorCode::DegenerateLeadingCoefficient: return HD_ERR_DEGENERATE_LEADING_COEFFICIENT;
    case ErrorCode::NotReal: return HD_ERR_NOT_REAL;
    case ErrorCode::DegreeMismatch: return HD_ERR_DEGREE_MISMATCH;
    case ErrorCode::EndpointNotStrict: return HD_ERR_ENDPOINT_NOT_STRICT;
    case ErrorCode::IllConditionedNodes: return HD_ERR_ILL_CONDITIONED_NODES;
    case ErrorCode::NonRealRoots: return HD_ERR_NON_REAL_ROOTS;
    case ErrorCode::BasisConditioningFailed: return HD_ERR_BASIS_CONDITIONING_FAILED;
    case ErrorCode::SingularJacobian: return HD_ERR_SINGULAR_JACOBIAN;
    case ErrorCode::StartNotStrict: return HD_ERR_START_NOT_STRICT;
    case ErrorCode::NotHyperbolic: return HD_ERR_NOT_HYPERBOLIC;
    case ErrorCode::LeadingCoefficientZero: return HD_ERR_LEADING_COEFFICIENT_ZERO;
    case ErrorCode::SolveFailed: return HD_ERR_SOLVE_FAILED;
    case ErrorCode::DegenerateD: return HD_ERR_DEGENERATE_D;
    case ErrorCode::RepeatedD: return HD_ERR_REPEATED_D;
    case ErrorCode::InternalInconsistency: return HD_ERR_INTERNAL_INCONSISTENCY;
    case ErrorCode::ParseError: return HD_ERR_PARSE;
    case ErrorCode::InhomogeneousInput: return HD_ERR_INHOMOGENEOUS_INPUT;
    case ErrorCode::Io: return HD_ERR_IO;
  }
  return HD_ERR_INTERNAL;
}

hd_status fail(hd_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
hd_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return HD_OK;
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HD_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw Error(ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hyperdet::json options_json(const hyperdet::SolveOptions& o) {
  using hyperdet::json;
  const char* detour = o.detour == hyperdet::DetourMode::Off    ? "off"
                       : o.detour == hyperdet::DetourMode::Auto ? "auto"
                                                                 : "always";
  json out = {{"path", o.path == hyperdet::PathChoice::Original ? "original" : "randomized"},
              {"seed", o.seed},
              {"detour", detour},
              {"perturb_eps", o.perturb_eps},
              {"max_retries", o.max_retries},
              {"parallel_attempts", o.parallel_attempts},
              {"newton_tol", o.tracker.newton_tol},
              {"newton_max_iters", o.tracker.newton_max_iters},
              {"max_steps", o.tracker.max_steps},
              {"h_init", o.tracker.h_init},
              {"h_min", o.tracker.h_min},
              {"predictor", o.tracker.predictor == hyperdet::Predictor::RK4 ? "rk4" : "euler"}};
  if (o.detour_c) out["detour_c"] = {o.detour_c->real(), o.detour_c->imag()};
  if (o.forms) out["forms"] = hyperdet::forms_to_json(*o.forms)["forms"];
  return out;
}

}  // namespace

extern "C" {

const char* hd_version(void) { return "0.1.0"; }

const char* hd_last_error(void) { return g_last_error.c_str(); }

const char* hd_status_name(hd_status status) {
  switch (status) {
    case HD_OK: return "Ok";
    case HD_ERR_INHOMOGENEOUS_INPUT: return "InhomogeneousInput";
    case HD_ERR_INTERNAL: return "Internal";
    default: break;
  }
  for (int c = 0; c <= static_cast<int>(ErrorCode::Io); ++c) {
    if (status_of(static_cast<ErrorCode>(c)) == status) return hyperdet::to_string(static_cast<ErrorCode>(c));
  }
  return "Unknown";
}

void hd_string_free(char* str) { std::free(str); }

hd_status hd_poly_from_json(const char* text, hd_poly** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new hd_poly{hyperdet::form_from_json(hyperdet::parse_json_text(text))};
  });
}

hd_status hd_poly_parse_text(const char* text, hd_poly** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new hd_poly{hyperdet::parse_polynomial_text(text)};
  });
}

hd_status hd_poly_read(const char* source, hd_poly** out) {
  if (!source) return fail(HD_ERR_INVALID_ARGUMENT, "null argument");
  const char* p = source;
  while (*p == ' ' || *p == '\t' || *p == '\n' || *p == '\r') ++p;
  return *p == '{' ? hd_poly_from_json(p, out) : hd_poly_parse_text(p, out);
}

hd_status hd_poly_to_json(const hd_poly* poly, char** out_json) {
  return guarded([&] {
    require(poly && out_json, "null argument");
    *out_json = dup_string(hyperdet::form_to_json(poly->form).dump());
  });
}

int hd_poly_degree(const hd_poly* poly) { return poly ? poly->form.degree() : -1; }

void hd_poly_free(hd_poly* poly) { delete poly; }

hd_status hd_pair_from_json(const char* text, hd_pair** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new hd_pair{hyperdet::pair_from_json(hyperdet::parse_json_text(text))};
  });
}

hd_status hd_pair_to_json(const hd_pair* pair, char** out_json) {
  return guarded([&] {
    require(pair && out_json, "null argument");
    *out_json = dup_string(hyperdet::pair_to_json(pair->pair).dump());
  });
}

void hd_pair_free(hd_pair* pair) { delete pair; }

hd_status hd_forward(const hd_pair* pair, hd_poly** out) {
  return guarded([&] {
    require(pair && out, "null argument");
    *out = new hd_poly{hyperdet::phi_coeffs(pair->pair)};
  });
}

hd_status hd_endpoint(int degree, hd_path_kind kind, uint64_t seed, hd_poly** out, char** out_forms_json) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    require(degree >= 1, "degree must be positive");
    hyperdet::PathKind pk = hyperdet::OriginalPath{};
    if (kind == HD_PATH_RANDOMIZED) pk = hyperdet::make_randomized_kind(degree, seed);
    auto poly = std::make_unique<hd_poly>(hd_poly{hyperdet::fixed_endpoint(degree, pk)});
    if (out_forms_json) {
      const auto* r = std::get_if<hyperdet::RandomizedPath>(&pk);
      *out_forms_json = dup_string(r ? hyperdet::forms_to_json(r->forms).dump() : std::string("null"));
    }
    *out = poly.release();
  });
}

hd_status hd_check_hyperbolic(const hd_poly* poly, int n_dirs, double tol, hd_hyperbolicity* out) {
  return guarded([&] {
    require(poly && out, "null argument");
    const auto report = hyperdet::check_hyperbolic(poly->form, n_dirs > 0 ? n_dirs : hyperdet::kDefaultDirections,
                                                   tol > 0.0 ? tol : 1e-7);
    out->is_hyperbolic = report.is_hyperbolic ? 1 : 0;
    out->is_strict = report.is_strict ? 1 : 0;
    out->max_imag = report.max_imag;
    out->min_gap = report.min_gap;
    out->witness_u = report.witness_direction[0];
    out->witness_v = report.witness_direction[1];
  });
}

hd_status hd_options_create(hd_options** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new hd_options{};
  });
}

void hd_options_free(hd_options* options) { delete options; }

#define HD_SETTER(name, type, body)                     \
  hd_status name(hd_options* options, type value) {     \
    return guarded([&] {                                \
      require(options != nullptr, "null options");      \
      body;                                             \
    });                                                 \
  }

HD_SETTER(hd_options_set_path, hd_path_kind, {
  require(value == HD_PATH_ORIGINAL || value == HD_PATH_RANDOMIZED, "unknown path kind");
  options->opts.path = value == HD_PATH_ORIGINAL ? hyperdet::PathChoice::Original : hyperdet::PathChoice::Randomized;
})
HD_SETTER(hd_options_set_seed, uint64_t, { options->opts.seed = value; })
HD_SETTER(hd_options_set_detour, hd_detour_mode, {
  require(value >= HD_DETOUR_OFF && value <= HD_DETOUR_ALWAYS, "unknown detour mode");
  options->opts.detour = static_cast<hyperdet::DetourMode>(value);
})
HD_SETTER(hd_options_set_perturb_eps, double, {
  require(value > 0.0 && value < 1.0, "perturb_eps must lie in (0, 1)");
  options->opts.perturb_eps = value;
})
HD_SETTER(hd_options_set_max_retries, int, {
  require(value >= 1, "max_retries must be positive");
  options->opts.max_retries = value;
})
HD_SETTER(hd_options_set_parallel_attempts, int, {
  require(value >= 1, "parallel_attempts must be at least 1");
  options->opts.parallel_attempts = value;
})
HD_SETTER(hd_options_set_newton_tol, double, {
  require(value > 0.0, "tolerance must be positive");
  options->opts.tracker.newton_tol = value;
})
HD_SETTER(hd_options_set_max_steps, int, {
  require(value >= 1, "max_steps must be positive");
  options->opts.tracker.max_steps = value;
})
HD_SETTER(hd_options_set_h_init, double, {
  require(value > 0.0, "h_init must be positive");
  options->opts.tracker.h_init = value;
})
HD_SETTER(hd_options_set_h_min, double, {
  require(value > 0.0, "h_min must be positive");
  options->opts.tracker.h_min = value;
})
HD_SETTER(hd_options_set_predictor, hd_predictor, {
  require(value == HD_PREDICTOR_EULER || value == HD_PREDICTOR_RK4, "unknown predictor");
  options->opts.tracker.predictor = value == HD_PREDICTOR_RK4 ? hyperdet::Predictor::RK4 : hyperdet::Predictor::Euler;
})
HD_SETTER(hd_options_set_forms_json, const char*, {
  require(value != nullptr, "null forms");
  options->opts.forms = hyperdet::forms_from_json(hyperdet::parse_json_text(value));
})

#undef HD_SETTER

uint64_t hd_options_get_seed(const hd_options* options) { return options ? options->opts.seed : 0; }

hd_status hd_options_set_detour_point(hd_options* options, double re, double im) {
  return guarded([&] {
    require(options != nullptr, "null options");
    require(im != 0.0, "detour waypoint needs a nonzero imaginary part");
    options->opts.detour_c = hyperdet::cplx(re, im);
  });
}

hd_status hd_options_to_json(const hd_options* options, char** out_json) {
  return guarded([&] {
    require(options && out_json, "null argument");
    *out_json = dup_string(options_json(options->opts).dump());
  });
}

hd_status hd_cache_create(const char* directory, hd_cache** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new hd_cache(directory ? std::string(directory) : std::string());
  });
}

void hd_cache_free(hd_cache* cache) { delete cache; }

hd_status hd_solve(const hd_poly* poly, const hd_options* options, hd_cache* cache, hd_rep** out) {
  return guarded([&] {
    require(poly && out, "null argument");
    const hyperdet::SolveOptions defaults;
    const auto& opts = options ? options->opts : defaults;
    *out = new hd_rep{hyperdet::solve(poly->form, opts, cache ? &cache->cache : nullptr)};
  });
}

hd_status hd_rep_to_json(const hd_rep* rep, const hd_options* options, char** out_json) {
  return guarded([&] {
    require(rep && out_json, "null argument");
    auto j = hyperdet::representation_to_json(rep->rep);
    if (options) {
      j["seed"] = options->opts.seed;
      j["config"] = options_json(options->opts);
    }
    *out_json = dup_string(j.dump(2));
  });
}

hd_status hd_rep_from_json(const char* text, hd_rep** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new hd_rep{hyperdet::representation_from_json(hyperdet::parse_json_text(text))};
  });
}

double hd_rep_residual(const hd_rep* rep) { return rep ? rep->rep.residual : -1.0; }

int hd_rep_is_real(const hd_rep* rep) { return rep && rep->rep.is_real ? 1 : 0; }

int hd_rep_degree(const hd_rep* rep) { return rep ? rep->rep.pair.d() : -1; }

hd_status hd_rep_pair(const hd_rep* rep, hd_pair** out) {
  return guarded([&] {
    require(rep && out, "null argument");
    *out = new hd_pair{rep->rep.pair};
  });
}

void hd_rep_free(hd_rep* rep) { delete rep; }

hd_status hd_verify(const hd_poly* poly, const hd_rep* rep, double* out_residual) {
  return guarded([&] {
    require(poly && rep && out_residual, "null argument");
    *out_residual = hyperdet::verify(poly->form, rep->rep);
  });
}

hd_status hd_oracle_conic(const hd_poly* poly, char** out_json) {
  return guarded([&] {
    require(poly && out_json, "null argument");
    const auto set = hyperdet::solve_conic(poly->form);
    hyperdet::json sols = hyperdet::json::array();
    for (const auto& z : set.solutions) sols.push_back(hyperdet::pair_to_json(z));
    *out_json = dup_string(hyperdet::json{{"solutions", std::move(sols)}}.dump(2));
  });
}

}  // extern "C"
