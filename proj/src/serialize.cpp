#include "hyperdet/serialize.hpp"

#include "hyperdet/error.hpp"

namespace hyperdet {

namespace {

double number_at(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" must be a number");
  return j.at(key).get<double>();
}

const json& required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::ParseError, std::string("missing \"") + key + "\"");
  }
  return j.at(key);
}

std::vector<double> number_list(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from(const json& j, int d, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    throw Error(ErrorCode::ParseError, std::string(what) + " must have d rows");
  }
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    const auto row = number_list(j[static_cast<std::size_t>(i)], what);
    if (static_cast<int>(row.size()) != d) throw Error(ErrorCode::ParseError, std::string(what) + " must be square");
    for (int k = 0; k < d; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
  }
  return m;
}

SymPair pair_from_parts(const std::vector<double>& diag, const Eigen::MatrixXd& sym,
                        const std::vector<double>* diag_imag, const Eigen::MatrixXd* sym_imag) {
  const int d = static_cast<int>(diag.size());
  Eigen::VectorXcd dv(d);
  Eigen::MatrixXcd rm = sym.cast<cplx>();
  for (int k = 0; k < d; ++k) dv(k) = diag[static_cast<std::size_t>(k)];
  if (diag_imag) {
    for (int k = 0; k < d; ++k) dv(k) += cplx(0.0, (*diag_imag)[static_cast<std::size_t>(k)]);
  }
  if (sym_imag) rm += cplx(0.0, 1.0) * sym_imag->cast<cplx>();
  try {
    return SymPair::from_matrices(dv, rm);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

json form_to_json(const TernaryForm& f) {
  json terms = json::array();
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const cplx c = f[idx];
    if (c == 0.0) continue;
    const auto e = TernaryForm::exponent_at(f.degree(), idx);
    json term = {{"exp", {e.t, e.x, e.y}}, {"re", c.real()}};
    if (c.imag() != 0.0) term["im"] = c.imag();
    terms.push_back(std::move(term));
  }
  return {{"degree", f.degree()}, {"terms", std::move(terms)}};
}

TernaryForm form_from_json(const json& j) {
  const json& deg = required(j, "degree");
  if (!deg.is_number_integer() || deg.get<int>() < 0) {
    throw Error(ErrorCode::ParseError, "\"degree\" must be a non-negative integer");
  }
  const int d = deg.get<int>();
  const json& terms = required(j, "terms");
  if (!terms.is_array()) throw Error(ErrorCode::ParseError, "\"terms\" must be an array");
  TernaryForm f(d);
  for (const auto& term : terms) {
    const json& exp = required(term, "exp");
    if (!exp.is_array() || exp.size() != 3) throw Error(ErrorCode::ParseError, "\"exp\" must be [i, j, k]");
    int e[3];
    for (int i = 0; i < 3; ++i) {
      if (!exp[static_cast<std::size_t>(i)].is_number_integer()) {
        throw Error(ErrorCode::ParseError, "exponents must be integers");
      }
      e[i] = exp[static_cast<std::size_t>(i)].get<int>();
      if (e[i] < 0) throw Error(ErrorCode::ParseError, "negative exponent");
    }
    if (e[0] + e[1] + e[2] != d) {
      throw Error(ErrorCode::ParseError, "exponent triple does not sum to the degree");
    }
    f.coeff({e[0], e[1], e[2]}) += cplx(number_at(term, "re", 0.0), number_at(term, "im", 0.0));
  }
  return f;
}

json pair_to_json(const SymPair& z) {
  const int d = z.d();
  json diag = json::array();
  for (int k = 0; k < d; ++k) diag.push_back(z.diag(k).real());
  const Eigen::MatrixXcd r = z.sym_matrix();
  json out = {{"d", d}, {"diag", std::move(diag)}, {"sym", matrix_json(r.real())}};
  if (z.max_imag() > 0.0) {
    json diag_imag = json::array();
    for (int k = 0; k < d; ++k) diag_imag.push_back(z.diag(k).imag());
    out["diag_imag"] = std::move(diag_imag);
    out["sym_imag"] = matrix_json(r.imag());
  }
  return out;
}

SymPair pair_from_json(const json& j) {
  const auto diag = number_list(required(j, "diag"), "\"diag\"");
  const int d = static_cast<int>(diag.size());
  if (d < 1) throw Error(ErrorCode::ParseError, "\"diag\" is empty");
  if (j.contains("d") && j.at("d") != d) throw Error(ErrorCode::ParseError, "\"d\" disagrees with \"diag\"");
  const Eigen::MatrixXd sym = matrix_from(required(j, "sym"), d, "\"sym\"");
  std::vector<double> diag_imag;
  Eigen::MatrixXd sym_imag;
  const bool has_diag_imag = j.contains("diag_imag");
  const bool has_sym_imag = j.contains("sym_imag");
  if (has_diag_imag) {
    diag_imag = number_list(j.at("diag_imag"), "\"diag_imag\"");
    if (static_cast<int>(diag_imag.size()) != d) throw Error(ErrorCode::ParseError, "\"diag_imag\" length");
  }
  if (has_sym_imag) sym_imag = matrix_from(j.at("sym_imag"), d, "\"sym_imag\"");
  return pair_from_parts(diag, sym, has_diag_imag ? &diag_imag : nullptr, has_sym_imag ? &sym_imag : nullptr);
}

json forms_to_json(const LinearFormSet& set) {
  json forms = json::array();
  for (const auto& l : set.forms) forms.push_back({l.a, l.b});
  return {{"forms", std::move(forms)}};
}

LinearFormSet forms_from_json(const json& j) {
  const json& forms = required(j, "forms");
  if (!forms.is_array()) throw Error(ErrorCode::ParseError, "\"forms\" must be an array");
  LinearFormSet set;
  for (const auto& f : forms) {
    const auto ab = number_list(f, "linear form");
    if (ab.size() != 2) throw Error(ErrorCode::ParseError, "linear form must be [a, b]");
    if (ab[0] == 0.0 && ab[1] == 0.0) throw Error(ErrorCode::ParseError, "linear form is identically zero");
    set.forms.push_back({ab[0], ab[1]});
  }
  return set;
}

json stats_to_json(const std::vector<PhaseStats>& stats) {
  json out = json::object();
  for (const auto& s : stats) {
    out[s.phase] = {{"status", to_string(s.status)},
                    {"steps_taken", s.steps_taken},
                    {"rejected_steps", s.rejected_steps},
                    {"max_residual_seen", s.max_residual_seen},
                    {"max_imag_seen", s.max_imag_seen},
                    {"from_cache", s.from_cache}};
  }
  return out;
}

json representation_to_json(const Representation& rep) {
  const auto d_values = rep.D();
  json out = {{"D", d_values},
              {"R", matrix_json(rep.R())},
              {"residual", rep.residual},
              {"is_real", rep.is_real},
              {"approximate", rep.approximate},
              {"ambiguous_sign", rep.ambiguous_sign},
              {"attempts", rep.attempts},
              {"path_stats", stats_to_json(rep.stats)}};
  if (!rep.is_real) {
    json d_imag = json::array();
    for (int k = 0; k < rep.pair.d(); ++k) d_imag.push_back(rep.pair.diag(k).imag());
    out["D_imag"] = std::move(d_imag);
    out["R_imag"] = matrix_json(rep.pair.sym_matrix().imag());
  }
  if (!rep.diagnostics.empty()) out["diagnostics"] = rep.diagnostics;
  return out;
}

Representation representation_from_json(const json& j) {
  const auto diag = number_list(required(j, "D"), "\"D\"");
  const int d = static_cast<int>(diag.size());
  if (d < 1) throw Error(ErrorCode::ParseError, "\"D\" is empty");
  const Eigen::MatrixXd sym = matrix_from(required(j, "R"), d, "\"R\"");
  std::vector<double> diag_imag;
  Eigen::MatrixXd sym_imag;
  const bool has_d_imag = j.contains("D_imag");
  const bool has_r_imag = j.contains("R_imag");
  if (has_d_imag) diag_imag = number_list(j.at("D_imag"), "\"D_imag\"");
  if (has_d_imag && static_cast<int>(diag_imag.size()) != d) throw Error(ErrorCode::ParseError, "\"D_imag\" length");
  if (has_r_imag) sym_imag = matrix_from(j.at("R_imag"), d, "\"R_imag\"");
  Representation rep;
  rep.pair = pair_from_parts(diag, sym, has_d_imag ? &diag_imag : nullptr, has_r_imag ? &sym_imag : nullptr);
  rep.is_real = rep.pair.is_real();
  if (j.contains("residual") && j.at("residual").is_number()) rep.residual = j.at("residual").get<double>();
  return rep;
}

json hyperbolicity_to_json(const HyperbolicityReport& report) {
  return {{"is_hyperbolic", report.is_hyperbolic},
          {"is_strict", report.is_strict},
          {"max_imag", report.max_imag},
          {"min_gap", report.min_gap},
          {"witness_direction", {report.witness_direction[0], report.witness_direction[1]}}};
}

}  // namespace hyperdet
