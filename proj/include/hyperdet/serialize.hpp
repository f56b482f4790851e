#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "hyperdet/detmap.hpp"
#include "hyperdet/nuij.hpp"
#include "hyperdet/pipeline.hpp"
#include "hyperdet/ternary_form.hpp"

namespace hyperdet {

using json = nlohmann::json;

/// {"degree": d, "terms": [{"exp": [i, j, k], "re": a, "im": b}, ...]}.
/// Zero coefficients are skipped and "im" is written only when nonzero.
json form_to_json(const TernaryForm& f);
/// Rejects exponent triples that are negative or do not sum to the degree;
/// repeated triples accumulate.
TernaryForm form_from_json(const json& j);

/// {"d": d, "diag": [...], "sym": [[...], ...]}, plus "diag_imag" and
/// "sym_imag" for non-real pairs.
json pair_to_json(const SymPair& z);
SymPair pair_from_json(const json& j);

/// {"forms": [[a, b], ...]}.
json forms_to_json(const LinearFormSet& set);
LinearFormSet forms_from_json(const json& j);

json stats_to_json(const std::vector<PhaseStats>& stats);

/// {"D": [...], "R": [[...]], "residual": r, "is_real": b, "path_stats": {...}, ...}.
json representation_to_json(const Representation& rep);
/// Reads "D" and "R" (and "R_imag" when present) back into a representation.
Representation representation_from_json(const json& j);

json hyperbolicity_to_json(const HyperbolicityReport& report);

/// Parses JSON text, mapping syntax errors onto ErrorCode::ParseError.
json parse_json_text(const std::string& text);

}  // namespace hyperdet
