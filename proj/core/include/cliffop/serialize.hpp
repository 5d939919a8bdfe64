#pragma once

// JSON forms of reports, candidates and decompositions. Fields are written as
// {"e1": "expr", "e1^e2": "expr"}; multivector values use render().

#include <nlohmann/json.hpp>

#include "cliffop/kernel.hpp"
#include "cliffop/riccati.hpp"

namespace cliffop {

using Json = nlohmann::json;

/// A real number, or {"re": x, "im": y} when the imaginary part is nonzero.
Json complex_json(Complex z);
/// Accepts a number, {"re": x, "im": y}, or a string such as "0.5-2i".
/// Throws InvalidArgument otherwise.
Complex complex_from_json(const Json& j);

void to_json(Json& j, const ResidualReport& r);
void to_json(Json& j, const Verification& v);

/// Rendered components, or null for a field without a symbolic form.
Json field_json(const MultivectorField& f);
/// Parses {"e1": "x2", ...} or a bare string for a scalar field.
MultivectorField field_from_json(Signature sig, const Json& j);

Json candidate_json(const RiccatiCandidate& c);
/// Reads {"f": {...}, "v": "...", "provenance": tag} as a user candidate
/// tagged with the given provenance.
RiccatiCandidate candidate_from_json(Signature sig, const Json& j);

/// Fields plus their values at `probe`.
Json decomposition_json(const DecompositionResult& d, std::span<const double> probe);
Json family_gap_json(const FamilyGapReport& r);

}  // namespace cliffop
