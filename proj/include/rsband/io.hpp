#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "rsband/design.hpp"
#include "rsband/lattice.hpp"
#include "rsband/polyalg.hpp"

namespace rsband {

using Json = nlohmann::ordered_json;

/// A model file is either a lattice Hamiltonian (whose characteristic
/// polynomial is then computed) or a bare characteristic polynomial.
struct ParsedModel {
  std::optional<BlochHamiltonian> hamiltonian;
  BiPoly f;
};

/// Validates against the model schema. Errors are SchemaViolation with a
/// JSON pointer to the offending field.
///   {"type":"hamiltonian","r":2,"p":1,"q":1,
///    "hoppings":[{"m":1,"n":1,"s":1,"re":0.1,"im":-0.2}, ...]}
///   {"type":"bipoly","r":2,"u":3,"coeffs":[[{"re":..,"im":..}, ...], ...]}
/// For bipoly, coeffs[i][j] multiplies omega^i z^j; an optional "z_shift"
/// records a cleared Laurent power.
ParsedModel parse_model(const Json& j);
/// Reads and parses a file; malformed JSON is a ParseError.
ParsedModel load_model(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

Json serialize(const BlochHamiltonian& h);
Json serialize(const BiPoly& f);
Json serialize(const ParsedModel& m);

Json to_json(Complex c);
Complex complex_from_json(const Json& j, const std::string& pointer);
Json to_json(const std::vector<Complex>& v);

/// {"A":[A0,A1,A2],"B":[B0,B1,B2,B3]} with complex entries as {"re","im"}.
TwoBandCoefficients parse_coefficients(const Json& j);
Json serialize(const TwoBandCoefficients& c);

/// {"targets":[six complex], "anchor": complex (optional, default 1)}.
DesignTarget parse_targets(const Json& j);

}  // namespace rsband
