#pragma once

#include <string>

#include "dudley/dudley.hpp"
#include "dudley/errors.hpp"
#include "dudley/geometry.hpp"
#include "dudley/packing.hpp"

namespace dudley {

/// Malformed or inconsistent JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Writers emit numbers with 17 significant digits and a fixed key order, so
// equal inputs give byte-identical text. Non-finite numbers become null.

std::string body_to_json(const Body& body);
Body body_from_json(const std::string& text);

std::string hpoly_to_json(const HPolytope& P);
HPolytope hpoly_from_json(const std::string& text);

std::string packing_to_json(const SpherePacking& packing);
SpherePacking packing_from_json(const std::string& text);

std::string construction_to_json(const Construction& c);
Construction construction_from_json(const std::string& text);

std::string report_to_json(const ApproximationReport& report);
std::string audit_to_json(const ProofAudit& audit);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dudley
