#ifndef AAUT_IO_HPP
#define AAUT_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "aaut/conjugacy.hpp"
#include "aaut/dynamics.hpp"
#include "aaut/element.hpp"
#include "aaut/strand.hpp"

namespace aaut {

// Parses the frozen "aaut v1" text form and canonicalizes. Errors carry
// line/column positions.
Element parse_element(std::string const& text);

nlohmann::json to_json(DynamicsReport const& r);
nlohmann::json to_json(StrandDiagram const& d);
nlohmann::json to_json(Verdict const& v);
nlohmann::json to_json(OrbitalType const& t);

StrandDiagram diagram_from_json(nlohmann::json const& j, int root_arity);

std::string to_dot(StrandDiagram const& d);
std::string to_dot(OrbitalType const& t);

// The command-line surface, separated from main() so runs are testable.
// Returns the exit code; stdout/stderr text lands in the two strings.
int run_cli(std::vector<std::string> const& args, std::string& out,
            std::string& err);

}  // namespace aaut

#endif
