#pragma once

#include "dcsarch/aco.hpp"
#include "dcsarch/model.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace dcsarch {

/// Malformed or out-of-range input; the message names the offending field.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct LoadedInstance {
    ProblemInstance instance;
    AcoParams params;
};

/// Parses the instance JSON schema. Unknown keys are rejected; an absent
/// "aco" block (or absent keys inside it) takes the AcoParams defaults.
LoadedInstance parse_instance(std::string_view text);

/// Inverse of parse_instance; consecutive identical loops are grouped.
std::string serialize_instance(const ProblemInstance& inst, const AcoParams& params);

/// Flat node list: {"nodes": [{"id", "type", "parent", "connected_loops",
/// "assigned_loops"}]}. "type" is the catalog id, "parent" is null for the
/// root, loop indices are 0-based and parents must precede their children.
Architecture parse_architecture(std::string_view text, const ProblemInstance& inst);
std::string serialize_architecture(const Architecture& arch, const ProblemInstance& inst);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace dcsarch
