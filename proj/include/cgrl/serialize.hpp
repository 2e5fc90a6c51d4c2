// JSON forms of the inter-stage artifacts. Every document carries
// "schemaVersion" and "kind"; the trace is JSON Lines behind a header line.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgrl/acg.hpp"
#include "cgrl/detector.hpp"
#include "cgrl/frontend.hpp"
#include "cgrl/trace.hpp"

namespace cgrl {

inline constexpr int kSchemaVersion = 1;

/// Malformed artifact. `field` is a JSON-pointer-like path.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& file, const std::string& field, const std::string& msg)
        : std::runtime_error(file + ": field '" + field + "': " + msg), file_(file), field_(field) {}
    const std::string& file() const { return file_; }
    const std::string& field() const { return field_; }

private:
    std::string file_;
    std::string field_;
};

std::string traceToJsonl(const FlowTrace& trace);
/// `file` is only used in error messages.
FlowTrace traceFromJsonl(std::string_view text, const std::string& file = "<trace>");

nlohmann::json dcgToJson(const DynamicCallGraph& dcg);
DynamicCallGraph dcgFromJson(const nlohmann::json& j, const std::string& file = "<dcg>");

nlohmann::json flowGraphToJson(const FlowGraph& fg);
FlowGraph flowGraphFromJson(const nlohmann::json& j, const std::string& file = "<flowGraph>");

nlohmann::json callGraphToJson(const CallGraph& cg);
/// Site owners are not part of the schema; see attachSiteOwners.
CallGraph callGraphFromJson(const nlohmann::json& j, const std::string& file = "<callGraph>");

/// Fills cg.siteOwner (and functions) from the program's call sites.
void attachSiteOwners(CallGraph& cg, const BoundProgram& program);

/// The artifact kind of a document ("trace" for a JSONL header line).
std::string artifactKind(const nlohmann::json& j);

nlohmann::json copyToJson(const DynamicCopy& c);
nlohmann::json chainToJson(const CopyChainResult& c);
nlohmann::json flowToJson(const MissingFlow& f);
nlohmann::json flowSetToJson(const FlowSet& s);

}  // namespace cgrl
