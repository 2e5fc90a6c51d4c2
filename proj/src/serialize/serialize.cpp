#include "cgrl/serialize.hpp"

#include <algorithm>
#include <sstream>

namespace cgrl {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json& req(const json& o, const std::string& key, const std::string& file, const std::string& path) {
    if (!o.is_object()) throw SchemaError(file, path.empty() ? "<root>" : path, "expected an object");
    auto it = o.find(key);
    if (it == o.end()) throw SchemaError(file, join(path, key), "missing");
    return *it;
}

std::string reqString(const json& o, const std::string& key, const std::string& file, const std::string& path) {
    const json& v = req(o, key, file, path);
    if (!v.is_string()) throw SchemaError(file, join(path, key), "expected a string");
    return v.get<std::string>();
}

long long reqInt(const json& o, const std::string& key, const std::string& file, const std::string& path) {
    const json& v = req(o, key, file, path);
    if (!v.is_number_integer()) throw SchemaError(file, join(path, key), "expected an integer");
    return v.get<long long>();
}

const json& reqArray(const json& o, const std::string& key, const std::string& file, const std::string& path) {
    const json& v = req(o, key, file, path);
    if (!v.is_array()) throw SchemaError(file, join(path, key), "expected an array");
    return v;
}

void checkHeader(const json& j, const std::string& kind, const std::string& file) {
    long long v = reqInt(j, "schemaVersion", file, "");
    if (v != kSchemaVersion) throw SchemaError(file, "schemaVersion", "unsupported version " + std::to_string(v));
    if (reqString(j, "kind", file, "") != kind) throw SchemaError(file, "kind", "expected \"" + kind + "\"");
}

SourceLoc locFromJson(const json& j, const std::string& file, const std::string& path) {
    SourceLoc loc;
    loc.unit = reqString(j, "unit", file, path);
    loc.line = static_cast<int>(reqInt(j, "line", file, path));
    loc.col = static_cast<int>(reqInt(j, "col", file, path));
    if (j.contains("evalDepth")) loc.evalDepth = static_cast<int>(reqInt(j, "evalDepth", file, path));
    return loc;
}

json bindingToJson(const Binding& b) {
    return {{"kind", bindingKindName(b.kind)}, {"scope", b.scope}, {"index", b.index}};
}

json entryToJson(const TraceEntry& e) {
    json j = {{"index", e.index},       {"kind", entryKindName(e.kind)}, {"funcId", e.funcId},
              {"funcValue", e.funcValue}, {"loc", locToJson(e.loc)},     {"flags", flagNames(e.flags)}};
    if (!e.name.empty()) j["name"] = e.name;
    if (e.binding) j["binding"] = bindingToJson(*e.binding);
    if (!e.args.empty()) {
        json args = json::array();
        for (const auto& a : e.args) args.push_back({{"position", a.position}, {"funcValue", a.funcValue}});
        j["args"] = std::move(args);
    }
    if (!e.via.empty()) j["via"] = e.via;
    if (e.boundTarget) j["boundTarget"] = *e.boundTarget;
    return j;
}

TraceEntry entryFromJson(const json& j, const std::string& file, const std::string& path) {
    TraceEntry e;
    e.index = static_cast<std::size_t>(reqInt(j, "index", file, path));
    auto kind = parseEntryKind(reqString(j, "kind", file, path));
    if (!kind) throw SchemaError(file, join(path, "kind"), "unknown entry kind");
    e.kind = *kind;
    e.funcId = reqString(j, "funcId", file, path);
    e.funcValue = static_cast<FuncValueId>(reqInt(j, "funcValue", file, path));
    e.loc = locFromJson(req(j, "loc", file, path), file, join(path, "loc"));
    const json& flags = reqArray(j, "flags", file, path);
    for (const auto& f : flags) {
        auto bit = f.is_string() ? parseFlag(f.get<std::string>()) : std::nullopt;
        if (!bit) throw SchemaError(file, join(path, "flags"), "unknown flag");
        e.flags |= *bit;
    }
    if (j.contains("name")) e.name = reqString(j, "name", file, path);
    if (j.contains("binding")) {
        const json& b = j["binding"];
        std::string bp = join(path, "binding");
        auto bk = parseBindingKind(reqString(b, "kind", file, bp));
        if (!bk) throw SchemaError(file, join(bp, "kind"), "unknown binding kind");
        e.binding = Binding{*bk, reqString(b, "scope", file, bp), static_cast<int>(reqInt(b, "index", file, bp))};
    }
    if (j.contains("args")) {
        const json& args = reqArray(j, "args", file, path);
        for (std::size_t i = 0; i < args.size(); ++i) {
            std::string ap = join(path, "args[" + std::to_string(i) + "]");
            e.args.push_back({static_cast<int>(reqInt(args[i], "position", file, ap)),
                              static_cast<FuncValueId>(reqInt(args[i], "funcValue", file, ap))});
        }
    }
    if (j.contains("via")) e.via = reqString(j, "via", file, path);
    if (j.contains("boundTarget")) e.boundTarget = static_cast<FuncValueId>(reqInt(j, "boundTarget", file, path));
    return e;
}

}  // namespace

std::string traceToJsonl(const FlowTrace& trace) {
    std::ostringstream out;
    out << json{{"schemaVersion", kSchemaVersion}, {"kind", "trace"}, {"entries", trace.entries.size()}}.dump()
        << '\n';
    for (const auto& e : trace.entries) out << entryToJson(e).dump() << '\n';
    return out.str();
}

FlowTrace traceFromJsonl(std::string_view text, const std::string& file) {
    FlowTrace trace;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = false;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        std::string path = "line " + std::to_string(lineNo);
        if (j.is_discarded()) throw SchemaError(file, path, "not valid JSON");
        if (!header) {
            checkHeader(j, "trace", file);
            header = true;
            continue;
        }
        TraceEntry e = entryFromJson(j, file, path);
        if (e.index != trace.entries.size()) throw SchemaError(file, join(path, "index"), "entries out of order");
        if (e.kind == EntryKind::Create) trace.creators.try_emplace(e.funcValue, e.funcId);
        trace.entries.push_back(std::move(e));
    }
    if (!header) throw SchemaError(file, "schemaVersion", "missing header line");
    return trace;
}

json dcgToJson(const DynamicCallGraph& dcg) {
    json edges = json::array();
    for (const auto& e : dcg.edges)
        edges.push_back({{"caller", e.caller}, {"site", locToJson(e.site)}, {"callee", e.callee}});
    return {{"schemaVersion", kSchemaVersion}, {"kind", "dynamicCallGraph"}, {"entrypoints", dcg.entrypoints},
            {"edges", std::move(edges)}};
}

DynamicCallGraph dcgFromJson(const json& j, const std::string& file) {
    checkHeader(j, "dynamicCallGraph", file);
    DynamicCallGraph dcg;
    for (const auto& ep : reqArray(j, "entrypoints", file, "")) {
        if (!ep.is_string()) throw SchemaError(file, "entrypoints", "expected strings");
        dcg.entrypoints.insert(ep.get<std::string>());
    }
    const json& edges = reqArray(j, "edges", file, "");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::string p = "edges[" + std::to_string(i) + "]";
        dcg.edges.insert({reqString(edges[i], "caller", file, p),
                          locFromJson(req(edges[i], "site", file, p), file, join(p, "site")),
                          reqString(edges[i], "callee", file, p)});
    }
    return dcg;
}

json flowGraphToJson(const FlowGraph& fg) {
    std::vector<FlowNode> nodes = fg.nodes();
    std::sort(nodes.begin(), nodes.end());
    json ns = json::array();
    for (const auto& n : nodes) ns.push_back({{"id", n.id()}, {"kind", nodeKindName(n.kind)}, {"key", n.key()}});
    json es = json::array();
    for (const auto& [a, b] : fg.edges()) es.push_back(json::array({a.id(), b.id()}));
    return {{"schemaVersion", kSchemaVersion}, {"kind", "flowGraph"}, {"variant", variantName(fg.variant())},
            {"nodes", std::move(ns)}, {"edges", std::move(es)}};
}

FlowGraph flowGraphFromJson(const json& j, const std::string& file) {
    checkHeader(j, "flowGraph", file);
    auto variant = parseVariant(reqString(j, "variant", file, ""));
    if (!variant) throw SchemaError(file, "variant", "expected optimistic or pessimistic");
    FlowGraph fg(*variant);
    std::map<std::string, FlowNode> byId;
    const json& nodes = reqArray(j, "nodes", file, "");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::string p = "nodes[" + std::to_string(i) + "]";
        auto kind = parseNodeKind(reqString(nodes[i], "kind", file, p));
        if (!kind) throw SchemaError(file, join(p, "kind"), "unknown node kind");
        FlowNode n;
        try {
            n = FlowNode::fromKindAndKey(*kind, reqString(nodes[i], "key", file, p));
        } catch (const std::invalid_argument& e) {
            throw SchemaError(file, join(p, "key"), e.what());
        }
        std::string id = reqString(nodes[i], "id", file, p);
        if (id != n.id()) throw SchemaError(file, join(p, "id"), "does not match kind and key");
        byId.emplace(id, n);
        fg.addNode(n);
    }
    const json& edges = reqArray(j, "edges", file, "");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::string p = "edges[" + std::to_string(i) + "]";
        const json& e = edges[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw SchemaError(file, p, "expected [src, dst]");
        auto a = byId.find(e[0].get<std::string>());
        auto b = byId.find(e[1].get<std::string>());
        if (a == byId.end() || b == byId.end()) throw SchemaError(file, p, "refers to an undeclared node");
        fg.addEdge(a->second, b->second);
    }
    return fg;
}

json callGraphToJson(const CallGraph& cg) {
    json edges = json::array();
    for (const auto& [site, callee] : cg.edges) edges.push_back({{"site", locToJson(site)}, {"callee", callee}});
    return {{"schemaVersion", kSchemaVersion}, {"kind", "callGraph"}, {"entrypoints", cg.entrypoints},
            {"edges", std::move(edges)}};
}

CallGraph callGraphFromJson(const json& j, const std::string& file) {
    checkHeader(j, "callGraph", file);
    CallGraph cg;
    if (j.contains("entrypoints"))
        for (const auto& ep : reqArray(j, "entrypoints", file, "")) {
            if (!ep.is_string()) throw SchemaError(file, "entrypoints", "expected strings");
            cg.entrypoints.insert(ep.get<std::string>());
        }
    else
        cg.entrypoints.insert(kTopLevel);
    const json& edges = reqArray(j, "edges", file, "");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::string p = "edges[" + std::to_string(i) + "]";
        std::string callee = reqString(edges[i], "callee", file, p);
        cg.edges.insert({locFromJson(req(edges[i], "site", file, p), file, join(p, "site")), callee});
        cg.functions.insert(callee);
    }
    return cg;
}

void attachSiteOwners(CallGraph& cg, const BoundProgram& program) {
    for (const auto& s : program.callSites()) cg.siteOwner[s.loc] = s.enclosing;
    for (const auto& f : program.program().functions) cg.functions.insert(f->id);
}

std::string artifactKind(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) return {};
    return j["kind"].get<std::string>();
}

json copyToJson(const DynamicCopy& c) {
    return {{"read", c.read}, {"write", c.write}, {"dest", c.dest}, {"invoke", c.invoke}};
}

json chainToJson(const CopyChainResult& c) {
    json chain = json::array();
    for (const auto& copy : c.chain) chain.push_back(copyToJson(copy));
    json j = {{"complete", c.complete}, {"copies", std::move(chain)}};
    if (c.reason) j["reason"] = gapReasonName(*c.reason);
    return j;
}

json flowToJson(const MissingFlow& f) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, MissingFGNode>) {
                return {{"type", "MissingFGNode"}, {"entry", v.entry}};
            } else if constexpr (std::is_same_v<T, MissingFGPath>) {
                return {{"type", "MissingFGPath"}, {"src", v.src.id()}, {"dst", v.dst.id()}, {"copy", copyToJson(v.copy)}};
            } else if constexpr (std::is_same_v<T, DependentCall>) {
                return {{"type", "DependentCall"}, {"write", v.write}, {"site", locToJson(v.site)}, {"callee", v.callee}};
            } else {
                return {{"type", "Unresolved"}, {"reason", gapReasonName(v.reason)}};
            }
        },
        f);
}

json flowSetToJson(const FlowSet& s) {
    json out = json::array();
    for (const auto& f : s) out.push_back(flowToJson(f));
    return out;
}

}  // namespace cgrl
