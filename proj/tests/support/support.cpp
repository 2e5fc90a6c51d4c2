#include "support.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef CGRL_CORPUS_DIR
#error "CGRL_CORPUS_DIR must be defined"
#endif

namespace fs = std::filesystem;

namespace cgrl::test {

std::string corpusDir() { return CGRL_CORPUS_DIR; }

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> corpusFiles(const std::string& subdir) {
    std::vector<std::string> out;
    fs::path root = fs::path(corpusDir()) / subdir;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file() && e.path().extension() == ".mjs") out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

Analysis analyzeSource(const std::string& source, const std::string& unit, Variant variant,
                       const NativeConfig& natives) {
    BoundProgram program = loadProgram(source, unit, natives);
    ExecutionResult exec = execute(program, natives);
    SolvedGraphs graphs = buildCallGraph(program, variant, natives);
    Analysis a{std::move(program), std::move(exec), std::move(graphs), {}};
    a.findings = detect(a.context(natives), a.exec.dcg);
    return a;
}

Analysis analyzeFile(const std::string& path, Variant variant, const NativeConfig& natives) {
    return analyzeSource(readFile(path), fs::path(path).filename().string(), variant, natives);
}

const EdgeFindings* findEdge(const Analysis& a, int line, const std::string& callee) {
    for (const auto& f : a.findings)
        if (f.edge.site.line == line && f.edge.callee == callee) return &f;
    return nullptr;
}

std::set<RootCauseLabel> edgeLabels(const Analysis& a, const EdgeFindings& f, const NativeConfig& natives) {
    std::set<RootCauseLabel> out;
    for (const auto& flow : f.attributed) out.insert(labelFlow(flow, a.exec.trace, a.program, natives));
    return out;
}

// ---- program generator ----

namespace {

class ProgramGen {
public:
    ProgramGen(std::mt19937_64& rng, int maxStatements) : rng_(rng), max_(maxStatements) {}

    std::string run() {
        emit("var o = {};");
        int target = pick(4, max_);
        while (count_ < target) step();
        return out_.str();
    }

private:
    std::mt19937_64& rng_;
    int max_;
    int count_ = 0;
    int next_ = 0;
    std::ostringstream out_;
    std::vector<std::string> leaves_;   // names holding callable, argument-free functions
    std::vector<std::string> callers_;  // function(p) { p(); }
    std::vector<std::string> relays_;   // function(p) { return p; }
    std::vector<std::string> makers_;   // function() { return function() {}; }
    std::vector<std::string> props_;    // property names of `o` holding leaves

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    template <class T> const T& choose(const std::vector<T>& v) { return v[pick(0, static_cast<int>(v.size()) - 1)]; }
    std::string fresh(const char* prefix) { return prefix + std::to_string(next_++); }

    void emit(const std::string& s) {
        out_ << s << "\n";
        ++count_;
    }

    std::string leafRef() {
        if (!props_.empty() && pick(0, 4) == 0) return "o." + choose(props_);
        return choose(leaves_);
    }

    std::string propAccess(const std::string& name) {
        switch (pick(0, 2)) {
            case 0: return "o." + name;
            case 1: return "o[\"" + name + "\"]";
            default: return "o[\"" + name.substr(0, 1) + "\" + \"" + name.substr(1) + "\"]";
        }
    }

    void step() {
        if (leaves_.empty() || pick(0, 9) == 0) {
            std::string n = fresh("l");
            emit("function " + n + "() {}");
            leaves_.push_back(n);
            return;
        }
        std::string v = fresh("v");
        switch (pick(0, 17)) {
            case 0: {
                std::string n = fresh("h");
                emit("function " + n + "(p) { p(); }");
                callers_.push_back(n);
                return;
            }
            case 1: {
                std::string n = fresh("r");
                emit("function " + n + "(p) { return p; }");
                relays_.push_back(n);
                return;
            }
            case 2: {
                std::string n = fresh("m");
                emit("function " + n + "() { return function() {}; }");
                makers_.push_back(n);
                return;
            }
            case 3: emit("var " + v + " = " + (pick(0, 1) ? leafRef() : "function() {}") + ";"); break;
            case 4:
                if (relays_.empty()) return;
                emit("var " + v + " = " + choose(relays_) + "(" + leafRef() + ");");
                break;
            case 5:
                if (makers_.empty()) return;
                emit("var " + v + " = " + choose(makers_) + "();");
                break;
            case 6: emit("var " + v + " = identityFn(" + leafRef() + ");"); break;
            case 7: emit("var " + v + " = " + leafRef() + ".bind(null);"); break;
            case 8:
            case 9: {
                std::string p = fresh("p");
                emit(propAccess(p) + " = " + leafRef() + ";");
                props_.push_back(p);
                return;
            }
            case 10: emit(leafRef() + "();"); return;
            case 11:
                if (props_.empty()) return;
                emit(propAccess(choose(props_)) + "();");
                return;
            case 12:
                if (callers_.empty()) return;
                emit(choose(callers_) + "(" + leafRef() + ");");
                return;
            case 13: emit("forEachItem([1], " + leafRef() + ");"); return;
            case 14:
                if (callers_.empty()) return;
                if (pick(0, 1))
                    emit(choose(callers_) + ".call(null, " + leafRef() + ");");
                else
                    emit(choose(callers_) + ".apply(null, [" + leafRef() + "]);");
                return;
            case 15:
                emit("var " + v + " = (function(q) { return function() { q(); }; })(" + leafRef() + ");");
                break;
            case 16: emit("evalCode(\"" + choose(leaves_) + "();\");"); return;
            default: {
                std::string g = fresh("g");
                emit("var " + g + " = { get x() { return " + leafRef() + "; } };");
                if (count_ >= max_) return;
                emit("var " + v + " = " + g + ".x;");
                break;
            }
        }
        leaves_.push_back(v);
    }
};

}  // namespace

std::string generateProgram(std::mt19937_64& rng, int maxStatements) { return ProgramGen(rng, maxStatements).run(); }

// ---- trace generator ----

FlowTrace generateTrace(std::mt19937_64& rng, std::size_t maxEntries) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const char* names[] = {"a", "b", "c"};
    const char* scopes[] = {kGlobalScope, "f#0", "g#1"};
    const char* callees[] = {"f#0", "g#1", "native:forEachItem"};
    FlowTrace t;
    std::size_t n = static_cast<std::size_t>(pick(1, static_cast<int>(maxEntries)));
    for (std::size_t i = 0; i < n; ++i) {
        TraceEntry e;
        e.index = i;
        e.funcValue = static_cast<FuncValueId>(pick(1, 4));
        e.loc = {"gen", static_cast<int>(i) + 1, 0, 0};
        e.funcId = "fn" + std::to_string(e.funcValue);
        int k = pick(0, 9);
        switch (k) {
            case 0: e.kind = EntryKind::Create; break;
            case 1:
            case 2:
                e.kind = EntryKind::VarWrite;
                e.name = names[pick(0, 2)];
                e.binding = Binding{BindingKind::Local, scopes[pick(0, 2)], -1};
                break;
            case 3:
                e.kind = EntryKind::VarRead;
                e.name = names[pick(0, 2)];
                e.binding = Binding{pick(0, 1) ? BindingKind::Local : BindingKind::Outer, scopes[pick(0, 2)], -1};
                break;
            case 4: {
                e.kind = EntryKind::VarRead;
                int r = pick(0, 1);
                e.name = r ? "p" : "<ret>";
                e.binding = Binding{r ? BindingKind::Param : BindingKind::Return, callees[pick(0, 1)], r ? pick(0, 1) : -1};
                break;
            }
            case 5:
                e.kind = EntryKind::PropWrite;
                e.name = names[pick(0, 2)];
                break;
            case 6:
                e.kind = EntryKind::PropRead;
                e.name = names[pick(0, 2)];
                break;
            case 7:
            case 8: {
                e.kind = EntryKind::Invoke;
                e.funcId = callees[pick(0, 2)];
                int nargs = pick(0, 2);
                for (int a = 0; a < nargs; ++a)
                    e.args.push_back({a, static_cast<FuncValueId>(pick(1, 4))});
                int flag = pick(0, 9);
                if (flag == 0) e.flags |= kFlagNativeCallbackBoundary;
                if (flag == 1) e.flags |= kFlagBoundCall;
                if (flag == 2) e.flags |= kFlagMultiLevelNative;
                break;
            }
            default:
                e.kind = EntryKind::Return;
                e.via = callees[pick(0, 1)];
                break;
        }
        if (e.kind == EntryKind::Create) t.creators.try_emplace(e.funcValue, e.funcId);
        t.entries.push_back(std::move(e));
    }
    return t;
}

// ---- brute-force copies ----

namespace {

std::optional<std::size_t> bfPreceding(const FlowTrace& t, std::size_t from, FuncValueId v) {
    for (std::size_t j = from; j-- > 0;) {
        const TraceEntry& e = t.entries[j];
        bool readOrCreate = e.kind == EntryKind::Create || e.kind == EntryKind::VarRead || e.kind == EntryKind::PropRead;
        if (readOrCreate && e.funcValue == v) return j;
    }
    return std::nullopt;
}

bool bfWrites(const TraceEntry& r, const TraceEntry& w, FuncValueId v) {
    if (r.kind == EntryKind::VarRead && r.binding && r.binding->kind == BindingKind::Param) {
        if (w.kind != EntryKind::Invoke || w.funcId != r.binding->scope) return false;
        for (const auto& a : w.args)
            if (a.position == r.binding->index && a.funcValue == v) return true;
        return false;
    }
    if (w.funcValue != v) return false;
    if (r.kind == EntryKind::VarRead && r.binding && r.binding->kind == BindingKind::Return)
        return w.kind == EntryKind::Return && w.via == r.binding->scope;
    if (r.kind == EntryKind::VarRead)
        return w.kind == EntryKind::VarWrite && w.name == r.name && r.binding && w.binding &&
               w.binding->scope == r.binding->scope;
    if (r.kind == EntryKind::PropRead) return w.kind == EntryKind::PropWrite && w.name == r.name;
    return false;
}

std::optional<std::size_t> bfMatching(const FlowTrace& t, std::size_t read, FuncValueId v) {
    for (std::size_t j = read; j-- > 0;)
        if (bfWrites(t.entries[read], t.entries[j], v)) return j;
    return std::nullopt;
}

}  // namespace

CopyChainResult bruteForceCopies(const FlowTrace& trace, std::size_t invoke) {
    CopyChainResult out;
    const TraceEntry& call = trace.entries.at(invoke);
    if (call.has(kFlagBoundCall) || call.has(kFlagMultiLevelNative)) return out;
    FuncValueId v = call.funcValue;
    std::vector<DynamicCopy> copies;
    auto tr = bfPreceding(trace, invoke, v);
    if (!tr) return out;
    copies.push_back({*tr, invoke, invoke, true});
    bool complete = true;
    while (trace.entries[*tr].kind != EntryKind::Create) {
        auto tw = bfMatching(trace, *tr, v);
        if (!tw) {
            complete = false;
            break;
        }
        auto next = bfPreceding(trace, *tw, v);
        if (!next) {
            complete = false;
            break;
        }
        copies.insert(copies.begin(), DynamicCopy{*next, *tw, *tr, false});
        tr = next;
    }
    out.chain = std::move(copies);
    out.complete = complete;
    return out;
}

std::vector<std::vector<bool>> transitiveClosure(const std::vector<std::vector<bool>>& adjacency) {
    auto c = adjacency;
    std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i) c[i][i] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (c[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (c[k][j]) c[i][j] = true;
    return c;
}

}  // namespace cgrl::test
