#include "cgrl/interp.hpp"

#include <cmath>
#include <deque>
#include <memory>
#include <random>
#include <sstream>
#include <unordered_map>
#include <variant>

namespace cgrl {

RuntimeError::RuntimeError(SourceLoc loc, const std::string& message)
    : std::runtime_error(loc.str() + ": " + message), loc_(std::move(loc)) {}

StepBudgetExceeded::StepBudgetExceeded(SourceLoc loc, std::uint64_t budget)
    : RuntimeError(std::move(loc), "step budget of " + std::to_string(budget) + " exceeded") {}

BoundProgram loadProgram(std::string_view source, const std::string& unit, const NativeConfig& natives) {
    return resolveBindings(parseProgram(source, unit), natives.globalNames());
}

namespace {

using namespace ast;

struct Object;
struct Function;
struct Env;

using Value = std::variant<std::monostate, bool, double, std::string, Object*, Function*>;

struct Slot {
    Value value;
    Function* getter = nullptr;
    Function* setter = nullptr;
    bool accessor() const { return getter || setter; }
};

struct Object {
    bool isArray = false;
    std::vector<Value> elements;
    std::vector<std::string> order;
    std::unordered_map<std::string, Slot> props;

    Slot* find(const std::string& key) {
        auto it = props.find(key);
        return it == props.end() ? nullptr : &it->second;
    }
    Slot& insert(const std::string& key) {
        auto [it, added] = props.try_emplace(key);
        if (added) order.push_back(key);
        return it->second;
    }
};

struct Function {
    enum class Kind { User, Native, Bound };
    Kind kind = Kind::User;
    FuncValueId id = 0;
    std::string funcId;
    const FunctionDef* def = nullptr;
    Env* env = nullptr;
    const NativeSpec* native = nullptr;
    Function* target = nullptr;
    Value boundThis;
    std::vector<Value> boundArgs;
    Object props;
};

struct Env {
    Env* parent = nullptr;
    std::unordered_map<std::string, Value> vars;
};

struct Frame {
    std::string id;
    bool native = false;
    std::string nativeName;
};

struct Ctx {
    Env* env = nullptr;
    Value thisVal;
    std::string fnId;  // FunctionId or kTopLevel
};

struct CallOpts {
    std::uint32_t invokeFlags = 0;
    std::uint32_t formalFlags = 0;
    bool recordArgs = true;
};

struct CallResult {
    Value value;
    std::string returner;  // FunctionId whose return produced `value`
};

Function* asFunction(const Value& v) {
    auto* p = std::get_if<Function*>(&v);
    return p ? *p : nullptr;
}

Object* asObject(const Value& v) {
    auto* p = std::get_if<Object*>(&v);
    return p ? *p : nullptr;
}

std::string numberToString(double d) {
    if (std::isnan(d)) return "NaN";
    if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
    if (d == std::floor(d) && std::fabs(d) < 1e15) return std::to_string(static_cast<long long>(d));
    std::ostringstream os;
    os.precision(15);
    os << d;
    return os.str();
}

std::string toString(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "null";
            else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else if constexpr (std::is_same_v<T, double>) return numberToString(x);
            else if constexpr (std::is_same_v<T, std::string>) return x;
            else if constexpr (std::is_same_v<T, Object*>) return x->isArray ? "[array]" : "[object]";
            else return "[function]";
        },
        v);
}

double toNumber(const Value& v) {
    if (std::holds_alternative<std::monostate>(v)) return 0;
    if (auto* b = std::get_if<bool>(&v)) return *b ? 1 : 0;
    if (auto* d = std::get_if<double>(&v)) return *d;
    if (auto* s = std::get_if<std::string>(&v)) {
        if (s->empty()) return 0;
        char* end = nullptr;
        double d = std::strtod(s->c_str(), &end);
        return *end == '\0' ? d : std::nan("");
    }
    return std::nan("");
}

bool truthy(const Value& v) {
    if (std::holds_alternative<std::monostate>(v)) return false;
    if (auto* b = std::get_if<bool>(&v)) return *b;
    if (auto* d = std::get_if<double>(&v)) return *d != 0 && !std::isnan(*d);
    if (auto* s = std::get_if<std::string>(&v)) return !s->empty();
    return true;
}

bool strictEquals(const Value& a, const Value& b) {
    if (a.index() != b.index()) return false;
    if (auto* d = std::get_if<double>(&a)) return *d == std::get<double>(b);
    return a == b;
}

/// Canonical array index, or -1.
long long arrayIndex(const std::string& key) {
    if (key.empty() || key.size() > 15) return -1;
    if (key.size() > 1 && key[0] == '0') return -1;
    long long n = 0;
    for (char c : key) {
        if (c < '0' || c > '9') return -1;
        n = n * 10 + (c - '0');
    }
    return n;
}

class Interpreter {
public:
    Interpreter(const BoundProgram& program, const NativeConfig& natives, const ExecutionOptions& options)
        : program_(program), natives_(natives), options_(options), rng_(options.seed) {}

    ExecutionResult run() {
        ExecutionResult result;
        result_ = &result;
        result.dcg.entrypoints.insert(kTopLevel);
        stack_.push_back({kTopLevel, false, {}});
        global_ = newEnv(nullptr);
        for (const auto& name : program_.program().topLevelNames) global_->vars.emplace(name, Value{});
        Ctx ctx{global_, Value{}, kTopLevel};
        try {
            execBody(program_.program().body, ctx);
        } catch (const StepBudgetExceeded& e) {
            result.error = ExecutionError{ExecutionError::Kind::StepBudget, e.loc(), e.what()};
        } catch (const RuntimeError& e) {
            result.error = ExecutionError{ExecutionError::Kind::Runtime, e.loc(), e.what()};
        }
        result_ = nullptr;
        return result;
    }

private:
    const BoundProgram& program_;
    const NativeConfig& natives_;
    ExecutionOptions options_;
    std::mt19937_64 rng_;
    ExecutionResult* result_ = nullptr;

    std::deque<Object> objects_;
    std::deque<Function> functions_;
    std::deque<Env> envs_;
    std::vector<std::unique_ptr<BoundProgram>> evaluated_;
    std::unordered_map<std::string, Function*> nativeValues_;
    Env* global_ = nullptr;
    std::vector<Frame> stack_;
    std::size_t callDepth_ = 0;
    std::uint64_t steps_ = 0;
    FuncValueId nextId_ = 1;
    int evalCount_ = 0;
    int makeFunctionCount_ = 0;
    long long clock_ = 0;

    // ---- heap ----

    Env* newEnv(Env* parent) {
        envs_.emplace_back();
        envs_.back().parent = parent;
        return &envs_.back();
    }
    Object* newObject(bool isArray = false) {
        objects_.emplace_back();
        objects_.back().isArray = isArray;
        return &objects_.back();
    }
    Function* newFunction(Function::Kind kind, std::string funcId) {
        functions_.emplace_back();
        Function* f = &functions_.back();
        f->kind = kind;
        f->id = nextId_++;
        f->funcId = std::move(funcId);
        return f;
    }

    void step(const SourceLoc& loc) {
        if (++steps_ > options_.stepBudget) throw StepBudgetExceeded(loc, options_.stepBudget);
    }

    // ---- trace ----

    TraceEntry& emit(EntryKind kind, const SourceLoc& loc, const Function* f, std::uint32_t flags = 0) {
        auto& entries = result_->trace.entries;
        TraceEntry e;
        e.index = entries.size();
        e.kind = kind;
        e.loc = loc;
        e.funcValue = f->id;
        e.funcId = f->funcId;
        e.flags = flags;
        if (loc.evalDepth > 0) e.flags |= kFlagEvalOrigin;
        entries.push_back(std::move(e));
        return entries.back();
    }

    void emitCreate(const SourceLoc& loc, Function* f, std::uint32_t flags = 0, const std::string& via = {}) {
        result_->trace.creators[f->id] = f->funcId;
        TraceEntry& e = emit(EntryKind::Create, loc, f, flags);
        e.via = via;
        if (f->kind == Function::Kind::Bound) e.boundTarget = f->target->id;
    }

    void emitVar(EntryKind kind, const std::string& name, const Binding& b, const SourceLoc& loc, const Value& v,
                 std::uint32_t flags = 0) {
        if (Function* f = asFunction(v)) {
            TraceEntry& e = emit(kind, loc, f, flags);
            e.name = name;
            e.binding = b;
        }
    }

    void emitProp(EntryKind kind, const std::string& name, const SourceLoc& loc, const Value& v,
                  std::uint32_t flags = 0) {
        if (Function* f = asFunction(v)) emit(kind, loc, f, flags).name = name;
    }

    void emitReturnRead(const CallResult& r, const SourceLoc& loc, std::uint32_t flags = 0) {
        if (r.returner.empty()) return;
        emitVar(EntryKind::VarRead, "<ret>", Binding{BindingKind::Return, r.returner, -1}, loc, r.value, flags);
    }

    // ---- functions and natives ----

    Function* makeClosure(const FunctionDef* def, Env* env, const SourceLoc& createLoc, std::uint32_t flags = 0,
                          const std::string& via = {}) {
        Function* f = newFunction(Function::Kind::User, def->id);
        f->def = def;
        f->env = env;
        emitCreate(createLoc, f, flags, via);
        return f;
    }

    Function* nativeValue(const NativeSpec& spec) {
        auto it = nativeValues_.find(spec.name);
        if (it != nativeValues_.end()) return it->second;
        Function* f = newFunction(Function::Kind::Native, spec.id());
        f->native = &spec;
        nativeValues_[spec.name] = f;
        SourceLoc loc{kNativeUnit, 1, static_cast<int>(natives_.indexOf(spec)), 0};
        emitCreate(loc, f, kFlagSynthetic);
        if (spec.access == NativeAccess::Global) {
            global_->vars[spec.name] = f;
            emitVar(EntryKind::VarWrite, spec.name, Binding{BindingKind::Global, kGlobalScope, -1}, loc, f,
                    kFlagSynthetic);
        } else {
            emitProp(EntryKind::PropWrite, spec.name, loc, f, kFlagSynthetic);
        }
        return f;
    }

    /// Caller of the next invocation per the shadow stack, plus boundary flags.
    std::tuple<std::string, std::uint32_t, std::string> currentCaller() const {
        std::size_t run = 0;
        while (run < stack_.size() && stack_[stack_.size() - 1 - run].native) ++run;
        if (run == 0) return {stack_.back().id, 0, {}};
        std::uint32_t flags = kFlagNativeCallbackBoundary;
        std::string caller = stack_.back().id;
        if (run >= 2) {
            flags |= kFlagMultiLevelNative;
            caller = stack_[stack_.size() - run].id;
        }
        return {caller, flags, stack_.back().nativeName};
    }

    CallResult invoke(Function* f, const Value& thisVal, std::vector<Value> args, const SourceLoc& site, Env* env,
                      const CallOpts& opts) {
        if (f->kind == Function::Kind::Bound) {
            std::vector<Value> all = f->boundArgs;
            all.insert(all.end(), args.begin(), args.end());
            CallOpts inner = opts;
            inner.invokeFlags |= kFlagBoundCall;
            return invoke(f->target, f->boundThis, std::move(all), site, env, inner);
        }
        auto [caller, boundary, via] = currentCaller();
        std::string calleeId = f->kind == Function::Kind::User ? f->def->id : f->funcId;
        result_->dcg.edges.insert(DynamicEdge{caller, site, calleeId});

        std::vector<PassedArg> passed;
        if (opts.recordArgs) {
            for (std::size_t i = 0; i < args.size(); ++i)
                if (Function* a = asFunction(args[i])) passed.push_back({static_cast<int>(i), a->id});
        }
        if (f->kind == Function::Kind::User) {
            if (opts.recordArgs) {
                const auto& params = f->def->params;
                for (std::size_t i = 0; i < args.size() && i < params.size(); ++i)
                    emitVar(EntryKind::VarWrite, params[i], Binding{BindingKind::Param, f->def->id, static_cast<int>(i)},
                            site, args[i], opts.formalFlags);
            }
            TraceEntry& inv = emit(EntryKind::Invoke, site, f, opts.invokeFlags | boundary);
            inv.funcId = calleeId;
            inv.args = std::move(passed);
            inv.via = via;
            return callUser(f, thisVal, args, site);
        }
        TraceEntry& inv = emit(EntryKind::Invoke, site, f, opts.invokeFlags | boundary);
        inv.args = std::move(passed);
        inv.via = via;
        const NativeSpec& spec = *f->native;
        if (spec.behavior == NativeBehavior::EvaluatesCode) return runNative(spec, thisVal, args, site, env);
        stack_.push_back({spec.id(), true, spec.name});
        CallResult r = runNative(spec, thisVal, args, site, env);
        stack_.pop_back();
        return r;
    }

    CallResult callUser(Function* f, const Value& thisVal, const std::vector<Value>& args, const SourceLoc& site) {
        if (callDepth_ >= options_.maxCallDepth) throw RuntimeError(site, "maximum call depth exceeded");
        const FunctionDef* def = f->def;
        Env* env = newEnv(f->env);
        for (const auto& name : def->locals) env->vars[name] = Value{};
        for (std::size_t i = 0; i < def->params.size(); ++i) env->vars[def->params[i]] = i < args.size() ? args[i] : Value{};
        if (def->bindsSelf) {
            env->vars[def->name] = f;
            if (def->selfReferenced)
                emitVar(EntryKind::VarWrite, def->name, Binding{BindingKind::Local, def->id, -1}, def->loc, f,
                        kFlagSynthetic);
        }
        ++callDepth_;
        stack_.push_back({def->id, false, {}});
        Ctx ctx{env, thisVal, def->id};
        Value result;
        if (auto ret = execBody(def->body, ctx)) result = std::move(*ret);
        stack_.pop_back();
        --callDepth_;
        return {std::move(result), def->id};
    }

    Function* requireFunction(const Value& v, const SourceLoc& loc) {
        Function* f = asFunction(v);
        if (!f) throw RuntimeError(loc, "value is not callable");
        return f;
    }

    CallResult runNative(const NativeSpec& spec, const Value& thisVal, const std::vector<Value>& args,
                         const SourceLoc& site, Env* env) {
        auto arg = [&args](std::size_t i) { return i < args.size() ? args[i] : Value{}; };
        switch (spec.behavior) {
            case NativeBehavior::ReflectiveCall: {
                Function* target = requireFunction(thisVal, site);
                std::vector<Value> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
                return invoke(target, arg(0), std::move(rest), site, env, {});
            }
            case NativeBehavior::ReflectiveApply: {
                Function* target = requireFunction(thisVal, site);
                std::vector<Value> unpacked;
                if (Object* arr = asObject(arg(1)); arr && arr->isArray) {
                    for (std::size_t i = 0; i < arr->elements.size(); ++i) {
                        emitProp(EntryKind::PropRead, std::to_string(i), site, arr->elements[i], kFlagSynthetic);
                        unpacked.push_back(arr->elements[i]);
                    }
                }
                CallOpts opts;
                opts.formalFlags = kFlagSynthetic;
                return invoke(target, arg(0), std::move(unpacked), site, env, opts);
            }
            case NativeBehavior::Binds: {
                Function* target = requireFunction(thisVal, site);
                Function* b = newFunction(Function::Kind::Bound, "bound:" + target->funcId);
                b->target = target;
                b->boundThis = arg(0);
                if (args.size() > 1) b->boundArgs.assign(args.begin() + 1, args.end());
                emitCreate(site, b, kFlagSynthetic, spec.name);
                return {b, {}};
            }
            case NativeBehavior::ArrayPush: {
                Object* arr = asObject(thisVal);
                if (!arr || !arr->isArray) throw RuntimeError(site, spec.name + " called on a non-array");
                for (const auto& v : args) {
                    emitProp(EntryKind::PropWrite, std::to_string(arr->elements.size()), site, v, kFlagSynthetic);
                    arr->elements.push_back(v);
                }
                return {static_cast<double>(arr->elements.size()), {}};
            }
            case NativeBehavior::ArrayPop: {
                Object* arr = asObject(thisVal);
                if (!arr || !arr->isArray) throw RuntimeError(site, spec.name + " called on a non-array");
                if (arr->elements.empty()) return {};
                Value v = arr->elements.back();
                arr->elements.pop_back();
                emitProp(EntryKind::PropRead, std::to_string(arr->elements.size()), site, v, kFlagSynthetic);
                return {v, {}};
            }
            case NativeBehavior::EvaluatesCode:
                evalCode(toString(arg(0)), site, env);
                return {};
            case NativeBehavior::MakesFunction: {
                std::string params = args.size() >= 2 ? toString(arg(0)) : std::string();
                std::string body = args.size() >= 2 ? toString(arg(1)) : args.empty() ? "" : toString(arg(0));
                return {makeFunction(params, body, site), {}};
            }
            case NativeBehavior::InvokesArgument: {
                Function* cb = nullptr;
                Object* items = nullptr;
                for (const auto& v : args) {
                    if (!cb) cb = asFunction(v);
                    if (Object* o = asObject(v); o && o->isArray && !items) items = o;
                }
                if (!cb) return {};
                CallOpts opts;
                opts.recordArgs = false;
                if (!items) {
                    invoke(cb, Value{}, {}, site, env, opts);
                } else {
                    std::vector<Value> snapshot = items->elements;
                    for (std::size_t i = 0; i < snapshot.size(); ++i)
                        invoke(cb, Value{}, {snapshot[i], static_cast<double>(i)}, site, env, opts);
                }
                return {};
            }
            case NativeBehavior::ReturnsFunction:
                return {arg(0), {}};
            case NativeBehavior::Pure:
                break;
        }
        if (spec.name == "print") {
            std::string line;
            for (std::size_t i = 0; i < args.size(); ++i) line += (i ? " " : "") + toString(args[i]);
            result_->output.push_back(std::move(line));
            return {};
        }
        if (spec.name == "randomInt") {
            double n = toNumber(arg(0));
            if (!(n >= 1)) return {0.0, {}};
            std::uniform_int_distribution<long long> dist(0, static_cast<long long>(n) - 1);
            return {static_cast<double>(dist(rng_)), {}};
        }
        if (spec.name == "timestamp") return {static_cast<double>(++clock_), {}};
        return {};
    }

    Program parseEvaluated(const std::string& code, const std::string& unit, const SourceLoc& site) {
        try {
            return parseProgram(code, unit, site.evalDepth + 1);
        } catch (const SyntaxError& e) {
            throw RuntimeError(site, std::string("syntax error in evaluated code: ") + e.what());
        }
    }

    void evalCode(const std::string& code, const SourceLoc& site, Env* env) {
        std::string unit = kEvalUnitPrefix + std::to_string(evalCount_++) + ">";
        Program p = parseEvaluated(code, unit, site);
        evaluated_.push_back(std::make_unique<BoundProgram>(resolveBindings(std::move(p), natives_.globalNames(), true)));
        const Program& prog = evaluated_.back()->program();
        for (const auto& name : prog.topLevelNames) env->vars.try_emplace(name);
        Ctx ctx{env, Value{}, stack_.back().id};
        execBody(prog.body, ctx);
    }

    Function* makeFunction(const std::string& params, const std::string& body, const SourceLoc& site) {
        std::string unit = kMakeFunctionUnitPrefix + std::to_string(makeFunctionCount_++) + ">";
        Program p = parseEvaluated("(function(" + params + ") {" + body + "});", unit, site);
        if (p.body.size() != 1 || !p.body[0]->as<ExprStmt>() || !p.body[0]->as<ExprStmt>()->expr->as<FunctionExpr>())
            throw RuntimeError(site, "malformed function source");
        evaluated_.push_back(std::make_unique<BoundProgram>(resolveBindings(std::move(p), natives_.globalNames(), true)));
        const FunctionDef* def = evaluated_.back()->program().body[0]->as<ExprStmt>()->expr->as<FunctionExpr>()->def;
        return makeClosure(def, global_, site, kFlagSynthetic, "makeFunction");
    }

    // ---- variables and properties ----

    Value* lookup(Env* env, const std::string& name) {
        for (Env* e = env; e; e = e->parent) {
            auto it = e->vars.find(name);
            if (it != e->vars.end()) return &it->second;
        }
        return nullptr;
    }

    Value readVar(const Ident& id, const SourceLoc& loc, Ctx& ctx) {
        Value v;
        if (Value* slot = lookup(ctx.env, id.name)) {
            v = *slot;
        } else if (const NativeSpec* spec = natives_.find(id.name); spec && spec->access == NativeAccess::Global) {
            v = nativeValue(*spec);
        } else {
            throw RuntimeError(loc, "'" + id.name + "' is not defined");
        }
        emitVar(EntryKind::VarRead, id.name, id.binding, loc, v);
        return v;
    }

    void writeVar(const std::string& name, const Binding& b, const SourceLoc& loc, const Value& v, Ctx& ctx) {
        if (Value* slot = lookup(ctx.env, name))
            *slot = v;
        else
            global_->vars[name] = v;
        emitVar(EntryKind::VarWrite, name, b, loc, v);
    }

    std::string propertyKey(const Value& v) { return toString(v); }

    Value getProperty(const Value& base, const std::string& key, const SourceLoc& loc, Ctx& ctx) {
        Slot* slot = nullptr;
        const NativeSpec* method = nullptr;
        if (Object* o = asObject(base)) {
            if (o->isArray) {
                long long i = arrayIndex(key);
                if (i >= 0) {
                    Value v = static_cast<std::size_t>(i) < o->elements.size() ? o->elements[i] : Value{};
                    emitProp(EntryKind::PropRead, key, loc, v);
                    return v;
                }
                if (key == "length") return static_cast<double>(o->elements.size());
            }
            slot = o->find(key);
            if (!slot && o->isArray) method = natives_.method(NativeAccess::ArrayMethod, key);
        } else if (Function* f = asFunction(base)) {
            slot = f->props.find(key);
            if (!slot) method = natives_.method(NativeAccess::FunctionMethod, key);
        } else if (auto* s = std::get_if<std::string>(&base)) {
            if (key == "length") return static_cast<double>(s->size());
            return {};
        } else if (std::holds_alternative<std::monostate>(base)) {
            throw RuntimeError(loc, "cannot read property '" + key + "' of null");
        } else {
            return {};
        }
        if (method) {
            Value v = nativeValue(*method);
            emitProp(EntryKind::PropRead, key, loc, v);
            return v;
        }
        if (!slot) return {};
        if (slot->accessor()) {
            if (!slot->getter) return {};
            CallOpts opts;
            opts.invokeFlags = kFlagGetter;
            CallResult r = invoke(slot->getter, base, {}, loc, ctx.env, opts);
            emitReturnRead(r, loc, kFlagGetter);
            return r.value;
        }
        emitProp(EntryKind::PropRead, key, loc, slot->value);
        return slot->value;
    }

    void setProperty(const Value& base, const std::string& key, const Value& v, const SourceLoc& loc, Ctx& ctx) {
        Object* props = nullptr;
        if (Object* o = asObject(base)) {
            if (o->isArray) {
                long long i = arrayIndex(key);
                if (i >= 0) {
                    if (static_cast<std::size_t>(i) >= o->elements.size()) o->elements.resize(i + 1);
                    o->elements[i] = v;
                    emitProp(EntryKind::PropWrite, key, loc, v);
                    return;
                }
            }
            props = o;
        } else if (Function* f = asFunction(base)) {
            props = &f->props;
        } else if (std::holds_alternative<std::monostate>(base)) {
            throw RuntimeError(loc, "cannot set property '" + key + "' of null");
        } else {
            return;
        }
        Slot* slot = props->find(key);
        if (slot && slot->accessor()) {
            if (!slot->setter) return;
            CallOpts opts;
            opts.invokeFlags = kFlagSetter;
            invoke(slot->setter, base, {v}, loc, ctx.env, opts);
            return;
        }
        props->insert(key).value = v;
        emitProp(EntryKind::PropWrite, key, loc, v);
    }

    std::vector<std::string> ownKeys(const Value& v) {
        std::vector<std::string> keys;
        if (Object* o = asObject(v)) {
            if (o->isArray)
                for (std::size_t i = 0; i < o->elements.size(); ++i) keys.push_back(std::to_string(i));
            keys.insert(keys.end(), o->order.begin(), o->order.end());
        } else if (Function* f = asFunction(v)) {
            keys = f->props.order;
        }
        return keys;
    }

    // ---- statements ----

    /// Runs statements; returns the value of an executed `return`.
    std::optional<Value> execBody(const std::vector<StmtPtr>& body, Ctx& ctx) {
        for (const auto& s : body)
            if (auto r = exec(*s, ctx)) return r;
        return std::nullopt;
    }

    std::optional<Value> exec(const Stmt& s, Ctx& ctx) {
        step(s.loc);
        return std::visit(
            [&](const auto& node) -> std::optional<Value> {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    if (node.init) writeVar(node.name, node.binding, node.nameLoc, eval(*node.init, ctx), ctx);
                    return std::nullopt;
                } else if constexpr (std::is_same_v<T, FuncDecl>) {
                    Function* f = makeClosure(node.def, ctx.env, node.def->loc);
                    writeVar(node.def->name, node.binding, node.def->loc, f, ctx);
                    return std::nullopt;
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    eval(*node.expr, ctx);
                    return std::nullopt;
                } else if constexpr (std::is_same_v<T, Return>) {
                    Value v = node.value ? eval(*node.value, ctx) : Value{};
                    if (Function* f = asFunction(v)) emit(EntryKind::Return, s.loc, f).via = ctx.fnId;
                    return v;
                } else if constexpr (std::is_same_v<T, If>) {
                    if (truthy(eval(*node.cond, ctx))) return exec(*node.then, ctx);
                    if (node.otherwise) return exec(*node.otherwise, ctx);
                    return std::nullopt;
                } else if constexpr (std::is_same_v<T, While>) {
                    while (truthy(eval(*node.cond, ctx))) {
                        if (auto r = exec(*node.body, ctx)) return r;
                        step(s.loc);
                    }
                    return std::nullopt;
                } else if constexpr (std::is_same_v<T, ForIn>) {
                    for (const auto& key : ownKeys(eval(*node.object, ctx))) {
                        writeVar(node.var, node.binding, node.varLoc, key, ctx);
                        if (auto r = exec(*node.body, ctx)) return r;
                        step(s.loc);
                    }
                    return std::nullopt;
                } else if constexpr (std::is_same_v<T, Block>) {
                    return execBody(node.body, ctx);
                } else {
                    return std::nullopt;
                }
            },
            s.node);
    }

    // ---- expressions ----

    Value eval(const Expr& e, Ctx& ctx) {
        step(e.loc);
        return std::visit(
            [&](const auto& node) -> Value {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, NumberLit>) {
                    return node.value;
                } else if constexpr (std::is_same_v<T, StringLit>) {
                    return node.value;
                } else if constexpr (std::is_same_v<T, BoolLit>) {
                    return node.value;
                } else if constexpr (std::is_same_v<T, NullLit>) {
                    return Value{};
                } else if constexpr (std::is_same_v<T, ThisExpr>) {
                    return ctx.thisVal;
                } else if constexpr (std::is_same_v<T, Ident>) {
                    return readVar(node, e.loc, ctx);
                } else if constexpr (std::is_same_v<T, FunctionExpr>) {
                    return makeClosure(node.def, ctx.env, e.loc);
                } else if constexpr (std::is_same_v<T, ObjectLit>) {
                    return evalObject(node, ctx);
                } else if constexpr (std::is_same_v<T, ArrayLit>) {
                    Object* arr = newObject(true);
                    for (std::size_t i = 0; i < node.elements.size(); ++i) {
                        Value v = eval(*node.elements[i], ctx);
                        emitProp(EntryKind::PropWrite, std::to_string(i), node.elements[i]->loc, v);
                        arr->elements.push_back(std::move(v));
                    }
                    return arr;
                } else if constexpr (std::is_same_v<T, Member>) {
                    Value base = eval(*node.object, ctx);
                    std::string key = node.isDynamic() ? propertyKey(eval(*node.nameExpr, ctx)) : node.name;
                    return getProperty(base, key, e.loc, ctx);
                } else if constexpr (std::is_same_v<T, Call>) {
                    return evalCall(e, node, ctx);
                } else if constexpr (std::is_same_v<T, Assign>) {
                    return evalAssign(node, ctx);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    return evalBinary(node, ctx);
                } else {
                    Value v = eval(*node.operand, ctx);
                    if (node.op == "!") return !truthy(v);
                    return -toNumber(v);
                }
            },
            e.node);
    }

    Value evalObject(const ObjectLit& lit, Ctx& ctx) {
        Object* o = newObject();
        for (const auto& p : lit.props) {
            if (p.kind == Property::Kind::Data) {
                Value v = eval(*p.value, ctx);
                Slot& slot = o->insert(p.key);
                slot = Slot{v, nullptr, nullptr};
                emitProp(EntryKind::PropWrite, p.key, p.keyLoc, v);
            } else {
                Function* f = makeClosure(p.accessor, ctx.env, p.accessor->loc);
                Slot& slot = o->insert(p.key);
                if (!slot.accessor()) slot.value = Value{};
                (p.kind == Property::Kind::Getter ? slot.getter : slot.setter) = f;
            }
        }
        return o;
    }

    Value evalCall(const Expr& e, const Call& call, Ctx& ctx) {
        Value thisVal;
        Value callee;
        if (const auto* m = call.callee->as<Member>()) {
            thisVal = eval(*m->object, ctx);
            std::string key = m->isDynamic() ? propertyKey(eval(*m->nameExpr, ctx)) : m->name;
            callee = getProperty(thisVal, key, call.callee->loc, ctx);
        } else {
            callee = eval(*call.callee, ctx);
        }
        std::vector<Value> args;
        args.reserve(call.args.size());
        for (const auto& a : call.args) args.push_back(eval(*a, ctx));
        Function* f = requireFunction(callee, e.loc);
        CallResult r = invoke(f, thisVal, std::move(args), e.loc, ctx.env, {});
        emitReturnRead(r, e.loc);
        return r.value;
    }

    Value evalAssign(const Assign& a, Ctx& ctx) {
        if (const auto* id = a.target->as<Ident>()) {
            Value v = eval(*a.value, ctx);
            writeVar(id->name, id->binding, a.target->loc, v, ctx);
            return v;
        }
        const auto* m = a.target->as<Member>();
        Value base = eval(*m->object, ctx);
        std::string key = m->isDynamic() ? propertyKey(eval(*m->nameExpr, ctx)) : m->name;
        Value v = eval(*a.value, ctx);
        setProperty(base, key, v, a.target->loc, ctx);
        return v;
    }

    Value evalBinary(const Binary& b, Ctx& ctx) {
        if (b.op == "&&") {
            Value l = eval(*b.lhs, ctx);
            return truthy(l) ? eval(*b.rhs, ctx) : l;
        }
        if (b.op == "||") {
            Value l = eval(*b.lhs, ctx);
            return truthy(l) ? l : eval(*b.rhs, ctx);
        }
        Value l = eval(*b.lhs, ctx);
        Value r = eval(*b.rhs, ctx);
        if (b.op == "==" || b.op == "===") return strictEquals(l, r);
        if (b.op == "!=" || b.op == "!==") return !strictEquals(l, r);
        if (b.op == "+") {
            if (std::holds_alternative<std::string>(l) || std::holds_alternative<std::string>(r))
                return toString(l) + toString(r);
            return toNumber(l) + toNumber(r);
        }
        if (b.op == "<" || b.op == ">" || b.op == "<=" || b.op == ">=") {
            auto* ls = std::get_if<std::string>(&l);
            auto* rs = std::get_if<std::string>(&r);
            int cmp;
            if (ls && rs) {
                cmp = ls->compare(*rs);
            } else {
                double x = toNumber(l), y = toNumber(r);
                if (std::isnan(x) || std::isnan(y)) return false;
                cmp = x < y ? -1 : x > y ? 1 : 0;
            }
            if (b.op == "<") return cmp < 0;
            if (b.op == ">") return cmp > 0;
            if (b.op == "<=") return cmp <= 0;
            return cmp >= 0;
        }
        double x = toNumber(l), y = toNumber(r);
        if (b.op == "-") return x - y;
        if (b.op == "*") return x * y;
        if (b.op == "/") return x / y;
        return std::fmod(x, y);
    }
};

}  // namespace

ExecutionResult execute(const BoundProgram& program, const NativeConfig& natives, const ExecutionOptions& options) {
    Interpreter interp(program, natives, options);
    return interp.run();
}

}  // namespace cgrl
