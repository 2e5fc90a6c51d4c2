// cgrl: explain missed static call-graph edges of MiniJS programs.
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cgrl/frontend.hpp"
#include "cgrl/pipeline.hpp"
#include "cgrl/serialize.hpp"

namespace fs = std::filesystem;
using namespace cgrl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAnalysis = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunArgs {
    std::string file;
    std::string corpus;
    std::string variant = "optimistic";
    std::string out = "cgrl-out";
    std::vector<std::string> artifacts;
    std::string natives;
    bool fineGrained = false;
    bool emitCopies = false;
    bool emitFlows = false;
    std::uint64_t seed = 0;
    std::uint64_t stepBudget = ExecutionOptions{}.stepBudget;
};

std::string readFile(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw UsageError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeFile(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

void writeJson(const fs::path& p, const nlohmann::json& j) { writeFile(p, j.dump(2) + "\n"); }

PipelineInputs loadArtifacts(const std::vector<std::string>& files) {
    PipelineInputs in;
    for (const auto& f : files) {
        std::string text = readFile(f);
        std::string firstLine = text.substr(0, text.find('\n'));
        nlohmann::json head = nlohmann::json::parse(firstLine, nullptr, false);
        if (!head.is_discarded() && artifactKind(head) == "trace") {
            in.trace = traceFromJsonl(text, f);
            continue;
        }
        nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded()) throw SchemaError(f, "<root>", "not valid JSON");
        std::string kind = artifactKind(j);
        if (kind == "dynamicCallGraph")
            in.dcg = dcgFromJson(j, f);
        else if (kind == "flowGraph")
            in.flowGraph = flowGraphFromJson(j, f);
        else if (kind == "callGraph")
            in.callGraph = callGraphFromJson(j, f);
        else
            throw SchemaError(f, "kind", "expected trace, dynamicCallGraph, flowGraph or callGraph");
    }
    return in;
}

void writeOutputs(const fs::path& dir, const PipelineRun& run, const RunArgs& args) {
    fs::create_directories(dir);
    writeFile(dir / "trace.jsonl", traceToJsonl(run.trace));
    writeJson(dir / "dcg.json", dcgToJson(run.dcg));
    writeJson(dir / "flowgraph.json", flowGraphToJson(run.flowGraph));
    writeJson(dir / "callgraph.json", callGraphToJson(run.callGraph));
    writeJson(dir / "flows.json", findingsToJson(run.report, args.emitFlows));
    if (args.emitCopies) writeJson(dir / "copies.json", copiesToJson(run.report));
    writeJson(dir / "report.json", reportToJson(run.report));
    writeFile(dir / "report.csv", reportToCsv(run.report));
    writeFile(dir / "report.txt", reportToText(run.report));
}

int runCommand(const RunArgs& args) {
    if (args.file.empty() == args.corpus.empty()) throw UsageError("give exactly one of <file> or --corpus");
    if (!args.corpus.empty() && !args.artifacts.empty()) throw UsageError("--from-artifacts cannot be combined with --corpus");

    PipelineOptions options;
    options.variant = *parseVariant(args.variant);
    options.fineGrained = args.fineGrained;
    options.exec.seed = args.seed;
    options.exec.stepBudget = args.stepBudget;
    if (!args.natives.empty()) {
        nlohmann::json j = nlohmann::json::parse(readFile(args.natives), nullptr, false);
        if (j.is_discarded()) throw SchemaError(args.natives, "<root>", "not valid JSON");
        try {
            options.natives = NativeConfig::fromJson(j);
        } catch (const std::invalid_argument& e) {
            throw SchemaError(args.natives, "natives", e.what());
        }
    }

    fs::path out = args.out;
    if (const char* env = std::getenv("CGRL_OUTPUT_DIR"); env && *env) out = env;

    if (!args.file.empty()) {
        if (!fs::is_regular_file(args.file)) throw UsageError("no such file: " + args.file);
        PipelineInputs inputs = loadArtifacts(args.artifacts);
        std::string unit = fs::path(args.file).filename().string();
        PipelineRun run = runPipeline(readFile(args.file), unit, options, inputs);
        writeOutputs(out, run, args);
        std::cout << reportToText(run.report);
        return kExitOk;
    }

    if (!fs::is_directory(args.corpus)) throw UsageError("no such directory: " + args.corpus);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(args.corpus))
        if (e.is_regular_file() && e.path().extension() == ".mjs") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<ProgramReport> reports;
    for (const auto& f : files) {
        PipelineRun run = runPipeline(readFile(f), f.filename().string(), options);
        writeOutputs(out / f.stem(), run, args);
        reports.push_back(std::move(run.report));
    }
    fs::create_directories(out);
    writeJson(out / "corpus-report.json", corpusReportToJson(reports));
    std::string text = corpusReportToText(reports);
    writeFile(out / "corpus-report.txt", text);
    std::cout << text;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explain missed static call-graph edges of MiniJS programs"};
    app.require_subcommand(1);
    RunArgs args;
    CLI::App* run = app.add_subcommand("run", "Analyze one program or a corpus directory");
    run->add_option("file", args.file, "MiniJS source file");
    run->add_option("--corpus", args.corpus, "Analyze every .mjs file in a directory");
    run->add_option("--variant", args.variant, "ACG variant")->check(CLI::IsMember({"optimistic", "pessimistic"}));
    run->add_option("--out", args.out, "Output directory (CGRL_OUTPUT_DIR overrides)");
    run->add_option("--from-artifacts", args.artifacts, "Comma-separated trace/DCG/flow-graph/call-graph files")
        ->delimiter(',');
    run->add_option("--natives", args.natives, "Native configuration JSON");
    run->add_flag("--fine-grained", args.fineGrained, "Classify dynamic property names");
    run->add_flag("--emit-copies", args.emitCopies, "Write copy chains to copies.json");
    run->add_flag("--emit-flows", args.emitFlows, "Include pre-resolution flows in flows.json");
    run->add_option("--seed", args.seed, "Seed for randomInt");
    run->add_option("--step-budget", args.stepBudget, "Execution step budget")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        return runCommand(args);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnalysis;
    }
}
