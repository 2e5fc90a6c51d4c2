// End-to-end analysis of one program: execute, build static graphs, detect
// and explain missed edges, and report.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgrl/detector.hpp"
#include "cgrl/interp.hpp"
#include "cgrl/metrics.hpp"

namespace cgrl {

struct PipelineOptions {
    Variant variant = Variant::Optimistic;
    bool fineGrained = false;
    ExecutionOptions exec;
    NativeConfig natives = NativeConfig::defaults();
};

/// Externally supplied artifacts. A supplied stage is not recomputed.
struct PipelineInputs {
    std::optional<FlowTrace> trace;
    std::optional<DynamicCallGraph> dcg;
    std::optional<FlowGraph> flowGraph;
    std::optional<CallGraph> callGraph;
};

struct EdgeReport {
    EdgeFindings findings;
    LabeledEdge labeled;
};

struct ProgramReport {
    std::string program;
    Variant variant = Variant::Optimistic;
    bool fineGrained = false;
    std::optional<ExecutionError> executionError;
    std::vector<MetricResult> metrics;
    std::vector<EdgeReport> edges;
    RootCauseDistribution distribution;
    std::size_t dependentCallsResolved = 0;
};

struct PipelineRun {
    FlowTrace trace;
    DynamicCallGraph dcg;
    FlowGraph flowGraph;
    CallGraph callGraph;
    std::vector<std::string> output;
    ProgramReport report;
};

/// Throws SyntaxError / UnboundVariable for bad sources and
/// std::invalid_argument when supplied artifacts disagree with the options.
PipelineRun runPipeline(const std::string& source, const std::string& unit, const PipelineOptions& options,
                        const PipelineInputs& inputs = {});

/// Labels and fine categories for each resolved edge.
std::vector<EdgeReport> labelEdges(std::vector<EdgeFindings> findings, const FlowTrace& trace,
                                   const BoundProgram& program, const NativeConfig& natives, bool fineGrained);

nlohmann::json metricToJson(const MetricResult& m);
nlohmann::json distributionToJson(const RootCauseDistribution& d);
nlohmann::json reportToJson(const ProgramReport& r);
/// Per-edge findings; `withFound` adds the flows as found before resolution.
nlohmann::json findingsToJson(const ProgramReport& r, bool withFound);
nlohmann::json copiesToJson(const ProgramReport& r);
std::string reportToCsv(const ProgramReport& r);
std::string reportToText(const ProgramReport& r);

/// Aggregate over several programs (one variant).
nlohmann::json corpusReportToJson(const std::vector<ProgramReport>& reports);
std::string corpusReportToText(const std::vector<ProgramReport>& reports);

}  // namespace cgrl
