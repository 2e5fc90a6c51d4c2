#include "cgrl/pipeline.hpp"

#include <cstdio>
#include <sstream>

#include "cgrl/serialize.hpp"

namespace cgrl {

using nlohmann::json;

namespace {

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string ratioText(double v, double num, double den) {
    std::ostringstream out;
    out << fmt("%.3f", v) << " (" << fmt("%g", num) << "/" << fmt("%g", den) << ")";
    return out.str();
}

std::string pad(std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
}

json edgeHeader(const MissedEdge& e) {
    return {{"site", locToJson(e.site)}, {"callee", e.callee}, {"caller", e.caller}};
}

std::size_t countResolved(const std::vector<EdgeFindings>& findings) {
    std::set<std::pair<SourceLoc, std::string>> missed;
    for (const auto& f : findings) missed.insert(f.edge.key());
    std::set<DependentCall> resolved;
    for (const auto& f : findings)
        for (const auto& flow : f.flows)
            if (const auto* d = std::get_if<DependentCall>(&flow); d && missed.count({d->site, d->callee}))
                resolved.insert(*d);
    return resolved.size();
}

void appendDistributionText(std::ostringstream& out, const RootCauseDistribution& d, bool fine) {
    out << "root causes (" << fmt("%g", d.edges) << " edges):\n";
    for (const auto& [k, s] : d.coarse) out << "  " << pad(k, 32) << pad(fmt("%.2f", s.count), 8) << fmt("%.1f", s.pct) << "%\n";
    if (fine) {
        out << "property names (" << fmt("%g", d.fineEdges) << " edges):\n";
        for (const auto& [k, s] : d.fine) out << "  " << pad(k, 32) << pad(fmt("%.2f", s.count), 8) << fmt("%.1f", s.pct) << "%\n";
    }
    out << "unresolved: " << fmt("%.1f", d.unresolvedPct) << "%\n";
}

}  // namespace

std::vector<EdgeReport> labelEdges(std::vector<EdgeFindings> findings, const FlowTrace& trace,
                                   const BoundProgram& program, const NativeConfig& natives, bool fineGrained) {
    std::vector<EdgeReport> out;
    for (auto& f : findings) {
        EdgeReport r;
        r.labeled.edge = f.edge;
        for (const auto& flow : f.attributed) {
            if (std::holds_alternative<Unresolved>(flow)) r.labeled.unresolved = true;
            RootCauseLabel l = labelFlow(flow, trace, program, natives);
            r.labeled.labels.insert(l);
            if (!fineGrained || l != RootCauseLabel::DynamicPropertyAccess) continue;
            if (auto loc = dynamicAccessOf(flow, trace, program)) {
                try {
                    r.labeled.categories.insert(classifyPropertyName(*loc, program));
                } catch (const NotADynamicAccess&) {
                }
            }
        }
        r.findings = std::move(f);
        out.push_back(std::move(r));
    }
    return out;
}

PipelineRun runPipeline(const std::string& source, const std::string& unit, const PipelineOptions& options,
                        const PipelineInputs& inputs) {
    PipelineRun run;
    BoundProgram program = loadProgram(source, unit, options.natives);
    ProgramReport& report = run.report;
    report.program = unit;
    report.variant = options.variant;
    report.fineGrained = options.fineGrained;

    if (inputs.trace && inputs.dcg) {
        run.trace = *inputs.trace;
        run.dcg = *inputs.dcg;
    } else {
        ExecutionResult exec = execute(program, options.natives, options.exec);
        run.trace = inputs.trace ? *inputs.trace : std::move(exec.trace);
        run.dcg = inputs.dcg ? *inputs.dcg : std::move(exec.dcg);
        run.output = std::move(exec.output);
        report.executionError = exec.error;
    }

    if (inputs.flowGraph) {
        if (inputs.flowGraph->variant() != options.variant)
            throw std::invalid_argument(std::string("supplied flow graph is ") + variantName(inputs.flowGraph->variant()) +
                                        " but --variant is " + variantName(options.variant));
        run.flowGraph = *inputs.flowGraph;
        run.callGraph = inputs.callGraph ? *inputs.callGraph : callGraphFromFlowGraph(run.flowGraph);
        attachSiteOwners(run.callGraph, program);
    } else {
        SolvedGraphs g = buildCallGraph(program, options.variant, options.natives);
        run.flowGraph = std::move(g.flowGraph);
        if (inputs.callGraph) {
            run.callGraph = *inputs.callGraph;
            attachSiteOwners(run.callGraph, program);
        } else {
            run.callGraph = std::move(g.callGraph);
        }
    }

    for (Metric m : kAllMetrics) report.metrics.push_back(recallPrecision(run.callGraph, run.dcg, m));

    MatchContext ctx{run.trace, run.flowGraph, run.callGraph, program, options.natives};
    std::vector<EdgeFindings> findings = detect(ctx, run.dcg);
    report.dependentCallsResolved = countResolved(findings);
    report.edges = labelEdges(std::move(findings), run.trace, program, options.natives, options.fineGrained);
    std::vector<LabeledEdge> labeled;
    for (const auto& e : report.edges) labeled.push_back(e.labeled);
    report.distribution = aggregate(labeled);
    return run;
}

json metricToJson(const MetricResult& m) {
    return {{"metric", metricName(m.metric)},
            {"recall", m.recall},
            {"precision", m.precision},
            {"recallNumerator", m.recallNum},
            {"recallDenominator", m.recallDen},
            {"precisionNumerator", m.precisionNum},
            {"precisionDenominator", m.precisionDen},
            {"recallUndefined", m.recallUndefined},
            {"precisionUndefined", m.precisionUndefined}};
}

json distributionToJson(const RootCauseDistribution& d) {
    json coarse = json::object(), fine = json::object();
    for (const auto& [k, s] : d.coarse) coarse[k] = {{"count", s.count}, {"pct", s.pct}};
    for (const auto& [k, s] : d.fine) fine[k] = {{"count", s.count}, {"pct", s.pct}};
    return {{"coarse", std::move(coarse)}, {"fine", std::move(fine)}, {"edges", d.edges}, {"fineEdges", d.fineEdges}};
}

json reportToJson(const ProgramReport& r) {
    json metrics = json::array();
    for (const auto& m : r.metrics) metrics.push_back(metricToJson(m));
    json edges = json::array();
    for (const auto& e : r.edges) {
        json j = edgeHeader(e.labeled.edge);
        json labels = json::array(), cats = json::array();
        for (auto l : e.labeled.labels) labels.push_back(labelName(l));
        for (auto c : e.labeled.categories) cats.push_back(categoryName(c));
        j["labels"] = std::move(labels);
        if (r.fineGrained) j["categories"] = std::move(cats);
        j["unresolved"] = e.labeled.unresolved;
        edges.push_back(std::move(j));
    }
    json out = {{"schemaVersion", kSchemaVersion},
                {"kind", "report"},
                {"program", r.program},
                {"variant", variantName(r.variant)},
                {"fineGrained", r.fineGrained},
                {"weighting", "equal split among an edge's distinct labels"},
                {"missedEdges", r.edges.size()},
                {"dependentCallsResolved", r.dependentCallsResolved},
                {"metrics", std::move(metrics)},
                {"distribution", distributionToJson(r.distribution)},
                {"unresolvedPct", r.distribution.unresolvedPct},
                {"edges", std::move(edges)}};
    if (r.executionError)
        out["executionError"] = {{"kind", r.executionError->kind == ExecutionError::Kind::StepBudget ? "stepBudget" : "runtime"},
                                 {"loc", locToJson(r.executionError->loc)},
                                 {"message", r.executionError->message}};
    return out;
}

json findingsToJson(const ProgramReport& r, bool withFound) {
    json edges = json::array();
    for (const auto& e : r.edges) {
        json j = edgeHeader(e.findings.edge);
        j["invokeIndex"] = e.findings.edge.invokeIndex;
        j["attributed"] = flowSetToJson(e.findings.attributed);
        if (withFound) j["found"] = flowSetToJson(e.findings.flows);
        edges.push_back(std::move(j));
    }
    return {{"schemaVersion", kSchemaVersion}, {"kind", "flows"}, {"edges", std::move(edges)}};
}

json copiesToJson(const ProgramReport& r) {
    json edges = json::array();
    for (const auto& e : r.edges) {
        json j = edgeHeader(e.findings.edge);
        j["chain"] = chainToJson(e.findings.chain);
        edges.push_back(std::move(j));
    }
    return {{"schemaVersion", kSchemaVersion}, {"kind", "copies"}, {"edges", std::move(edges)}};
}

std::string reportToCsv(const ProgramReport& r) {
    std::ostringstream out;
    out << "section,name,value,extra\n";
    for (const auto& m : r.metrics) {
        out << "recall," << metricName(m.metric) << ',' << fmt("%.6f", m.recall) << ','
            << fmt("%g", m.recallNum) << '/' << fmt("%g", m.recallDen) << '\n';
        out << "precision," << metricName(m.metric) << ',' << fmt("%.6f", m.precision) << ','
            << fmt("%g", m.precisionNum) << '/' << fmt("%g", m.precisionDen) << '\n';
    }
    for (const auto& [k, s] : r.distribution.coarse) out << "coarse," << k << ',' << fmt("%g", s.count) << ',' << fmt("%.1f", s.pct) << '\n';
    for (const auto& [k, s] : r.distribution.fine) out << "fine," << k << ',' << fmt("%g", s.count) << ',' << fmt("%.1f", s.pct) << '\n';
    out << "summary,missedEdges," << r.edges.size() << ",\n";
    out << "summary,dependentCallsResolved," << r.dependentCallsResolved << ",\n";
    out << "summary,unresolvedPct," << fmt("%.1f", r.distribution.unresolvedPct) << ",\n";
    return out.str();
}

std::string reportToText(const ProgramReport& r) {
    std::ostringstream out;
    out << "program: " << r.program << " (" << variantName(r.variant) << ")\n";
    if (r.executionError) out << "execution stopped: " << r.executionError->loc.str() << ": " << r.executionError->message << "\n";
    out << "missed edges: " << r.edges.size() << ", dependent calls resolved: " << r.dependentCallsResolved << "\n";
    out << pad("metric", 18) << pad("recall", 22) << "precision\n";
    for (const auto& m : r.metrics)
        out << pad(metricName(m.metric), 18) << pad(ratioText(m.recall, m.recallNum, m.recallDen), 22)
            << ratioText(m.precision, m.precisionNum, m.precisionDen) << "\n";
    appendDistributionText(out, r.distribution, r.fineGrained);
    for (const auto& e : r.edges) {
        out << "  " << e.labeled.edge.site.str() << " -> " << e.labeled.edge.callee << ":";
        if (e.labeled.labels.empty()) out << " Others";
        for (auto l : e.labeled.labels) out << ' ' << labelName(l);
        for (auto c : e.labeled.categories) out << " [" << categoryName(c) << ']';
        out << "\n";
    }
    return out.str();
}

json corpusReportToJson(const std::vector<ProgramReport>& reports) {
    std::vector<LabeledEdge> all;
    json programs = json::array();
    for (const auto& r : reports) {
        for (const auto& e : r.edges) all.push_back(e.labeled);
        json metrics = json::array();
        for (const auto& m : r.metrics) metrics.push_back(metricToJson(m));
        programs.push_back({{"program", r.program},
                            {"missedEdges", r.edges.size()},
                            {"dependentCallsResolved", r.dependentCallsResolved},
                            {"metrics", std::move(metrics)}});
    }
    RootCauseDistribution d = aggregate(all);
    return {{"schemaVersion", kSchemaVersion},
            {"kind", "corpusReport"},
            {"variant", reports.empty() ? "" : variantName(reports.front().variant)},
            {"weighting", "equal split among an edge's distinct labels"},
            {"programs", std::move(programs)},
            {"missedEdges", all.size()},
            {"distribution", distributionToJson(d)},
            {"unresolvedPct", d.unresolvedPct}};
}

std::string corpusReportToText(const std::vector<ProgramReport>& reports) {
    std::ostringstream out;
    std::vector<LabeledEdge> all;
    bool fine = false;
    for (const auto& r : reports) {
        fine |= r.fineGrained;
        for (const auto& e : r.edges) all.push_back(e.labeled);
        out << pad(r.program, 32) << "missed " << r.edges.size();
        for (const auto& m : r.metrics) out << "  " << metricName(m.metric) << " " << fmt("%.3f", m.recall);
        out << "\n";
    }
    out << "total missed edges: " << all.size() << "\n";
    appendDistributionText(out, aggregate(all), fine);
    return out.str();
}

}  // namespace cgrl
