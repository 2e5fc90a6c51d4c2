// Helpers shared by the test binaries: corpus access, one-call analysis,
// random program/trace generators and brute-force oracles.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "cgrl/detector.hpp"
#include "cgrl/interp.hpp"
#include "cgrl/labeler.hpp"
#include "cgrl/metrics.hpp"

namespace cgrl::test {

std::string corpusDir();
std::string readFile(const std::string& path);
/// Every .mjs under the corpus directory, sorted, as absolute paths.
std::vector<std::string> corpusFiles(const std::string& subdir = "");

struct Analysis {
    BoundProgram program;
    ExecutionResult exec;
    SolvedGraphs graphs;
    std::vector<EdgeFindings> findings;

    MatchContext context(const NativeConfig& natives) const {
        return {exec.trace, graphs.flowGraph, graphs.callGraph, program, natives};
    }
};

Analysis analyzeSource(const std::string& source, const std::string& unit, Variant variant,
                       const NativeConfig& natives = NativeConfig::defaults());
Analysis analyzeFile(const std::string& path, Variant variant, const NativeConfig& natives = NativeConfig::defaults());

/// The findings for the edge (site line, callee), or nullptr.
const EdgeFindings* findEdge(const Analysis& a, int line, const std::string& callee);

/// Labels of one edge after resolution (empty set means Others).
std::set<RootCauseLabel> edgeLabels(const Analysis& a, const EdgeFindings& f,
                                    const NativeConfig& natives = NativeConfig::defaults());

/// A random MiniJS program of at most `maxStatements` top-level statements
/// that moves function values through variables, properties, parameters,
/// returns and natives.
std::string generateProgram(std::mt19937_64& rng, int maxStatements);

/// A random, not necessarily executable, trace of at most `maxEntries` entries.
FlowTrace generateTrace(std::mt19937_64& rng, std::size_t maxEntries);

/// Backward search over the raw entry list, without indexes.
CopyChainResult bruteForceCopies(const FlowTrace& trace, std::size_t invoke);

/// Reflexive transitive closure by Floyd-Warshall.
std::vector<std::vector<bool>> transitiveClosure(const std::vector<std::vector<bool>>& adjacency);

}  // namespace cgrl::test
