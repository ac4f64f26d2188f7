#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace kcp {

struct RelationResult {
    std::string label;
    double residual = 0.0; // max over sampled points
    double tolerance = 0.0;
    std::size_t samples = 0;
    bool passed = true;
    // Non-gating entries are diagnostics (e.g. a relation exactly as printed
    // in the literature when it is known to be misprinted); they never fail
    // the report.
    bool gating = true;
    bool skipped = false;
    std::string note;
};

struct AlgebraReport {
    std::string suite;
    std::vector<RelationResult> relations;
    std::vector<std::string> notes;

    bool passed() const
    {
        return std::all_of(relations.begin(), relations.end(),
                           [](const RelationResult& r) { return r.passed || !r.gating || r.skipped; });
    }

    double max_residual() const
    {
        double m = 0.0;
        for (const auto& r : relations) {
            if (r.gating && !r.skipped) {
                m = std::max(m, r.residual);
            }
        }
        return m;
    }

    void append(const AlgebraReport& other)
    {
        relations.insert(relations.end(), other.relations.begin(), other.relations.end());
        notes.insert(notes.end(), other.notes.begin(), other.notes.end());
    }

    const RelationResult* find(const std::string& label) const
    {
        for (const auto& r : relations) {
            if (r.label == label) {
                return &r;
            }
        }
        return nullptr;
    }
};

// |lhs - rhs| measured absolutely when |rhs| < 1 and relatively otherwise.
inline double normalized_residual(double diff, double rhs_magnitude)
{
    return diff / std::max(1.0, rhs_magnitude);
}

} // namespace kcp
