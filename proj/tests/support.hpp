#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "kcp/types.hpp"

namespace kcp::test {

// Reference values produced by tests/oracle/oracle.py.
inline const nlohmann::json& reference()
{
    static const nlohmann::json j = [] {
        std::ifstream in(KCP_ORACLE_VALUES);
        REQUIRE_MESSAGE(in.good(), "missing oracle file " KCP_ORACLE_VALUES);
        return nlohmann::json::parse(in);
    }();
    return j;
}

inline cplx as_complex(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline KleinPoint origin_point() { return KleinPoint(cplx(0.0, -1.0), {0.0}); }
inline KleinPoint sample_point() { return KleinPoint(cplx(1.0, -1.0), {0.5}); }

inline bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

} // namespace kcp::test
