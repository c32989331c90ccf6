#pragma once

#include <string>

#include "hierarb/document.hpp"

#ifndef HIERARB_TEST_DATA
#define HIERARB_TEST_DATA "tests/data"
#endif

inline std::string data_path(const std::string& name) { return std::string(HIERARB_TEST_DATA) + "/" + name; }

inline hierarb::MarketScenario data_scenario(const std::string& name) {
  return hierarb::load_scenario(data_path(name));
}

// Single-state market where every strategy holds only the bond, so each
// profile's sdf value m gives a strategy holding k bonds a gain of k(1 - m).
inline std::string bond_market(const std::string& agents, const std::string& entries) {
  return R"({"version": "1",
  "states": [{"label": "only", "prob": "1"}],
  "assets": {"payoffs": [["1"]], "risk_free_index": 0, "gross_rate": "1"},
  "agents": )" + agents + R"(,
  "aggregation": {"kind": "tabular", "entries": )" + entries + R"(}})";
}
