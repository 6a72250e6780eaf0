#pragma once

// JSON summary document. Key order is part of the format: golden files
// compare byte-for-byte.

#include <string>

#include <json.hpp>

#include "feynkit/diagram.hpp"
#include "feynkit/topology.hpp"

namespace feynkit {

inline constexpr int kSummarySchemaVersion = 1;

inline nlohmann::ordered_json summary_document(const Diagram& d) {
  const TopologySummary s = summarize(d);
  nlohmann::ordered_json doc;
  doc["schemaVersion"] = kSummarySchemaVersion;
  doc["n"] = s.vertices;
  doc["C"] = s.components;
  doc["Q"] = s.contacts;
  doc["Ne"] = s.external_electrons;
  doc["Np"] = s.external_photons;
  doc["Fe"] = s.internal_electrons;
  doc["Fp"] = s.internal_photons;
  doc["F"] = s.internal_total;
  doc["m"] = s.loops;
  doc["K"] = s.power_counter;
  doc["mainCondition"] = s.main_condition;
  doc["irreducible"] = s.irreducible;
  doc["physical"] = s.physical;
  doc["contactPoints"] = s.contact_points;
  doc["degenerate"] = s.degenerate;
  return doc;
}

inline std::string summary_json_text(const Diagram& d) {
  return summary_document(d).dump(2) + "\n";
}

}  // namespace feynkit
