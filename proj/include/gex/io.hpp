#pragma once

#include "gex/corpus.hpp"
#include "gex/explorer.hpp"

#include <json.hpp>

#include <charconv>

namespace gex::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that reads back as the same double. Non-finite
/// values are clamped to the largest finite double of the same sign.
inline std::string decimal(double x) {
  if (std::isnan(x)) x = std::numeric_limits<double>::max();
  if (std::isinf(x)) x = std::copysign(std::numeric_limits<double>::max(), x);
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline Json to_json(const detect::Relation& r) {
  Json ops = Json::array();
  for (const auto& e : r.operands) ops.push_back(dsl::format(e));
  return Json{{"kind", detect::to_string(r.kind)}, {"operands", ops}, {"coefficients", r.coefficients},
              {"text", r.text()}};
}

inline Json to_json(const detect::Evidence& e) {
  return Json{{"samples", e.samples},
              {"max_residual_fast", decimal(e.max_residual_fast)},
              {"max_residual_confirm", decimal(e.max_residual_confirm)},
              {"negative_control_residual", decimal(e.negative_control_residual)}};
}

inline Json to_json(const explore::CatalogEntry& e) {
  return Json{{"config", e.config},           {"constraints", e.constraints}, {"steps", e.steps},
              {"relation", to_json(e.relation)}, {"evidence", to_json(e.evidence)}, {"trivial", e.trivial}};
}

struct CatalogHeader {
  std::string start;
  std::string constraints;
  int depth = 1;
  std::uint64_t seed = 1;
};

/// Catalog document; see docs/catalog.schema.json.
inline Json catalog_json(const explore::Catalog& c, const CatalogHeader& h) {
  Json records = Json::array();
  for (const auto& e : c.entries) records.push_back(to_json(e));
  return Json{{"format", "gex-catalog"},
              {"version", 1},
              {"start", h.start},
              {"constraints", h.constraints},
              {"depth", h.depth},
              {"seed", h.seed},
              {"summary",
               {{"sequences", c.sequences},
                {"skipped", c.skipped},
                {"relations", c.entries.size() - c.trivial},
                {"trivial", c.trivial}}},
              {"records", records}};
}

inline Json report_json(const std::vector<corpus::Entry>& entries, const corpus::Report& rep) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < rep.results.size(); ++i) {
    const auto& r = rep.results[i];
    const auto& e = entries[i];
    rows.push_back(Json{{"id", r.id},
                        {"file", e.file},
                        {"status", corpus::to_string(e.status)},
                        {"expect", e.expect},
                        {"source", e.source},
                        {"passed", r.passed},
                        {"samples", r.samples},
                        {"max_residual_fast", decimal(r.max_residual_fast)},
                        {"max_residual_confirm", decimal(r.max_residual_confirm)},
                        {"failure", r.failure}});
  }
  return Json{{"format", "gex-corpus-report"}, {"version", 1},
              {"samples", rep.samples},        {"seed", rep.seed},
              {"passed", rep.passed()},        {"total", rep.results.size()},
              {"entries", rows}};
}

}  // namespace gex::io
