#pragma once

// JSON encodings of the result records (field names follow the record
// members) and the run report envelope.

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mirlab/chordnet.hpp"
#include "mirlab/dynamics.hpp"
#include "mirlab/information.hpp"
#include "mirlab/intervals.hpp"
#include "mirlab/rankshape.hpp"
#include "mirlab/resample.hpp"
#include "mirlab/rubato.hpp"

namespace mirlab::report {

using json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "0.1.0";

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

inline json to_json(const Interval& ci) { return {{"point", ci.point}, {"lo", ci.lo}, {"hi", ci.hi}}; }

inline json to_json(const DivergenceMatrix& m) {
  return {{"labels", m.labels}, {"values", m.values}, {"symmetrized", m.symmetrized}};
}

inline json to_json(const ZipfFit& z) {
  return {{"alpha", z.alpha}, {"r_squared", z.r_squared}, {"n_ranks", z.n_ranks}};
}

inline json to_json(const GiniReport& g) {
  json dims = json::array();
  for (const auto& e : g.per_dimension) {
    json d = {{"label", e.label}, {"gini", optional_json(e.gini)}};
    if (!e.gini) d["error"] = e.error;
    dims.push_back(std::move(d));
  }
  return {{"per_dimension", std::move(dims)}};
}

inline json to_json(const NetworkAnalysis& na) {
  return {{"nodes", na.nodes},
          {"pagerank", na.pagerank},
          {"in_degree", na.in_degree},
          {"out_degree", na.out_degree},
          {"in_strength", na.in_strength},
          {"local_clustering", na.local_clustering},
          {"communities", na.communities},
          {"edge_count", na.edge_count},
          {"density", na.density},
          {"mean_clustering", na.mean_clustering},
          {"community_count", na.community_count},
          {"modularity", na.modularity},
          {"diameter", optional_json(na.diameter)},
          {"avg_path", optional_json(na.avg_path)},
          {"small_world", na.small_world},
          {"gravity_centre", na.gravity_centre},
          {"gravity_pagerank", na.gravity_pagerank}};
}

inline json to_json(const NetworkFeatureVector& v) {
  json out = json::object();
  const auto values = v.values();
  for (std::size_t i = 0; i < values.size(); ++i) out[NetworkFeatureVector::kNames[i]] = values[i];
  return out;
}

inline json to_json(const DistanceMatrix& d) {
  std::vector<std::string> dropped;
  for (auto c : d.dropped_components) dropped.emplace_back(NetworkFeatureVector::kNames.at(c));
  return {{"labels", d.labels}, {"values", d.values}, {"dropped_components", dropped}};
}

inline json to_json(const StationarityResult& r) {
  return {{"chi2", r.chi2},
          {"p_value", r.p_value},
          {"cramers_v", r.cramers_v},
          {"n_segments", r.n_segments},
          {"df", r.df},
          {"n_categories_used", r.n_categories_used},
          {"total_count", r.total_count},
          {"low_expected_count", r.low_expected_count}};
}

inline json to_json(const FractalDimension& f) {
  return {{"d", f.d}, {"r_squared", f.r_squared}, {"k_max", f.k_max}, {"curve_length", f.curve_length}};
}

inline json to_json(const RubatoAnalysis& a) {
  json periods = json::array();
  for (const auto& p : a.dominant_periods) {
    periods.push_back({{"period_beats", p.period_beats}, {"power_norm", p.power_norm}});
  }
  return {{"category", std::string(to_string(a.category))},
          {"sigma_bpm", a.sigma_bpm},
          {"periodicity_ratio", optional_json(a.periodicity_ratio)},
          {"dominant_periods", std::move(periods)}};
}

inline json to_json(const ClassifierThresholds& t) {
  return {{"metronomic_sigma", t.metronomic_sigma},
          {"free_sigma", t.free_sigma},
          {"quasi_ratio", t.quasi_ratio},
          {"periodic_ratio", t.periodic_ratio}};
}

inline json contingency_json(const CorpusClassification& c) {
  json rows = json::array();
  for (std::size_t i = 0; i < c.labels.size(); ++i) {
    json row = {{"label", c.labels[i]}};
    for (auto cat : kRubatoCategories) row[std::string(to_string(cat))] = c.table[i][static_cast<std::size_t>(cat)];
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const CorpusClassification& c) {
  json curves = json::array();
  for (const auto& cr : c.curves) {
    json j = to_json(cr.analysis);
    j["label"] = cr.label;
    j["id"] = cr.id;
    curves.push_back(std::move(j));
  }
  json excluded = json::array();
  for (const auto& e : c.excluded) excluded.push_back({{"label", e.label}, {"id", e.id}, {"reason", e.reason}});
  return {{"contingency", contingency_json(c)}, {"curves", std::move(curves)}, {"excluded", std::move(excluded)}};
}

inline json to_json(const IntervalAnalysis& a) {
  json out = {{"family", std::string(to_string(a.family))}};
  if (a.rate) out["rate"] = *a.rate;
  if (a.location) out["location"] = *a.location;
  if (a.scale) out["scale"] = *a.scale;
  out["log_likelihood"] = a.log_likelihood;
  out["mean_log_likelihood_exponential"] = a.mean_log_likelihood_exponential;
  out["mean_log_likelihood_laplace"] = a.mean_log_likelihood_laplace;
  out["ks_distance"] = a.ks_distance;
  out["n"] = a.n;
  return out;
}

inline json to_json(const IntervalBootstrap& b) {
  json params = json::array();
  for (const auto& p : b.parameters) {
    params.push_back({{"name", p.name}, {"point", p.point}, {"lo", p.lo}, {"hi", p.hi}});
  }
  return {{"family", std::string(to_string(b.family))}, {"parameters", std::move(params)}};
}

inline json to_json(const SpearmanResult& s) { return {{"rho", s.rho}, {"p_value", s.p_value}}; }

inline json to_json(const JackknifeReport& r) {
  json leave = json::array();
  for (const auto& [unit, rho] : r.leave_out_values) leave.push_back({{"unit", unit}, {"rho", rho}});
  return {{"rho_point", r.rho_point},
          {"p_point", r.p_point},
          {"rho_jack", r.rho_jack},
          {"se_jack", r.se_jack},
          {"ci_lo", r.ci_lo},
          {"ci_hi", r.ci_hi},
          {"leave_out_values", std::move(leave)},
          {"most_influential", r.leave_out_values.at(r.most_influential()).first}};
}

struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  json parameters = json::object();
  json results = json::object();

  json to_json() const {
    return {{"tool_version", std::string(kToolVersion)},
            {"command", command},
            {"seed", seed},
            {"parameters", parameters},
            {"results", results}};
  }
};

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void flatten(const json& v, const std::string& prefix, std::ostringstream& out) {
  if (v.is_object()) {
    for (const auto& [k, child] : v.items()) flatten(child, prefix + "/" + k, out);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "/" + std::to_string(i), out);
  } else {
    out << csv_field(prefix) << ',' << csv_field(v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

}  // namespace detail

/// One "path,value" row per scalar, paths in JSON-pointer form. Tables in
/// the results (heatmap cells, per-curve rows) become one row per cell.
inline std::string to_csv(const RunReport& r) {
  std::ostringstream out;
  out << "path,value\n";
  detail::flatten(r.to_json(), "", out);
  return out.str();
}

/// Long-format "plot,row,column,value" table for the figure-like parts of
/// corpus results: divergence and distance heatmaps, network-vs-reference
/// scatter pairs, contingency tables and per-label ratio box plots. Empty
/// when the results carry none of these.
inline std::string plot_table(const json& results) {
  std::ostringstream out;
  auto row = [&](const std::string& plot, const std::string& r, const std::string& c, const json& v) {
    out << detail::csv_field(plot) << ',' << detail::csv_field(r) << ',' << detail::csv_field(c) << ','
        << v.dump() << '\n';
  };
  auto heatmap = [&](const std::string& plot, const json& m) {
    const auto& labels = m.at("labels");
    const auto& values = m.at("values");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      for (std::size_t j = 0; j < labels.size(); ++j) row(plot, labels[i], labels[j], values[i][j]);
    }
  };
  if (results.contains("matrix")) heatmap("divergence", results["matrix"]);
  if (results.contains("distance")) heatmap("network_distance", results["distance"]);
  if (results.contains("reference_comparison")) {
    for (const auto& p : results["reference_comparison"]["pairs"]) {
      const std::string pair = p["a"].get<std::string>() + "|" + p["b"].get<std::string>();
      row("scatter", pair, "network_distance", p["network_distance"]);
      row("scatter", pair, "reference_distance", p["reference_distance"]);
    }
  }
  if (results.contains("contingency")) {
    for (const auto& r : results["contingency"]) {
      for (const auto& [k, v] : r.items()) {
        if (k != "label") row("contingency", r["label"], k, v);
      }
    }
  }
  if (results.contains("label_summaries")) {
    for (const auto& s : results["label_summaries"]) {
      for (const auto& [k, v] : s["ratio_quantiles"].items()) row("ratio_box", s["label"], k, v);
    }
  }
  const std::string body = out.str();
  return body.empty() ? body : "plot,row,column,value\n" + body;
}

}  // namespace mirlab::report
