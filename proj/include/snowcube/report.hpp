#pragma once

// Run configuration and the structured report. A report is a single
// self-describing JSON document (or a fixed-header tabular rendering of the
// same records). Every record is either pass/fail with a tolerance or an
// explicitly reported-only quantity. Identical configs produce byte-identical
// reports except for the "timing" subtree.

#include <json.hpp>

#include <string>
#include <vector>

#include "snowcube/version.hpp"

namespace snowcube {

using Json = nlohmann::ordered_json;

struct Caps {
  int max_k = kDefaultDimensionCap;
  int max_lp_points = 16;
  int max_cut_points = 20;
  int max_orbit_subset = 14;
  std::uint64_t group_order_cap = std::size_t(1) << 20;
};

struct RunConfig {
  std::string command;
  int k = 8;
  std::string group = "cyclic";
  std::string generators_file;
  std::string metric_file;
  std::vector<double> epsilons = {0.25};
  double beta = 0.25;
  double eta = 0.02;
  double p = -1.0;  // explicit noise level; < 0 means derive from beta
  double kko_c = 1.0;  // <= 1 disables the junta-regime diagnostic
  std::uint64_t seed = 1;
  long trials = 1000;
  std::uint64_t mc_samples = 1'000'000;
  double r = 1.0;
  double D = 16.0;
  int sketch_bits = 64;
  std::string rational = "auto";  // auto | on | off
  std::string format = "structured";  // structured | tabular
  std::string out;  // empty: stdout
  Caps caps;
};

enum class RecordStatus { pass, fail, reported_only };

struct Record {
  std::string name;     // unique within the report
  std::string check;    // stable id of the identity/bound being exercised
  RecordStatus status = RecordStatus::reported_only;
  double tolerance = 0.0;  // meaningful for pass/fail only
  Json inputs = Json::object();
  Json values = Json::object();
};

struct Report {
  RunConfig config;
  std::vector<Record> records;
  double total_seconds = 0.0;

  int failures() const {
    int f = 0;
    for (const auto& r : records)
      if (r.status == RecordStatus::fail) ++f;
    return f;
  }
};

inline Record make_check(std::string name, std::string check, bool pass, double tolerance,
                         Json inputs, Json values) {
  Record r;
  r.name = std::move(name);
  r.check = std::move(check);
  r.status = pass ? RecordStatus::pass : RecordStatus::fail;
  r.tolerance = tolerance;
  r.inputs = std::move(inputs);
  r.values = std::move(values);
  return r;
}

inline Record make_reported(std::string name, std::string check, Json inputs, Json values) {
  Record r;
  r.name = std::move(name);
  r.check = std::move(check);
  r.status = RecordStatus::reported_only;
  r.inputs = std::move(inputs);
  r.values = std::move(values);
  return r;
}

inline const char* to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::pass: return "pass";
    case RecordStatus::fail: return "fail";
    default: return "reported-only";
  }
}

inline Json config_to_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["k"] = c.k;
  j["group"] = c.group;
  j["generators_file"] = c.generators_file;
  j["metric_file"] = c.metric_file;
  j["epsilons"] = c.epsilons;
  j["beta"] = c.beta;
  j["eta"] = c.eta;
  j["p"] = c.p;
  j["kko_c"] = c.kko_c;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["mc_samples"] = c.mc_samples;
  j["r"] = c.r;
  j["D"] = c.D;
  j["sketch_bits"] = c.sketch_bits;
  j["rational"] = c.rational;
  j["format"] = c.format;
  j["out"] = c.out;
  j["caps"] = Json{{"max_k", c.caps.max_k},
                   {"max_lp_points", c.caps.max_lp_points},
                   {"max_cut_points", c.caps.max_cut_points},
                   {"max_orbit_subset", c.caps.max_orbit_subset},
                   {"group_order_cap", c.caps.group_order_cap}};
  return j;
}

inline Json report_to_json(const Report& rep) {
  Json j;
  j["tool"] = "snowcube";
  j["version"] = kVersion;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = config_to_json(rep.config);
  Json records = Json::array();
  for (const auto& r : rep.records) {
    Json jr;
    jr["name"] = r.name;
    jr["check"] = r.check;
    jr["status"] = to_string(r.status);
    if (r.status != RecordStatus::reported_only) jr["tolerance"] = r.tolerance;
    jr["inputs"] = r.inputs;
    jr["values"] = r.values;
    records.push_back(std::move(jr));
  }
  j["records"] = std::move(records);
  j["summary"] = Json{{"pass", 0}, {"fail", 0}, {"reported_only", 0}};
  for (const auto& r : rep.records) {
    switch (r.status) {
      case RecordStatus::pass: j["summary"]["pass"] = int(j["summary"]["pass"]) + 1; break;
      case RecordStatus::fail: j["summary"]["fail"] = int(j["summary"]["fail"]) + 1; break;
      default:
        j["summary"]["reported_only"] = int(j["summary"]["reported_only"]) + 1;
        break;
    }
  }
  j["timing"] = Json{{"total_seconds", rep.total_seconds}};
  return j;
}

inline std::string render_structured(const Report& rep) {
  return report_to_json(rep).dump(2) + "\n";
}

// one record per line; inputs/values as compact JSON in the last two columns
inline std::string render_tabular(const Report& rep) {
  std::string out = "name\tcheck\tstatus\ttolerance\tinputs\tvalues\n";
  for (const auto& r : rep.records) {
    out += r.name;
    out += '\t';
    out += r.check;
    out += '\t';
    out += to_string(r.status);
    out += '\t';
    out += (r.status == RecordStatus::reported_only) ? "-" : Json(r.tolerance).dump();
    out += '\t';
    out += r.inputs.dump();
    out += '\t';
    out += r.values.dump();
    out += '\n';
  }
  return out;
}

inline std::string render_report(const Report& rep) {
  return rep.config.format == "tabular" ? render_tabular(rep) : render_structured(rep);
}

}  // namespace snowcube
