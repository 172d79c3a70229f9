#pragma once

#include <optional>
#include <string>

#include "olproj/instance.hpp"
#include "olproj/kserver.hpp"

namespace olproj {

struct ExperimentConfig {
  int schema_version = 1;
  std::string algorithm;  // kserver | paging | setcover
  std::string instance_path;
  std::string instance_id;  // defaults to the file stem
  std::string audit = "primal";  // off | primal | full
  bool oracle = true;
  std::string out_trace;
  std::string out_summary;
  std::string out_plot;
  double tol_feas = 1e-9;
  double tol_opt = 1e-6;
};

Json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const Json& j);

AuditLevel audit_level_from_string(const std::string& s);

struct ExperimentOutput {
  std::string trace_jsonl;
  std::string summary_csv;  // header + one row
  std::string plot_csv;
  double alg_cost = 0.0;
  double alg_cost_pos = 0.0;
  std::optional<double> opt_cost;
  std::optional<double> ratio;  // (alg - additive) / opt-side movement
  double bound = 0.0;
  double additive = 0.0;
  int audit_passed = 0;
  int audit_skipped = 0;
  int audit_total = 0;
  bool audits_ok = true;
  int exit_code = 0;  // 0 ok, 4 audit failure
};

extern const char* kSummaryHeader;

ExperimentOutput run_experiment_kserver(const KServerInstance& ins, AuditLevel level, bool oracle,
                                        const std::string& id);
ExperimentOutput run_experiment_paging(const PagingInstance& ins, AuditLevel level, bool oracle,
                                       const std::string& id);
ExperimentOutput run_experiment_setcover(const SetCoverInstance& ins, AuditLevel level,
                                         bool oracle, const std::string& id);

// Loads the instance, dispatches on algorithm, writes any configured output
// files, and returns the in-memory outputs.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

}  // namespace olproj
