#pragma once

#include <string>
#include <vector>

#include "poplearn/population.hpp"

namespace poplearn {

/// Replication drivers: each id runs one end-to-end pipeline against
/// machine-checkable criteria. Grids, priors, tolerances and seeds come from
/// the spec file, never from code.
std::vector<std::string> replication_ids();

struct ReplicationCriterion {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string detail;
};

struct ReplicationReport {
  std::string id;
  bool pass = false;
  std::vector<ReplicationCriterion> criteria;
  double seconds = 0.0;
  std::string results_json;  // full machine-readable artifact
  std::string summary() const;
};

/// Runs the replication described by the spec JSON (schema documented in
/// data/replications/). `where` names the source for error messages.
ReplicationReport replicate(const std::string& spec_json, const std::string& where);

/// Loads <spec_dir>/<id>.json and runs it.
ReplicationReport replicate_id(const std::string& id, const std::string& spec_dir);

}  // namespace poplearn
