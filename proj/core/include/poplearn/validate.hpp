#pragma once

#include <string>
#include <vector>

#include "poplearn/game.hpp"

namespace poplearn {

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
  std::string to_string() const;
};

/// Raw game description mirroring the JSON schema. Kept separate from
/// GameTree so that malformed inputs can be diagnosed report-style instead
/// of throwing during construction.
struct RawNode {
  std::string id;
  bool terminal = false;
  int owner = 0;  // 1-based role, as in the file format
  std::string infoset;
  std::vector<std::pair<std::string, std::string>> edges;  // (action, child id)
  std::vector<double> payoffs;
};

struct RawPartition {
  int role = 0;  // 1-based
  std::vector<std::vector<std::string>> cells;  // terminal ids
};

struct RawGame {
  int players = 0;
  std::vector<RawNode> nodes;
  std::vector<RawPartition> partitions;
};

/// Full admissibility check: tree structure, information-set consistency,
/// perfect recall, partition coverage, payoff measurability,
/// action-measurability, and the observation-factorization condition the
/// belief machinery relies on. Returns every violation found.
ValidationReport validate_game(const RawGame& raw);

/// Same checks for an already-built game.
ValidationReport validate_game(const GameTree& tree,
                               const std::vector<TerminalPartition>& partitions);

struct LoadedGame {
  GameTree tree;
  std::vector<TerminalPartition> partitions;
};

/// Builds the validated game; throws std::invalid_argument carrying the
/// report when validation fails.
LoadedGame realize(const RawGame& raw);

RawGame to_raw(const GameTree& tree, const std::vector<TerminalPartition>& partitions);

}  // namespace poplearn
