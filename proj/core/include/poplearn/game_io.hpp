#pragma once

#include <string>

#include "poplearn/beliefs.hpp"
#include "poplearn/validate.hpp"

namespace poplearn {

/// Parses the game JSON schema:
///   {"players": I,
///    "nodes": [{"id","owner","infoset","edges":[{"action","child"}]} |
///              {"id","terminal":true,"payoffs":[...]}],
///    "partitions": [{"role", "cells": [[terminal ids]]}]}
/// Unknown keys are rejected; `where` names the source in error messages.
RawGame parse_game_json(const std::string& text, const std::string& where);

std::string game_to_json(const RawGame& raw);
std::string game_to_json(const GameTree& tree, const std::vector<TerminalPartition>& partitions);

/// Loads and validates; throws std::runtime_error naming the path on schema
/// or validation failures.
LoadedGame load_game(const std::string& path);

void save_game(const std::string& path, const GameTree& tree,
               const std::vector<TerminalPartition>& partitions);

/// Prior JSON: {"role": i, "weights": {infoset id: {action: weight}}}.
DirichletPrior parse_prior_json(const std::string& text, const GameTree& tree,
                                const std::string& where);
std::string prior_to_json(const GameTree& tree, const DirichletPrior& prior);
DirichletPrior load_prior(const std::string& path, const GameTree& tree);

/// Priors file: either one prior object or an array with one per role.
std::vector<DirichletPrior> load_priors(const std::string& path, const GameTree& tree);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace poplearn
