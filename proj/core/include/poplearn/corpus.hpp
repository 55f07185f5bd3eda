#pragma once

#include <string>
#include <vector>

#include "poplearn/validate.hpp"

namespace poplearn {

/// Built-in game catalog. Each entry validates cleanly and satisfies a
/// pinned constraint list checked by corpus_check.
///
///   fig1        entry game: three first-mover actions, uninformative safe
///               exit, a dominated entry that is the cheap experiment
///   fig2        three-role entry chain where the middle role's second entry
///               is payoff-dominated at equal information
///   fig3-left   coalesced form of fig3-right
///   fig3-right  split form: exit/enter then a second own choice
///   fig4-left   first mover unobserved, responder with two consecutive
///               infosets (the coalescing pair)
///   fig4-right  fig4-left with the pair merged
///   fig5-left   three-role chain where each drop ends the game
///   fig5-right  its one-shot strategy game, fully revealing feedback
///   fig6        fig5-right with feedback pooled to match fig5-left
///   fig7-left   fig1 payoffs, responder moves after every action, fully
///               revealing feedback
///   fig7-right  same but the safe exit reveals nothing
///   fig8        3x2 matrix game with a strictly dominated row that shields
///               an equilibrium from iterated admissibility
///   fig9        the middle role's auxiliary game for fig2
std::vector<std::string> corpus_ids();

bool corpus_has(const std::string& id);

LoadedGame corpus_game(const std::string& id);

/// Verifies the entry's pinned constraints (payoff patterns, dominance
/// relations, partition pooling). Throws on violation.
void corpus_check(const std::string& id, const LoadedGame& game);

/// JSON for the entry (same schema as load_game).
std::string corpus_json(const std::string& id);

}  // namespace poplearn
