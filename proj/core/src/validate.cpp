#include "poplearn/validate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace poplearn {

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& p : problems) os << p << "\n";
  return os.str();
}

namespace {

// Structural pass over the raw description. Appends problems; returns true
// when the structure is sound enough to realize a GameTree from it.
bool check_structure(const RawGame& raw, ValidationReport& rep) {
  bool sound = true;
  auto fail = [&](const std::string& msg) {
    rep.problems.push_back(msg);
    sound = false;
  };
  if (raw.players < 1) fail("player count must be positive");
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(raw.nodes.size()); ++i) {
    const RawNode& n = raw.nodes[i];
    if (n.id.empty()) fail("node with empty id");
    if (!index.emplace(n.id, i).second) fail("duplicate node id '" + n.id + "'");
  }
  if (raw.nodes.empty()) {
    fail("game has no nodes");
    return false;
  }

  struct InfoRec {
    int owner;
    std::vector<std::string> actions;
    std::string first_node;
  };
  std::map<std::string, InfoRec> infosets;
  std::map<std::string, int> parent_count;
  for (const RawNode& n : raw.nodes) {
    if (n.terminal) {
      if (static_cast<int>(n.payoffs.size()) != raw.players)
        fail("terminal '" + n.id + "' has " + std::to_string(n.payoffs.size()) +
             " payoffs for " + std::to_string(raw.players) + " players");
      for (double u : n.payoffs)
        if (!std::isfinite(u)) fail("non-finite payoff at terminal '" + n.id + "'");
      if (!n.edges.empty()) fail("terminal '" + n.id + "' has edges");
      continue;
    }
    if (n.owner < 1 || n.owner > raw.players)
      fail("node '" + n.id + "' owner " + std::to_string(n.owner) + " out of range");
    if (n.infoset.empty()) fail("decision node '" + n.id + "' has no infoset");
    if (n.edges.empty()) fail("decision node '" + n.id + "' has no edges");
    std::vector<std::string> actions;
    std::set<std::string> uniq;
    for (const auto& [action, child] : n.edges) {
      actions.push_back(action);
      if (!uniq.insert(action).second)
        fail("duplicate action '" + action + "' at node '" + n.id + "'");
      auto it = index.find(child);
      if (it == index.end()) {
        fail("node '" + n.id + "' references unknown child '" + child + "'");
      } else {
        parent_count[child]++;
      }
    }
    auto [it, fresh] = infosets.emplace(n.infoset, InfoRec{n.owner, actions, n.id});
    if (!fresh) {
      if (it->second.owner != n.owner)
        fail("information set inconsistency: '" + n.infoset + "' owned by role " +
             std::to_string(it->second.owner) + " at '" + it->second.first_node +
             "' but role " + std::to_string(n.owner) + " at '" + n.id + "'");
      if (it->second.actions != actions)
        fail("information set inconsistency: nodes '" + it->second.first_node + "' and '" +
             n.id + "' in '" + n.infoset + "' have different action sets");
    }
  }
  for (const auto& [child, cnt] : parent_count)
    if (cnt > 1) fail("node '" + child + "' has " + std::to_string(cnt) + " parents");

  int roots = 0;
  for (const RawNode& n : raw.nodes)
    if (!parent_count.count(n.id)) ++roots;
  if (roots != 1) fail("tree must have exactly one root, found " + std::to_string(roots));
  return sound;
}

GameTree realize_tree(const RawGame& raw) {
  GameTreeBuilder b(raw.players);
  std::map<std::string, NodeId> ids;
  for (const RawNode& n : raw.nodes) {
    if (n.terminal) {
      ids[n.id] = b.add_terminal(n.id, n.payoffs);
    } else {
      std::vector<std::string> actions;
      for (const auto& e : n.edges) actions.push_back(e.first);
      ids[n.id] = b.add_decision(n.id, n.owner - 1, n.infoset, actions);
    }
  }
  for (const RawNode& n : raw.nodes)
    for (const auto& [action, child] : n.edges) b.add_edge(ids[n.id], action, ids[child]);
  return b.build();
}

void check_partitions(const GameTree& tree, const RawGame& raw, ValidationReport& rep,
                      std::vector<TerminalPartition>* out) {
  std::set<int> seen_roles;
  std::vector<std::optional<TerminalPartition>> built(tree.num_roles());
  for (const RawPartition& rp : raw.partitions) {
    if (rp.role < 1 || rp.role > tree.num_roles()) {
      rep.problems.push_back("partition role " + std::to_string(rp.role) + " out of range");
      continue;
    }
    if (!seen_roles.insert(rp.role).second) {
      rep.problems.push_back("duplicate partition for role " + std::to_string(rp.role));
      continue;
    }
    std::vector<std::vector<int>> cells;
    bool bad = false;
    for (const auto& cell : rp.cells) {
      std::vector<int> c;
      for (const std::string& tid : cell) {
        auto nid = tree.find_node(tid);
        if (!nid || !tree.is_terminal(*nid)) {
          rep.problems.push_back("partition for role " + std::to_string(rp.role) +
                                 " references non-terminal '" + tid + "'");
          bad = true;
          continue;
        }
        c.push_back(tree.terminal_index(*nid));
      }
      cells.push_back(std::move(c));
    }
    if (bad) continue;
    try {
      built[rp.role - 1].emplace(tree, rp.role - 1, std::move(cells));
    } catch (const std::exception& e) {
      rep.problems.push_back("partition for role " + std::to_string(rp.role) + ": " + e.what());
    }
  }
  for (Role r = 0; r < tree.num_roles(); ++r) {
    if (!built[r]) {
      rep.problems.push_back("missing partition for role " + std::to_string(r + 1));
      return;
    }
  }
  if (out) {
    out->clear();
    for (Role r = 0; r < tree.num_roles(); ++r) out->push_back(*built[r]);
  }
}

}  // namespace

ValidationReport validate_game(const GameTree& tree,
                               const std::vector<TerminalPartition>& partitions) {
  ValidationReport rep;
  if (static_cast<int>(partitions.size()) != tree.num_roles()) {
    rep.problems.push_back("need one partition per role");
    return rep;
  }

  for (Role r = 0; r < tree.num_roles(); ++r) {
    const TerminalPartition& part = partitions[r];
    if (part.role() != r) rep.problems.push_back("partition order mismatch");

    for (int c = 0; c < part.num_cells(); ++c) {
      const auto& cell = part.cells()[c];
      // Payoff measurability: the owner's payoff is constant on the cell.
      double u0 = tree.payoffs_at(cell[0])[r];
      for (int ti : cell) {
        if (std::abs(tree.payoffs_at(ti)[r] - u0) > 1e-12) {
          rep.problems.push_back("payoff measurability violated: role " + std::to_string(r + 1) +
                                 " cell " + std::to_string(c) + " mixes payoffs " +
                                 std::to_string(u0) + " and " +
                                 std::to_string(tree.payoffs_at(ti)[r]));
          break;
        }
      }
      // Action-measurability: the cell is exactly the terminals consistent
      // with its revealed (infoset, action) assignment.
      const auto& rev = part.revealed(c);
      std::set<int> consistent;
      for (int ti = 0; ti < tree.num_terminals(); ++ti) {
        const auto& pp = tree.path_pairs(ti);
        bool all = true;
        for (auto pr : rev) {
          if (std::find(pp.begin(), pp.end(), pr) == pp.end()) {
            all = false;
            break;
          }
        }
        if (all) consistent.insert(ti);
      }
      std::set<int> members(cell.begin(), cell.end());
      if (consistent != members) {
        rep.problems.push_back(
            "action measurability violated: role " + std::to_string(r + 1) + " cell " +
            std::to_string(c) + " is not the full set of terminals matching its revealed actions");
      }
    }

    // Observation factorization: for each own pure strategy, the opponent
    // profiles reaching a cell must form the product cylinder of the cell's
    // revealed opponent actions. This is what makes count updates exact
    // Bayes under independent per-infoset priors.
    std::vector<std::vector<PureStrategy>> opp_strats;
    std::vector<Role> opp_roles;
    long long combos = 1;
    for (Role j = 0; j < tree.num_roles(); ++j) {
      if (j == r) continue;
      opp_roles.push_back(j);
      opp_strats.push_back(enumerate_pure_strategies(tree, j));
      combos *= static_cast<long long>(opp_strats.back().size());
    }
    if (combos > 20000) continue;  // factorization scan is corpus-scale machinery
    auto own = enumerate_pure_strategies(tree, r);
    std::vector<int> local_of(tree.num_infosets(), -1);
    for (Role j = 0; j < tree.num_roles(); ++j) {
      const auto& hs = tree.role_infosets(j);
      for (int k = 0; k < static_cast<int>(hs.size()); ++k) local_of[hs[k]] = k;
    }
    for (const PureStrategy& si : own) {
      // cell -> set of opponent combo indices reaching it
      std::map<int, std::set<long long>> reach;
      std::vector<int> idx(opp_roles.size(), 0);
      for (long long flat = 0; flat < combos; ++flat) {
        std::vector<PureStrategy> prof(tree.num_roles());
        prof[r] = si;
        for (size_t k = 0; k < opp_roles.size(); ++k) prof[opp_roles[k]] = opp_strats[k][idx[k]];
        NodeId z = outcome(tree, prof);
        reach[part.cell_of(tree.terminal_index(z))].insert(flat);
        for (int k = static_cast<int>(opp_roles.size()) - 1; k >= 0; --k) {
          if (++idx[k] < static_cast<int>(opp_strats[k].size())) break;
          idx[k] = 0;
        }
      }
      for (auto& [c, got] : reach) {
        std::set<long long> cylinder;
        std::vector<int> idx2(opp_roles.size(), 0);
        for (long long flat = 0; flat < combos; ++flat) {
          bool match = true;
          for (auto [h, a] : part.revealed(c)) {
            Role owner = tree.infoset_info(h).owner;
            if (owner == r) continue;
            int k = static_cast<int>(std::find(opp_roles.begin(), opp_roles.end(), owner) -
                                     opp_roles.begin());
            if (opp_strats[k][idx2[k]].choice[ /*role-local*/ local_of[h]] != a) {
              match = false;
              break;
            }
          }
          if (match) cylinder.insert(flat);
          for (int k = static_cast<int>(opp_roles.size()) - 1; k >= 0; --k) {
            if (++idx2[k] < static_cast<int>(opp_strats[k].size())) break;
            idx2[k] = 0;
          }
        }
        if (got != cylinder) {
          rep.problems.push_back("observation factorization violated: role " +
                                 std::to_string(r + 1) + " cell " + std::to_string(c) +
                                 " under own strategy " + pure_strategy_name(tree, si));
        }
      }
    }
  }
  return rep;
}

ValidationReport validate_game(const RawGame& raw) {
  ValidationReport rep;
  if (!check_structure(raw, rep)) return rep;
  GameTree tree;
  try {
    tree = realize_tree(raw);
  } catch (const std::exception& e) {
    rep.problems.push_back(e.what());
    return rep;
  }
  std::vector<TerminalPartition> parts;
  check_partitions(tree, raw, rep, &parts);
  if (!rep.ok()) return rep;
  ValidationReport deep = validate_game(tree, parts);
  rep.problems.insert(rep.problems.end(), deep.problems.begin(), deep.problems.end());
  return rep;
}

LoadedGame realize(const RawGame& raw) {
  ValidationReport rep = validate_game(raw);
  if (!rep.ok()) throw std::invalid_argument("invalid game:\n" + rep.to_string());
  LoadedGame g{realize_tree(raw), {}};
  check_partitions(g.tree, raw, rep, &g.partitions);
  return g;
}

RawGame to_raw(const GameTree& tree, const std::vector<TerminalPartition>& partitions) {
  RawGame raw;
  raw.players = tree.num_roles();
  for (NodeId v = 0; v < tree.num_nodes(); ++v) {
    RawNode n;
    n.id = tree.node_name(v);
    if (tree.is_terminal(v)) {
      n.terminal = true;
      auto pay = tree.payoffs(v);
      n.payoffs.assign(pay.begin(), pay.end());
    } else {
      n.owner = tree.owner(v) + 1;
      const Infoset& h = tree.infoset_info(tree.infoset(v));
      n.infoset = h.name;
      for (ActionIdx a = 0; a < h.num_actions(); ++a)
        n.edges.emplace_back(h.actions[a], tree.node_name(tree.child(v, a)));
    }
    raw.nodes.push_back(std::move(n));
  }
  for (const TerminalPartition& p : partitions) {
    RawPartition rp;
    rp.role = p.role() + 1;
    for (const auto& cell : p.cells()) {
      std::vector<std::string> ids;
      for (int ti : cell) ids.push_back(tree.node_name(tree.terminals()[ti]));
      rp.cells.push_back(std::move(ids));
    }
    raw.partitions.push_back(std::move(rp));
  }
  return raw;
}

}  // namespace poplearn
