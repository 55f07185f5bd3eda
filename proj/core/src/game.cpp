#include "poplearn/game.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace poplearn {

ActionIdx Infoset::action_index(const std::string& label) const {
  for (int i = 0; i < static_cast<int>(actions.size()); ++i) {
    if (actions[i] == label) return i;
  }
  throw std::invalid_argument("unknown action '" + label + "' at infoset '" + name + "'");
}

std::span<const double> GameTree::payoffs(NodeId n) const {
  if (!is_terminal(n)) throw std::logic_error("payoffs() on a decision node");
  return payoffs_[nodes_[n].terminal_index];
}

std::span<const double> GameTree::payoffs_at(int t) const { return payoffs_[t]; }

std::optional<NodeId> GameTree::find_node(const std::string& name) const {
  auto it = node_by_name_.find(name);
  if (it == node_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<InfosetId> GameTree::find_infoset(const std::string& name) const {
  auto it = infoset_by_name_.find(name);
  if (it == infoset_by_name_.end()) return std::nullopt;
  return it->second;
}

GameTreeBuilder::GameTreeBuilder(int num_roles) : num_roles_(num_roles) {
  if (num_roles < 1) throw std::invalid_argument("need at least one role");
}

NodeId GameTreeBuilder::add_decision(const std::string& name, Role owner,
                                     const std::string& infoset,
                                     const std::vector<std::string>& actions) {
  if (owner < 0 || owner >= num_roles_) throw std::invalid_argument("bad owner for node " + name);
  if (node_index_.count(name)) throw std::invalid_argument("duplicate node id '" + name + "'");
  int h;
  auto it = infoset_index_.find(infoset);
  if (it == infoset_index_.end()) {
    if (actions.empty())
      throw std::invalid_argument("infoset '" + infoset + "' needs an action list");
    std::set<std::string> uniq(actions.begin(), actions.end());
    if (uniq.size() != actions.size())
      throw std::invalid_argument("duplicate action label at infoset '" + infoset + "'");
    h = static_cast<int>(infosets_.size());
    infosets_.push_back({owner, infoset, actions});
    infoset_index_[infoset] = h;
  } else {
    h = it->second;
    if (infosets_[h].owner != owner)
      throw std::invalid_argument("infoset '" + infoset + "' owner mismatch");
    if (!actions.empty() && actions != infosets_[h].actions)
      throw std::invalid_argument("infoset '" + infoset + "' action list mismatch");
  }
  ProtoNode n;
  n.name = name;
  n.owner = owner;
  n.infoset = h;
  n.children.assign(infosets_[h].actions.size(), -1);
  nodes_.push_back(std::move(n));
  NodeId id = static_cast<NodeId>(nodes_.size()) - 1;
  node_index_[name] = id;
  return id;
}

NodeId GameTreeBuilder::add_terminal(const std::string& name, std::vector<double> payoffs) {
  if (node_index_.count(name)) throw std::invalid_argument("duplicate node id '" + name + "'");
  if (static_cast<int>(payoffs.size()) != num_roles_)
    throw std::invalid_argument("terminal '" + name + "' payoff vector length != role count");
  for (double u : payoffs)
    if (!std::isfinite(u)) throw std::invalid_argument("non-finite payoff at '" + name + "'");
  ProtoNode n;
  n.name = name;
  n.terminal = true;
  n.payoffs = std::move(payoffs);
  nodes_.push_back(std::move(n));
  NodeId id = static_cast<NodeId>(nodes_.size()) - 1;
  node_index_[name] = id;
  return id;
}

void GameTreeBuilder::add_edge(NodeId from, const std::string& action, NodeId to) {
  if (from < 0 || from >= static_cast<int>(nodes_.size()) || to < 0 ||
      to >= static_cast<int>(nodes_.size()))
    throw std::invalid_argument("edge endpoint out of range");
  ProtoNode& f = nodes_[from];
  if (f.terminal) throw std::invalid_argument("edge from terminal '" + f.name + "'");
  const ProtoInfoset& h = infosets_[f.infoset];
  auto it = std::find(h.actions.begin(), h.actions.end(), action);
  if (it == h.actions.end())
    throw std::invalid_argument("action '" + action + "' not available at '" + f.name + "'");
  int a = static_cast<int>(it - h.actions.begin());
  if (f.children[a] != -1) throw std::invalid_argument("duplicate edge at '" + f.name + "'");
  f.children[a] = to;
}

GameTree GameTreeBuilder::build() const {
  const int n = static_cast<int>(nodes_.size());
  if (n == 0) throw std::invalid_argument("empty tree");

  std::vector<int> parent(n, -1);
  for (int v = 0; v < n; ++v) {
    const ProtoNode& pn = nodes_[v];
    if (pn.terminal) continue;
    for (size_t a = 0; a < pn.children.size(); ++a) {
      NodeId c = pn.children[a];
      if (c == -1)
        throw std::invalid_argument("missing child for action '" +
                                    infosets_[pn.infoset].actions[a] + "' at '" + pn.name + "'");
      if (parent[c] != -1)
        throw std::invalid_argument("node '" + nodes_[c].name + "' has two parents");
      parent[c] = v;
    }
  }
  NodeId root = -1;
  for (int v = 0; v < n; ++v) {
    if (parent[v] == -1) {
      if (root != -1)
        throw std::invalid_argument("multiple roots: '" + nodes_[root].name + "' and '" +
                                    nodes_[v].name + "'");
      root = v;
    }
  }
  if (root == -1) throw std::invalid_argument("no root (cycle)");

  // Preorder traversal; unreached nodes mean a cycle or disconnected part.
  std::vector<NodeId> order;
  order.reserve(n);
  std::vector<NodeId> stack{root};
  std::vector<bool> seen(n, false);
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (seen[v]) throw std::invalid_argument("cycle through '" + nodes_[v].name + "'");
    seen[v] = true;
    order.push_back(v);
    const ProtoNode& pn = nodes_[v];
    if (!pn.terminal) {
      for (auto it = pn.children.rbegin(); it != pn.children.rend(); ++it) stack.push_back(*it);
    }
  }
  if (static_cast<int>(order.size()) != n)
    throw std::invalid_argument("disconnected nodes in tree");

  // Renumber infosets by first preorder appearance.
  std::vector<int> infoset_order(infosets_.size(), -1);
  int next_h = 0;
  for (NodeId v : order) {
    const ProtoNode& pn = nodes_[v];
    if (!pn.terminal && infoset_order[pn.infoset] == -1) infoset_order[pn.infoset] = next_h++;
  }
  if (next_h != static_cast<int>(infosets_.size()))
    throw std::invalid_argument("infoset declared but never used");

  GameTree t;
  t.num_roles_ = num_roles_;
  t.root_ = root;
  t.nodes_.resize(n);
  t.infosets_.resize(infosets_.size());
  t.role_infosets_.resize(num_roles_);
  for (size_t i = 0; i < infosets_.size(); ++i) {
    Infoset& out = t.infosets_[infoset_order[i]];
    out.owner = infosets_[i].owner;
    out.name = infosets_[i].name;
    out.actions = infosets_[i].actions;
    t.infoset_by_name_[out.name] = infoset_order[i];
  }
  for (int h = 0; h < next_h; ++h) t.role_infosets_[t.infosets_[h].owner].push_back(h);

  bool first_payoff = true;
  for (NodeId v : order) {  // preorder so member/terminal discovery order is canonical
    const ProtoNode& pn = nodes_[v];
    GameTree::Node& out = t.nodes_[v];
    out.name = pn.name;
    out.parent = parent[v];
    t.node_by_name_[pn.name] = v;
    if (pn.terminal) {
      out.terminal_index = static_cast<int>(t.terminals_.size());
      t.terminals_.push_back(v);
      t.payoffs_.push_back(pn.payoffs);
      for (double u : pn.payoffs) {
        if (first_payoff) {
          t.max_payoff_ = t.min_payoff_ = u;
          first_payoff = false;
        }
        t.max_payoff_ = std::max(t.max_payoff_, u);
        t.min_payoff_ = std::min(t.min_payoff_, u);
      }
    } else {
      out.infoset = infoset_order[pn.infoset];
      out.children = pn.children;
      t.infosets_[out.infoset].members.push_back(v);
    }
  }

  // Path pairs per terminal.
  t.path_pairs_.resize(t.terminals_.size());
  for (size_t ti = 0; ti < t.terminals_.size(); ++ti) {
    std::vector<std::pair<InfosetId, ActionIdx>> rev;
    NodeId v = t.terminals_[ti];
    while (t.nodes_[v].parent != -1) {
      NodeId p = t.nodes_[v].parent;
      const auto& ch = t.nodes_[p].children;
      ActionIdx a = static_cast<ActionIdx>(std::find(ch.begin(), ch.end(), v) - ch.begin());
      rev.emplace_back(t.nodes_[p].infoset, a);
      v = p;
    }
    t.path_pairs_[ti].assign(rev.rbegin(), rev.rend());
  }

  // Own-action histories; perfect recall requires them to agree across the
  // members of each infoset.
  t.own_history_.resize(t.infosets_.size());
  std::vector<bool> have(t.infosets_.size(), false);
  auto own_path_to = [&](NodeId v) {
    Role r = t.infosets_[t.nodes_[v].infoset].owner;
    std::vector<std::pair<InfosetId, ActionIdx>> rev;
    NodeId u = v;
    while (t.nodes_[u].parent != -1) {
      NodeId p = t.nodes_[u].parent;
      if (t.infosets_[t.nodes_[p].infoset].owner == r) {
        const auto& ch = t.nodes_[p].children;
        ActionIdx a = static_cast<ActionIdx>(std::find(ch.begin(), ch.end(), u) - ch.begin());
        rev.emplace_back(t.nodes_[p].infoset, a);
      }
      u = p;
    }
    return std::vector<std::pair<InfosetId, ActionIdx>>(rev.rbegin(), rev.rend());
  };
  for (int h = 0; h < static_cast<int>(t.infosets_.size()); ++h) {
    for (NodeId v : t.infosets_[h].members) {
      auto hist = own_path_to(v);
      if (!have[h]) {
        t.own_history_[h] = std::move(hist);
        have[h] = true;
      } else if (hist != t.own_history_[h]) {
        throw std::invalid_argument("perfect recall violated at infoset '" +
                                    t.infosets_[h].name + "'");
      }
    }
  }
  return t;
}

TerminalPartition::TerminalPartition(const GameTree& tree, Role role,
                                     std::vector<std::vector<int>> cells)
    : role_(role), cells_(std::move(cells)) {
  const int nt = tree.num_terminals();
  cell_of_.assign(nt, -1);
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c) {
    for (int ti : cells_[c]) {
      if (ti < 0 || ti >= nt) throw std::invalid_argument("partition cell references bad terminal");
      if (cell_of_[ti] != -1) throw std::invalid_argument("partition cells overlap");
      cell_of_[ti] = c;
    }
  }
  for (int ti = 0; ti < nt; ++ti)
    if (cell_of_[ti] == -1) throw std::invalid_argument("partition does not cover all terminals");

  revealed_.resize(cells_.size());
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c) {
    // Pairs present on every member path.
    const auto& first = tree.path_pairs(cells_[c][0]);
    std::vector<std::pair<InfosetId, ActionIdx>> common;
    for (auto pr : first) {
      bool everywhere = true;
      for (size_t k = 1; k < cells_[c].size() && everywhere; ++k) {
        const auto& pp = tree.path_pairs(cells_[c][k]);
        everywhere = std::find(pp.begin(), pp.end(), pr) != pp.end();
      }
      if (everywhere) common.push_back(pr);
    }
    std::sort(common.begin(), common.end());
    revealed_[c] = std::move(common);
  }
}

TerminalPartition TerminalPartition::discrete(const GameTree& tree, Role role) {
  std::vector<std::vector<int>> cells;
  cells.reserve(tree.num_terminals());
  for (int ti = 0; ti < tree.num_terminals(); ++ti) cells.push_back({ti});
  return TerminalPartition(tree, role, std::move(cells));
}

BehaviorStrategy BehaviorStrategy::pure(const GameTree& tree, const PureStrategy& s) {
  BehaviorStrategy b;
  b.role = s.role;
  const auto& hs = tree.role_infosets(s.role);
  b.mix.resize(hs.size());
  for (size_t k = 0; k < hs.size(); ++k) {
    b.mix[k].assign(tree.infoset_info(hs[k]).num_actions(), 0.0);
    b.mix[k][s.choice[k]] = 1.0;
  }
  return b;
}

BehaviorStrategy BehaviorStrategy::uniform(const GameTree& tree, Role role) {
  BehaviorStrategy b;
  b.role = role;
  const auto& hs = tree.role_infosets(role);
  b.mix.resize(hs.size());
  for (size_t k = 0; k < hs.size(); ++k) {
    int na = tree.infoset_info(hs[k]).num_actions();
    b.mix[k].assign(na, 1.0 / na);
  }
  return b;
}

void BehaviorStrategy::validate(const GameTree& tree) const {
  const auto& hs = tree.role_infosets(role);
  if (mix.size() != hs.size()) throw std::invalid_argument("behavior strategy infoset count");
  for (size_t k = 0; k < hs.size(); ++k) {
    if (static_cast<int>(mix[k].size()) != tree.infoset_info(hs[k]).num_actions())
      throw std::invalid_argument("behavior strategy action count at '" +
                                  tree.infoset_info(hs[k]).name + "'");
    double sum = 0.0;
    for (double p : mix[k]) {
      if (!(p >= 0.0)) throw std::invalid_argument("negative probability in behavior strategy");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("behavior mix at '" + tree.infoset_info(hs[k]).name +
                                  "' sums to " + std::to_string(sum));
  }
}

int num_pure_strategies(const GameTree& tree, Role role) {
  long long n = 1;
  for (InfosetId h : tree.role_infosets(role)) {
    n *= tree.infoset_info(h).num_actions();
    if (n > 1000000000LL) throw std::overflow_error("pure strategy count overflow");
  }
  return static_cast<int>(n);
}

std::vector<PureStrategy> enumerate_pure_strategies(const GameTree& tree, Role role) {
  const auto& hs = tree.role_infosets(role);
  std::vector<PureStrategy> out;
  out.reserve(num_pure_strategies(tree, role));
  PureStrategy cur;
  cur.role = role;
  cur.choice.assign(hs.size(), 0);
  while (true) {
    out.push_back(cur);
    int k = static_cast<int>(hs.size()) - 1;
    while (k >= 0) {
      if (++cur.choice[k] < tree.infoset_info(hs[k]).num_actions()) break;
      cur.choice[k] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

int pure_strategy_index(const GameTree& tree, const PureStrategy& s) {
  const auto& hs = tree.role_infosets(s.role);
  int idx = 0;
  for (size_t k = 0; k < hs.size(); ++k)
    idx = idx * tree.infoset_info(hs[k]).num_actions() + s.choice[k];
  return idx;
}

std::string pure_strategy_name(const GameTree& tree, const PureStrategy& s) {
  const auto& hs = tree.role_infosets(s.role);
  if (hs.empty()) return "-";
  std::string out;
  for (size_t k = 0; k < hs.size(); ++k) {
    if (k) out += "/";
    out += tree.infoset_info(hs[k]).actions[s.choice[k]];
  }
  return out;
}

NodeId outcome(const GameTree& tree, const std::vector<PureStrategy>& profile) {
  if (static_cast<int>(profile.size()) != tree.num_roles())
    throw std::invalid_argument("outcome() needs one strategy per role");
  std::vector<int> local(tree.num_infosets(), -1);
  for (Role r = 0; r < tree.num_roles(); ++r) {
    if (profile[r].role != r) throw std::invalid_argument("profile roles out of order");
    const auto& hs = tree.role_infosets(r);
    if (profile[r].choice.size() != hs.size())
      throw std::invalid_argument("pure strategy not total over infosets");
    for (size_t k = 0; k < hs.size(); ++k) local[hs[k]] = profile[r].choice[k];
  }
  NodeId v = tree.root();
  while (!tree.is_terminal(v)) v = tree.child(v, local[tree.infoset(v)]);
  return v;
}

namespace {
void terminal_walk(const GameTree& tree, const std::vector<BehaviorStrategy>& profile,
                   NodeId v, double p, std::vector<double>& out,
                   const std::vector<std::pair<Role, int>>& local_of_infoset) {
  if (p == 0.0) return;
  if (tree.is_terminal(v)) {
    out[tree.terminal_index(v)] += p;
    return;
  }
  auto [r, k] = local_of_infoset[tree.infoset(v)];
  const auto& mix = profile[r].mix[k];
  for (ActionIdx a = 0; a < static_cast<int>(mix.size()); ++a)
    terminal_walk(tree, profile, tree.child(v, a), p * mix[a], out, local_of_infoset);
}

std::vector<std::pair<Role, int>> local_index_table(const GameTree& tree) {
  std::vector<std::pair<Role, int>> t(tree.num_infosets());
  for (Role r = 0; r < tree.num_roles(); ++r) {
    const auto& hs = tree.role_infosets(r);
    for (int k = 0; k < static_cast<int>(hs.size()); ++k) t[hs[k]] = {r, k};
  }
  return t;
}
}  // namespace

std::vector<double> terminal_distribution(const GameTree& tree,
                                          const std::vector<BehaviorStrategy>& profile) {
  if (static_cast<int>(profile.size()) != tree.num_roles())
    throw std::invalid_argument("profile size != role count");
  for (Role r = 0; r < tree.num_roles(); ++r) profile[r].validate(tree);
  std::vector<double> out(tree.num_terminals(), 0.0);
  terminal_walk(tree, profile, tree.root(), 1.0, out, local_index_table(tree));
  return out;
}

std::vector<double> expected_payoff(const GameTree& tree,
                                    const std::vector<BehaviorStrategy>& profile) {
  std::vector<double> dist = terminal_distribution(tree, profile);
  std::vector<double> u(tree.num_roles(), 0.0);
  for (int ti = 0; ti < tree.num_terminals(); ++ti) {
    if (dist[ti] == 0.0) continue;
    auto pay = tree.payoffs_at(ti);
    for (Role r = 0; r < tree.num_roles(); ++r) u[r] += dist[ti] * pay[r];
  }
  return u;
}

int NormalFormGame::flat_index(std::span<const int> profile) const {
  int flat = 0;
  for (int r = 0; r < num_roles; ++r) flat = flat * dims[r] + profile[r];
  return flat;
}

double NormalFormGame::payoff(std::span<const int> profile, Role r) const {
  return payoff_table[flat_index(profile) * num_roles + r];
}

int NormalFormGame::num_profiles() const {
  int n = 1;
  for (int d : dims) n *= d;
  return n;
}

std::vector<int> NormalFormGame::unflatten(int flat) const {
  std::vector<int> p(num_roles);
  for (int r = num_roles - 1; r >= 0; --r) {
    p[r] = flat % dims[r];
    flat /= dims[r];
  }
  return p;
}

NormalFormGame derive_normal_form(const GameTree& tree, long long max_profiles) {
  NormalFormGame nf;
  nf.num_roles = tree.num_roles();
  long long profiles = 1;
  for (Role r = 0; r < tree.num_roles(); ++r) {
    nf.strategies.push_back(enumerate_pure_strategies(tree, r));
    nf.dims.push_back(static_cast<int>(nf.strategies.back().size()));
    std::vector<std::string> names;
    for (const auto& s : nf.strategies.back()) names.push_back(pure_strategy_name(tree, s));
    nf.strategy_names.push_back(std::move(names));
    profiles *= nf.dims.back();
    if (profiles > max_profiles)
      throw std::overflow_error("normal form exceeds profile cap (" +
                                std::to_string(max_profiles) + ")");
  }
  nf.payoff_table.assign(profiles * nf.num_roles, 0.0);
  std::vector<int> p(nf.num_roles, 0);
  std::vector<PureStrategy> prof;
  for (long long flat = 0; flat < profiles; ++flat) {
    prof.clear();
    for (Role r = 0; r < nf.num_roles; ++r) prof.push_back(nf.strategies[r][p[r]]);
    NodeId z = outcome(tree, prof);
    auto pay = tree.payoffs(z);
    for (Role r = 0; r < nf.num_roles; ++r) nf.payoff_table[flat * nf.num_roles + r] = pay[r];
    for (int r = nf.num_roles - 1; r >= 0; --r) {
      if (++p[r] < nf.dims[r]) break;
      p[r] = 0;
    }
  }
  return nf;
}

std::vector<std::vector<int>> p_equivalent_partition(
    const GameTree& tree, const std::vector<TerminalPartition>& partitions,
    const NormalFormGame& nf) {
  if (static_cast<int>(partitions.size()) != tree.num_roles())
    throw std::invalid_argument("need one partition per role");
  const int profiles = nf.num_profiles();
  // Reached terminal per profile.
  std::vector<int> reached(profiles);
  std::vector<PureStrategy> prof;
  for (int flat = 0; flat < profiles; ++flat) {
    auto p = nf.unflatten(flat);
    prof.clear();
    for (Role r = 0; r < nf.num_roles; ++r) prof.push_back(nf.strategies[r][p[r]]);
    reached[flat] = tree.terminal_index(outcome(tree, prof));
  }
  std::vector<std::vector<int>> out(tree.num_roles());
  for (Role r = 0; r < tree.num_roles(); ++r) {
    std::map<int, int> cell_renumber;  // source cell -> profile cell id by first occurrence
    out[r].resize(profiles);
    for (int flat = 0; flat < profiles; ++flat) {
      int c = partitions[r].cell_of(reached[flat]);
      auto [it, fresh] = cell_renumber.emplace(c, static_cast<int>(cell_renumber.size()));
      out[r][flat] = it->second;
    }
  }
  return out;
}

MixedStrategy behavior_to_mixed(const GameTree& tree, const BehaviorStrategy& b) {
  b.validate(tree);
  MixedStrategy m;
  m.role = b.role;
  auto pures = enumerate_pure_strategies(tree, b.role);
  m.dist.reserve(pures.size());
  for (const auto& s : pures) {
    double p = 1.0;
    for (size_t k = 0; k < s.choice.size(); ++k) p *= b.mix[k][s.choice[k]];
    m.dist.push_back(p);
  }
  return m;
}

BehaviorStrategy mixed_to_behavior(const GameTree& tree, const MixedStrategy& m,
                                   std::vector<InfosetId>* unreachable) {
  const auto& hs = tree.role_infosets(m.role);
  auto pures = enumerate_pure_strategies(tree, m.role);
  if (m.dist.size() != pures.size())
    throw std::invalid_argument("mixed strategy length != pure strategy count");
  BehaviorStrategy b;
  b.role = m.role;
  b.mix.resize(hs.size());
  std::vector<int> local_of(tree.num_infosets(), -1);
  for (int k = 0; k < static_cast<int>(hs.size()); ++k) local_of[hs[k]] = k;
  for (size_t k = 0; k < hs.size(); ++k) {
    InfosetId h = hs[k];
    const auto& hist = tree.own_history(h);
    int na = tree.infoset_info(h).num_actions();
    std::vector<double> num(na, 0.0);
    double den = 0.0;
    for (size_t si = 0; si < pures.size(); ++si) {
      bool allows = true;
      for (auto [h2, a2] : hist) {
        if (pures[si].choice[local_of[h2]] != a2) {
          allows = false;
          break;
        }
      }
      if (!allows) continue;
      den += m.dist[si];
      num[pures[si].choice[k]] += m.dist[si];
    }
    if (den <= 0.0) {
      b.mix[k].assign(na, 1.0 / na);
      if (unreachable) unreachable->push_back(h);
    } else {
      b.mix[k].resize(na);
      for (int a = 0; a < na; ++a) b.mix[k][a] = num[a] / den;
    }
  }
  return b;
}

Observation observation_cell(const GameTree& tree, const TerminalPartition& partition, NodeId z) {
  if (!tree.is_terminal(z)) throw std::invalid_argument("observation_cell needs a terminal node");
  Observation ob;
  ob.cell = partition.cell_of(tree.terminal_index(z));
  ob.revealed = partition.revealed(ob.cell);
  return ob;
}

}  // namespace poplearn
