#include "poplearn/game_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace poplearn {

using nlohmann::json;

namespace {

[[noreturn]] void io_fail(const std::string& where, const std::string& msg) {
  throw std::runtime_error(where + ": " + msg);
}

void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where, const std::string& what) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) io_fail(where, "unknown key '" + it.key() + "' in " + what);
  }
}

}  // namespace

RawGame parse_game_json(const std::string& text, const std::string& where) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    io_fail(where, std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object()) io_fail(where, "top level must be an object");
  require_keys(j, {"players", "nodes", "partitions"}, where, "game");
  RawGame raw;
  if (!j.contains("players") || !j["players"].is_number_integer())
    io_fail(where, "'players' must be an integer");
  raw.players = j["players"].get<int>();
  if (!j.contains("nodes") || !j["nodes"].is_array()) io_fail(where, "'nodes' must be an array");
  for (const json& nj : j["nodes"]) {
    if (!nj.is_object()) io_fail(where, "node entries must be objects");
    RawNode n;
    if (!nj.contains("id") || !nj["id"].is_string()) io_fail(where, "node without string 'id'");
    n.id = nj["id"].get<std::string>();
    if (nj.contains("terminal")) {
      require_keys(nj, {"id", "terminal", "payoffs"}, where, "terminal node '" + n.id + "'");
      if (!nj["terminal"].is_boolean() || !nj["terminal"].get<bool>())
        io_fail(where, "'terminal' must be true when present (node '" + n.id + "')");
      n.terminal = true;
      if (!nj.contains("payoffs") || !nj["payoffs"].is_array())
        io_fail(where, "terminal '" + n.id + "' needs a 'payoffs' array");
      for (const json& p : nj["payoffs"]) {
        if (!p.is_number()) io_fail(where, "non-numeric payoff at terminal '" + n.id + "'");
        n.payoffs.push_back(p.get<double>());
      }
    } else {
      require_keys(nj, {"id", "owner", "infoset", "edges"}, where, "node '" + n.id + "'");
      if (!nj.contains("owner") || !nj["owner"].is_number_integer())
        io_fail(where, "node '" + n.id + "' needs an integer 'owner'");
      n.owner = nj["owner"].get<int>();
      if (!nj.contains("infoset") || !nj["infoset"].is_string())
        io_fail(where, "node '" + n.id + "' needs a string 'infoset'");
      n.infoset = nj["infoset"].get<std::string>();
      if (!nj.contains("edges") || !nj["edges"].is_array())
        io_fail(where, "node '" + n.id + "' needs an 'edges' array");
      for (const json& ej : nj["edges"]) {
        if (!ej.is_object()) io_fail(where, "edge entries must be objects (node '" + n.id + "')");
        require_keys(ej, {"action", "child"}, where, "edge of node '" + n.id + "'");
        if (!ej.contains("action") || !ej["action"].is_string() || !ej.contains("child") ||
            !ej["child"].is_string())
          io_fail(where, "edge of node '" + n.id + "' needs string 'action' and 'child'");
        n.edges.emplace_back(ej["action"].get<std::string>(), ej["child"].get<std::string>());
      }
    }
    raw.nodes.push_back(std::move(n));
  }
  if (j.contains("partitions")) {
    if (!j["partitions"].is_array()) io_fail(where, "'partitions' must be an array");
    for (const json& pj : j["partitions"]) {
      require_keys(pj, {"role", "cells"}, where, "partition");
      RawPartition rp;
      if (!pj.contains("role") || !pj["role"].is_number_integer())
        io_fail(where, "partition needs an integer 'role'");
      rp.role = pj["role"].get<int>();
      if (!pj.contains("cells") || !pj["cells"].is_array())
        io_fail(where, "partition needs a 'cells' array");
      for (const json& cj : pj["cells"]) {
        if (!cj.is_array()) io_fail(where, "partition cells must be arrays of terminal ids");
        std::vector<std::string> cell;
        for (const json& t : cj) {
          if (!t.is_string()) io_fail(where, "terminal ids must be strings");
          cell.push_back(t.get<std::string>());
        }
        rp.cells.push_back(std::move(cell));
      }
      raw.partitions.push_back(std::move(rp));
    }
  }
  return raw;
}

std::string game_to_json(const RawGame& raw) {
  json j;
  j["players"] = raw.players;
  j["nodes"] = json::array();
  for (const RawNode& n : raw.nodes) {
    json nj;
    nj["id"] = n.id;
    if (n.terminal) {
      nj["terminal"] = true;
      nj["payoffs"] = n.payoffs;
    } else {
      nj["owner"] = n.owner;
      nj["infoset"] = n.infoset;
      nj["edges"] = json::array();
      for (const auto& [action, child] : n.edges)
        nj["edges"].push_back(json{{"action", action}, {"child", child}});
    }
    j["nodes"].push_back(std::move(nj));
  }
  j["partitions"] = json::array();
  for (const RawPartition& rp : raw.partitions) {
    json pj;
    pj["role"] = rp.role;
    pj["cells"] = rp.cells;
    j["partitions"].push_back(std::move(pj));
  }
  return j.dump(2) + "\n";
}

std::string game_to_json(const GameTree& tree, const std::vector<TerminalPartition>& partitions) {
  return game_to_json(to_raw(tree, partitions));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << content;
}

LoadedGame load_game(const std::string& path) {
  RawGame raw = parse_game_json(read_file(path), path);
  ValidationReport rep = validate_game(raw);
  if (!rep.ok()) throw std::runtime_error(path + ": invalid game:\n" + rep.to_string());
  return realize(raw);
}

void save_game(const std::string& path, const GameTree& tree,
               const std::vector<TerminalPartition>& partitions) {
  write_file(path, game_to_json(tree, partitions));
}

DirichletPrior parse_prior_json(const std::string& text, const GameTree& tree,
                                const std::string& where) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    io_fail(where, std::string("JSON parse error: ") + e.what());
  }
  return [&](const json& pj) {
    require_keys(pj, {"role", "weights"}, where, "prior");
    DirichletPrior prior;
    if (!pj.contains("role") || !pj["role"].is_number_integer())
      io_fail(where, "prior needs an integer 'role'");
    prior.role = pj["role"].get<int>() - 1;
    if (prior.role < 0 || prior.role >= tree.num_roles()) io_fail(where, "prior role out of range");
    if (!pj.contains("weights") || !pj["weights"].is_object())
      io_fail(where, "prior needs a 'weights' object");
    for (auto it = pj["weights"].begin(); it != pj["weights"].end(); ++it) {
      auto h = tree.find_infoset(it.key());
      if (!h) io_fail(where, "prior references unknown infoset '" + it.key() + "'");
      const Infoset& info = tree.infoset_info(*h);
      if (!it.value().is_object()) io_fail(where, "weights for '" + it.key() + "' must be an object");
      std::vector<double> w(info.num_actions(), 0.0);
      std::vector<bool> set(info.num_actions(), false);
      for (auto wit = it.value().begin(); wit != it.value().end(); ++wit) {
        ActionIdx a;
        try {
          a = info.action_index(wit.key());
        } catch (const std::exception&) {
          io_fail(where, "prior references unknown action '" + wit.key() + "' at '" + it.key() +
                             "'");
        }
        if (!wit.value().is_number()) io_fail(where, "weights must be numeric");
        w[a] = wit.value().get<double>();
        set[a] = true;
      }
      for (int a = 0; a < info.num_actions(); ++a)
        if (!set[a])
          io_fail(where, "prior missing weight for action '" + info.actions[a] + "' at '" +
                             it.key() + "'");
      prior.weights[*h] = std::move(w);
    }
    prior.validate(tree);
    return prior;
  }(j);
}

std::string prior_to_json(const GameTree& tree, const DirichletPrior& prior) {
  json j;
  j["role"] = prior.role + 1;
  json w = json::object();
  for (const auto& [h, weights] : prior.weights) {
    const Infoset& info = tree.infoset_info(h);
    json iw = json::object();
    for (int a = 0; a < info.num_actions(); ++a) iw[info.actions[a]] = weights[a];
    w[info.name] = std::move(iw);
  }
  j["weights"] = std::move(w);
  return j.dump(2) + "\n";
}

DirichletPrior load_prior(const std::string& path, const GameTree& tree) {
  return parse_prior_json(read_file(path), tree, path);
}

std::vector<DirichletPrior> load_priors(const std::string& path, const GameTree& tree) {
  std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": JSON parse error: " + e.what());
  }
  std::vector<DirichletPrior> priors;
  if (j.is_array()) {
    for (const json& pj : j) priors.push_back(parse_prior_json(pj.dump(), tree, path));
  } else {
    priors.push_back(parse_prior_json(text, tree, path));
  }
  if (static_cast<int>(priors.size()) != tree.num_roles())
    throw std::runtime_error(path + ": need one prior per role");
  std::sort(priors.begin(), priors.end(),
            [](const DirichletPrior& a, const DirichletPrior& b) { return a.role < b.role; });
  for (Role r = 0; r < tree.num_roles(); ++r)
    if (priors[r].role != r) throw std::runtime_error(path + ": priors must cover every role");
  return priors;
}

}  // namespace poplearn
