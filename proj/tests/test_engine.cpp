#include <doctest.h>

#include <functional>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "ndviz/engine.hpp"
#include "oracles.hpp"

using namespace ndviz;

namespace {

bool same_forest(const ComputationForest& a, const ComputationForest& b) {
  if (a.nodes().size() != b.nodes().size()) return false;
  for (std::size_t i = 0; i < a.nodes().size(); ++i) {
    const ComputationNode& x = a.nodes()[i];
    const ComputationNode& y = b.nodes()[i];
    if (x.id != y.id || x.parent != y.parent || x.via_rule != y.via_rule || x.depth != y.depth ||
        x.consumed != y.consumed || x.status != y.status || x.state != y.state || x.stack != y.stack ||
        x.children != y.children)
      return false;
  }
  return a.accepting_leaves() == b.accepting_leaves() && a.verdict() == b.verdict() &&
         a.cutoff_count() == b.cutoff_count();
}

}  // namespace

TEST_CASE("golden NFA verdicts") {
  const Machine m = fixtures::load("abU.json");
  CHECK(apply(m, {"b", "a", "b", "a", "a"}) == Verdict::Reject);
  CHECK(apply(m, {"a", "a", "a"}) == Verdict::Reject);
  CHECK(apply(m, {}) == Verdict::Accept);
  CHECK(apply(m, {"a", "b", "b", "b"}) == Verdict::Accept);
  CHECK(apply(m, {"a", "b", "a", "b", "b", "b"}) == Verdict::Accept);
}

TEST_CASE("golden PDA verdicts") {
  const Machine p = fixtures::load("p.json");
  CHECK(apply(p, {}) == Verdict::Accept);
  CHECK(apply(p, {"a", "b", "b"}) == Verdict::Reject);
  CHECK(apply(p, {"a"}) == Verdict::Reject);
  CHECK(apply(p, {"b", "a", "b"}) == Verdict::Reject);
  CHECK(apply(p, {"b", "a", "a", "b"}) == Verdict::Accept);
  CHECK(apply(p, {"a", "b", "b", "a", "a", "b"}) == Verdict::Accept);
}

TEST_CASE("string-level semantics on P") {
  const Machine p = fixtures::load("p.json");
  const Configuration c0{"S", {"a", "b"}, {}};
  CHECK(applicable_rules(p, c0) == std::vector<std::size_t>{0});
  const Configuration c1 = step(p, c0, 0);
  CHECK(c1 == Configuration{"S", {"b"}, {"b"}});
  CHECK(applicable_rules(p, c1) == std::vector<std::size_t>{2, 3});
  CHECK(step(p, c1, 2) == Configuration{"S", {}, {}});
  CHECK(step(p, c1, 3) == Configuration{"S", {}, {"a", "b"}});
  CHECK(is_accepting(p, Configuration{"S", {}, {}}));
  CHECK_FALSE(is_accepting(p, Configuration{"S", {}, {"a"}}));
  CHECK_FALSE(is_accepting(p, Configuration{"S", {"a"}, {}}));
}

TEST_CASE("multi-symbol pop and push are top first") {
  MachineParts parts{MachineKind::Pda, {"S", "T"}, {"a"}, {"X", "Y"}, "S", {"T"},
                     {{"S", "a", {}, "S", {"X", "Y"}, false}, {"S", std::nullopt, {"X", "Y"}, "T", {}, false}},
                     {}};
  const Machine m(parts);
  const Configuration c = step(m, Configuration{"S", {"a"}, {"Y"}}, 0);
  CHECK(c.stack == Word{"X", "Y", "Y"});
  CHECK(applicable_rules(m, c) == std::vector<std::size_t>{1});
  CHECK(step(m, c, 1).stack == Word{"Y"});
  CHECK(applicable_rules(m, Configuration{"S", {}, {"Y", "X"}}).empty());
}

TEST_CASE("words outside the alphabet are rejected up front") {
  const Machine m = fixtures::load("abU.json");
  CHECK_THROWS_AS(explore(m, {"a", "z"}), InputError);
  CHECK_THROWS_AS(explore_serial(m, {"EMP"}), InputError);
}

TEST_CASE("node cap raises LimitError") {
  const Machine g = fixtures::load("grow.json");
  ExploreOptions o;
  o.max_steps = 1000;
  o.max_nodes = 50;
  CHECK_THROWS_AS(explore(g, {}, o), LimitError);
  CHECK_THROWS_AS(explore_serial(g, {}, o), LimitError);
  o.max_nodes = 2000;
  CHECK_NOTHROW(explore(g, {}, o));
}

TEST_CASE("invalid machines are refused") {
  MachineParts parts{MachineKind::Nfa, {"S"}, {"a"}, {}, "Q", {}, {}, {}};
  CHECK_THROWS_AS(explore(Machine(parts), {}), std::invalid_argument);
}

TEST_CASE("growing stack PDA is cut off") {
  const Machine g = fixtures::load("grow.json");
  ExploreOptions o;
  o.max_steps = 10;
  const ComputationForest f = explore(g, {}, o);
  CHECK(f.verdict() == Verdict::CutoffLimit);
  CHECK(f.cutoff_count() == 1);
  CHECK(f.nodes().size() == 11);
  const ComputationNode& last = f.nodes().back();
  CHECK(last.status == NodeStatus::Cutoff);
  CHECK(last.depth == 10);
  CHECK(f.stack(last.id).size() == 10);
  CHECK(apply(g, {}, o) == Verdict::CutoffLimit);
}

TEST_CASE("NFAs ignore max_steps and terminate on epsilon cycles") {
  MachineParts parts{MachineKind::Nfa, {"S", "A", "B"}, {"a"}, {}, "S", {"B"},
                     {{"S", std::nullopt, {}, "A", {}, false},
                      {"A", std::nullopt, {}, "S", {}, false},
                      {"A", "a", {}, "A", {}, false},
                      {"A", std::nullopt, {}, "B", {}, false}},
                     {}};
  ExploreOptions o;
  o.max_steps = 1;
  const ComputationForest f = explore(Machine(parts), {"a", "a", "a"}, o);
  CHECK(f.verdict() == Verdict::Accept);
  CHECK(f.cutoff_count() == 0);
  std::size_t pruned = 0;
  for (const auto& n : f.nodes()) pruned += n.status == NodeStatus::Pruned;
  CHECK(pruned > 0);
}

TEST_CASE("trace output") {
  const Machine m = fixtures::load("abU.json");
  const TraceResult t = trace(m, {"a", "b"});
  CHECK(format_trace(t) == "(((a b) S) ((a b) D) ((b) E) (() E) accept)");

  // oracle: shortest accepting path, lexicographic tie-break
  const auto path = oracle::bfs_first_accepting_path(m, {"a", "b"}, 8);
  REQUIRE(path);
  CHECK(t.path.size() == path->size() + 1);
  CHECK(t.path.back().state == "E");

  const Machine p = fixtures::load("p.json");
  CHECK(format_trace(trace(p, {"b", "a"})) == "(((b a) S ()) ((a) S (a)) (() S ()) accept)");
  CHECK(format_trace(trace(p, {"a", "b", "b"})) ==
        "reject\naccepting computations: 0\ncut off computations: 0\nexplored configurations: 6");

  const Machine g = fixtures::load("grow.json");
  ExploreOptions o;
  o.max_steps = 3;
  CHECK(format_trace(trace(g, {}, o)).rfind("cutoff-limit\n", 0) == 0);
}

TEST_CASE("tracked leaf is the BFS-first accepting path on random machines") {
  std::mt19937 rng(21);
  for (int i = 0; i < 200; ++i) {
    const Machine m = oracle::random_nfa(rng, 4, 2, 8);
    for (const Word& w : oracle::all_words(m.sigma(), 3)) {
      const ComputationForest f = explore(m, w);
      const auto expect = oracle::bfs_first_accepting_path(m, w, 3 * (w.size() + 1) * m.states().size());
      REQUIRE(f.tracked().has_value() == expect.has_value());
      if (!expect) continue;
      std::vector<std::size_t> got;
      for (NodeId id : f.path_to(*f.tracked()))
        if (f.node(id).via_rule) got.push_back(*f.node(id).via_rule);
      CHECK(got == *expect);
    }
  }
}

TEST_CASE("NFA verdicts match subset construction") {
  std::mt19937 rng(1);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const Machine m = oracle::random_nfa(rng);
    oracle::SubsetDfa dfa(m);
    for (const Word& w : oracle::all_words(m.sigma(), 6)) {
      const bool want = dfa.accepts(w);
      if ((apply(m, w) == Verdict::Accept) != want) ++mismatches;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("PDA verdicts match the depth-bounded enumerator") {
  std::mt19937 rng(2);
  ExploreOptions o;
  o.max_steps = 12;
  std::size_t mismatches = 0;
  std::map<Verdict, int> seen;
  for (int i = 0; i < 100; ++i) {
    const Machine m = oracle::random_pda(rng);
    for (const Word& w : oracle::all_words(m.sigma(), 4)) {
      const Verdict got = apply(m, w, o);
      ++seen[got];
      if (got != oracle::pda_verdict(m, w, o.max_steps)) ++mismatches;
    }
  }
  CHECK(mismatches == 0);
  // the generator exercises every outcome
  CHECK(seen[Verdict::Accept] > 0);
  CHECK(seen[Verdict::Reject] > 0);
  CHECK(seen[Verdict::CutoffLimit] > 0);
}

TEST_CASE("pruning never loses an accepting computation") {
  std::mt19937 rng(4);
  ExploreOptions o;
  o.max_steps = 6;
  for (int i = 0; i < 150; ++i) {
    const Machine m = oracle::random_pda(rng, 3, 6, 2);
    for (const Word& w : oracle::all_words(m.sigma(), 3))
      CHECK((apply(m, w, o) == Verdict::Accept) == oracle::naive_accepts(m, w, o.max_steps));
  }
}

TEST_CASE("parallel exploration equals the serial reference") {
  std::mt19937 rng(9);
  for (int i = 0; i < 200; ++i) {
    const Machine m = i % 2 ? oracle::random_pda(rng, 3, 8, 2) : oracle::random_nfa(rng);
    ExploreOptions o;
    o.max_steps = 9;
    for (const Word& w : oracle::all_words(m.sigma(), 3)) CHECK(same_forest(explore(m, w, o), explore_serial(m, w, o)));
  }
  // a forest wide enough to take the threaded path
  const Machine p = fixtures::load("p.json");
  ExploreOptions o;
  o.add_dead = true;
  const Word w{"a", "a", "b", "a", "b", "b", "a", "b", "a", "a", "b", "b", "a", "b"};
  const ComputationForest f = explore(p, w, o);
  CHECK(f.nodes().size() > 256);
  CHECK(same_forest(f, explore_serial(p, w, o)));
}

TEST_CASE("every forest edge replays as a machine step") {
  std::mt19937 rng(13);
  std::vector<std::pair<Machine, Word>> cases{{fixtures::load("abU.json"), {"a", "b", "b", "b", "b"}},
                                              {fixtures::load("p.json"), {"a", "b", "b", "a"}}};
  for (int i = 0; i < 60; ++i) cases.emplace_back(oracle::random_pda(rng), Word{"a", "b", "a"});
  ExploreOptions o;
  o.max_steps = 8;
  for (const auto& [m, w] : cases) {
    const ComputationForest f = explore(m, w, o);
    const Machine& fm = f.machine();
    CHECK(f.configuration(0) == Configuration{fm.start(), w, {}});
    std::set<std::tuple<std::uint32_t, std::size_t, std::vector<std::uint32_t>>> live;
    for (const ComputationNode& n : f.nodes()) {
      if (n.status == NodeStatus::Pruned) {
        CHECK(n.children.empty());
      } else {
        CHECK(live.emplace(n.state, n.consumed, n.stack).second);
      }
      if (!n.parent) continue;
      const ComputationNode& parent = f.node(*n.parent);
      CHECK(n.depth == parent.depth + 1);
      CHECK(step(fm, f.configuration(parent.id), *n.via_rule) == f.configuration(n.id));
      CHECK(n.consumed == w.size() - f.configuration(n.id).unconsumed.size());
    }
    for (NodeId leaf : f.accepting_leaves()) CHECK(is_accepting(fm, f.configuration(leaf)));
  }
}

TEST_CASE("PDA accepting leaves are bounded by the final states") {
  // dedup makes (final, all consumed, empty stack) unique per final state
  const Machine p = fixtures::load("p.json");
  CHECK(explore(p, {"a", "b", "b", "a"}).accepting_leaves().size() == 1);
  const Machine bi = fixtures::load("bicolor.json");
  CHECK(explore(bi, {"a"}).accepting_leaves().size() == 2);
}

TEST_CASE("dead state lets every NFA computation finish the word") {
  const Machine m = fixtures::load("abU.json");
  ExploreOptions o;
  o.add_dead = true;
  const ComputationForest f = explore(m, {"b", "a", "b", "a", "a"}, o);
  CHECK(f.machine().augmented());
  CHECK(f.verdict() == Verdict::Reject);
  bool reached_end = false;
  for (const auto& n : f.nodes()) reached_end = reached_end || (n.consumed == 5 && n.status != NodeStatus::Pruned);
  CHECK(reached_end);
}

TEST_CASE("forest JSON") {
  const Machine p = fixtures::load("p.json");
  const auto j = forest_to_json(explore(p, {"a", "b"}));
  CHECK(j["verdict"] == "ACCEPT");
  CHECK(j["word"] == nlohmann::json::array({"a", "b"}));
  CHECK(j["nodes"][0]["parent"].is_null());
  CHECK(j["nodes"][0]["config"]["state"] == "S");
  CHECK(j["nodes"][1]["rule"] == 0);
  CHECK(j["nodes"][1]["config"]["stack"] == nlohmann::json::array({"b"}));
  CHECK(j["tracked"].is_number());
}

TEST_CASE("enum names") {
  CHECK(to_string(Verdict::CutoffLimit) == "CUTOFF-LIMIT");
  CHECK(to_string(NodeStatus::AcceptLeaf) == "ACCEPT-LEAF");
  CHECK(to_string(NodeStatus::Pruned) == "PRUNED");
}
