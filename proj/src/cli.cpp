#include "ndviz/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "ndviz/diagram.hpp"
#include "ndviz/frames.hpp"
#include "ndviz/invariant.hpp"
#include "ndviz/machine_json.hpp"
#include "ndviz/session.hpp"

namespace ndviz {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Args {
  std::string machine_path;
  std::optional<std::string> word;
  std::size_t max_steps = 100;
  bool add_dead = false;
  std::string dump_frames;
  std::string dump_forest;
  bool no_invariants = false;
  std::string format = "dot";
  std::optional<std::size_t> frame;
  std::string output;
  std::string state;
  std::string expr;
  std::string kind;
  std::string ci;
  std::optional<std::string> stack;
  int port = 7421;
  std::string host = "127.0.0.1";
  std::string static_dir;
  std::size_t max_sessions = 256;
};

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::Accept: return exit_code::kAccept;
    case Verdict::Reject: return exit_code::kReject;
    case Verdict::CutoffLimit: return exit_code::kCutoff;
  }
  return exit_code::kSoftware;
}

Machine load_valid(const std::string& path) {
  Machine m = load_machine(path);
  const ValidationReport report = validate(m);
  if (!report.ok()) throw DataError(path + ": invalid machine\n" + report.to_string());
  return m;
}

Word word_of(const Args& a) {
  if (!a.word) throw UsageError("--word is required");
  try {
    return parse_word(*a.word);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--word: ") + e.what());
  }
}

ExploreOptions options_of(const Args& a) {
  ExploreOptions o;
  o.max_steps = a.max_steps;
  o.add_dead = a.add_dead;
  return o;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

void emit(const Args& a, std::ostream& out, const std::string& text) {
  if (a.output.empty())
    out << text;
  else
    write_file(a.output, text);
}

int cmd_apply(const Args& a, std::ostream& out) {
  const Machine m = load_valid(a.machine_path);
  const Verdict v = apply(m, word_of(a), options_of(a));
  std::string text(to_string(v));
  for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  out << text << "\n";
  return verdict_code(v);
}

int cmd_trace(const Args& a, std::ostream& out) {
  const Machine m = load_valid(a.machine_path);
  const ComputationForest forest = explore(m, word_of(a), options_of(a));
  if (!a.dump_forest.empty()) write_file(a.dump_forest, canonical_dump(forest_to_json(forest)) + "\n");
  out << format_trace(trace(forest)) << "\n";
  return verdict_code(forest.verdict());
}

int cmd_viz(const Args& a, std::ostream& out) {
  const Machine m = load_valid(a.machine_path);
  const Visualization v = visualize(m, word_of(a), options_of(a), !a.no_invariants);
  const std::string frames = canonical_dump(frames_to_json(v.frames)) + "\n";
  if (!a.dump_forest.empty()) write_file(a.dump_forest, canonical_dump(forest_to_json(v.forest)) + "\n");
  if (a.dump_frames.empty()) {
    out << frames;
  } else {
    write_file(a.dump_frames, frames);
    out << v.frames.size() << " frames, verdict " << to_string(v.forest.verdict()) << "\n";
  }
  return exit_code::kAccept;
}

int cmd_graph(const Args& a, std::ostream& out) {
  if (a.format != "dot" && a.format != "svg") throw UsageError("--format must be dot or svg");
  Machine m = load_valid(a.machine_path);
  std::string dot;
  if (a.word) {
    const Visualization v = visualize(m, word_of(a), options_of(a), !a.no_invariants);
    const std::size_t n = a.frame.value_or(v.frames.size() - 1);
    if (n >= v.frames.size())
      throw UsageError("--frame " + std::to_string(n) + " out of range (" + std::to_string(v.frames.size()) +
                       " frames)");
    dot = emit_dot({v.forest.machine(), &v.frames[n]});
  } else {
    if (a.frame) throw UsageError("--frame needs --word");
    if (a.add_dead) m = add_dead_state(m);
    dot = emit_dot({m, nullptr});
  }
  emit(a, out, a.format == "dot" ? dot : render_svg(dot));
  return exit_code::kAccept;
}

int cmd_inv_check(const Args& a, std::ostream& out) {
  std::string source = a.expr;
  MachineKind kind = MachineKind::Nfa;
  if (!a.machine_path.empty()) {
    if (!a.expr.empty()) throw UsageError("give either a machine with --state or --expr, not both");
    if (a.state.empty()) throw UsageError("--state is required with a machine");
    const Machine m = load_valid(a.machine_path);
    kind = m.kind();
    auto it = m.invariants().find(a.state);
    if (it == m.invariants().end()) throw UsageError("state '" + a.state + "' has no invariant");
    source = it->second;
  } else {
    if (a.expr.empty()) throw UsageError("give a machine with --state, or --expr");
    if (a.kind == "pda")
      kind = MachineKind::Pda;
    else if (a.kind.empty() || a.kind == "ndfa")
      kind = MachineKind::Nfa;
    else
      throw UsageError("--kind must be ndfa or pda");
  }
  if (kind == MachineKind::Nfa && a.stack) throw UsageError("--stack applies to PDA invariants only");

  Word ci, stack;
  try {
    ci = parse_word(a.ci);
    if (a.stack) stack = parse_word(*a.stack);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const InvariantProgram prog = InvariantProgram::parse(source, kind);
  const bool holds = kind == MachineKind::Pda ? prog.eval(ci, std::span<const Symbol>(stack)) : prog.eval(ci);
  out << (holds ? "true" : "false") << "\n";
  return holds ? 0 : 1;
}

int cmd_serve(const Args& a, std::ostream& out) {
  ServiceLimits limits;
  limits.max_sessions = a.max_sessions;
  SessionService service(limits);
  HttpOptions http;
  if (!a.static_dir.empty()) http.static_dir = a.static_dir;
  out << "ndviz listening on http://" << a.host << ":" << a.port << "/" << std::endl;
  if (!serve(service, a.host, a.port, http)) throw std::runtime_error("cannot listen on port " + std::to_string(a.port));
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explore and visualize nondeterministic finite and pushdown automata", "ndviz"};
  app.require_subcommand(1);
  Args a;

  auto machine_opts = [&a](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("machine", a.machine_path, "machine JSON file");
    if (required) opt->required();
  };
  auto run_opts = [&a](CLI::App* sub) {
    sub->add_option("--word,-w", a.word, "comma-separated symbols; \"\" is the empty word");
    sub->add_option("--max-steps", a.max_steps, "transition bound per PDA computation")
        ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
    sub->add_flag("--add-dead", a.add_dead, "augment with a dead state first");
  };

  auto* apply_cmd = app.add_subcommand("apply", "print accept, reject or cutoff-limit");
  machine_opts(apply_cmd, true);
  run_opts(apply_cmd);

  auto* trace_cmd = app.add_subcommand("trace", "print the configurations of the tracked computation");
  machine_opts(trace_cmd, true);
  run_opts(trace_cmd);
  trace_cmd->add_option("--dump-forest", a.dump_forest, "write the computation forest JSON here");

  auto* viz_cmd = app.add_subcommand("viz", "compute the visualization frames");
  machine_opts(viz_cmd, true);
  run_opts(viz_cmd);
  viz_cmd->add_option("--dump-frames", a.dump_frames, "write frame JSON here instead of stdout");
  viz_cmd->add_option("--dump-forest", a.dump_forest, "write the computation forest JSON here");
  viz_cmd->add_flag("--no-invariants", a.no_invariants, "skip invariant decorations");

  auto* graph_cmd = app.add_subcommand("graph", "emit the transition diagram");
  machine_opts(graph_cmd, true);
  run_opts(graph_cmd);
  graph_cmd->add_option("--format", a.format, "dot or svg")->check(CLI::IsMember({"dot", "svg"}));
  graph_cmd->add_option("--frame", a.frame, "decorate with this frame (needs --word; default: last)");
  graph_cmd->add_option("--output,-o", a.output, "write here instead of stdout");
  graph_cmd->add_flag("--no-invariants", a.no_invariants, "skip invariant decorations");

  auto* inv_cmd = app.add_subcommand("inv-check", "evaluate a state invariant");
  machine_opts(inv_cmd, false);
  inv_cmd->add_option("--state", a.state, "state whose invariant to evaluate");
  inv_cmd->add_option("--expr", a.expr, "predicate source, instead of a machine");
  inv_cmd->add_option("--kind", a.kind, "ndfa or pda, with --expr");
  inv_cmd->add_option("--ci", a.ci, "consumed input, comma-separated");
  inv_cmd->add_option("--stack", a.stack, "stack, top first, comma-separated");

  auto* serve_cmd = app.add_subcommand("serve", "start the session service");
  serve_cmd->add_option("--port", a.port, "TCP port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", a.host, "bind address");
  serve_cmd->add_option("--static", a.static_dir, "UI assets served at /")->check(CLI::ExistingDirectory);
  serve_cmd->add_option("--max-sessions", a.max_sessions, "LRU capacity")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1'000'000}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "ndviz: " << e.what() << "\n";
    return exit_code::kUsage;
  }

  try {
    if (apply_cmd->parsed()) return cmd_apply(a, out);
    if (trace_cmd->parsed()) return cmd_trace(a, out);
    if (viz_cmd->parsed()) return cmd_viz(a, out);
    if (graph_cmd->parsed()) return cmd_graph(a, out);
    if (inv_cmd->parsed()) return cmd_inv_check(a, out);
    if (serve_cmd->parsed()) return cmd_serve(a, out);
  } catch (const UsageError& e) {
    err << "ndviz: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const InputError& e) {
    err << "ndviz: word: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const MachineFileError& e) {
    err << "ndviz: " << e.what() << "\n";
    return exit_code::kNoInput;
  } catch (const MachineFormatError& e) {
    err << "ndviz: " << a.machine_path << ": malformed machine: " << e.what() << "\n";
    return exit_code::kDataError;
  } catch (const DataError& e) {
    err << "ndviz: " << e.what() << "\n";
    return exit_code::kDataError;
  } catch (const InvariantError& e) {
    err << "ndviz: invariant: " << e.what() << "\n";
    return exit_code::kDataError;
  } catch (const std::exception& e) {
    err << "ndviz: " << e.what() << "\n";
    return exit_code::kSoftware;
  }
  return exit_code::kUsage;
}

}  // namespace ndviz
