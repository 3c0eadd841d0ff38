#include "ndviz/session.hpp"

#include <charconv>
#include <cstdio>

#include "ndviz/machine_json.hpp"

namespace ndviz {

using nlohmann::json;

std::string etag_of(std::string_view body) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : body) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "\"%016llx\"", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Response json_response(int status, const json& body) { return Response{status, body.dump(), "application/json", {}}; }

Response error(int status, const std::string& message, json extra = json::object()) {
  extra["error"] = message;
  return json_response(status, extra);
}

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

Word word_from_json(const json& w) {
  if (w.is_null()) return {};
  if (w.is_string()) return parse_word(w.get<std::string>());
  if (!w.is_array()) throw std::invalid_argument("word must be an array of symbols or a comma-separated string");
  Word out;
  for (const json& s : w) {
    if (!s.is_string()) throw std::invalid_argument("word symbols must be strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

SessionService::SessionService(ServiceLimits limits, RenderOptions render)
    : limits_(limits), render_(std::move(render)), rng_(std::random_device{}()) {}

std::string SessionService::fresh_id() {
  char buf[33];
  for (;;) {
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng_()),
                  static_cast<unsigned long long>(rng_()));
    if (!store_.contains(buf)) return buf;
  }
}

void SessionService::insert(std::shared_ptr<const Session> session) {
  const std::string id = session->id;
  order_.push_front(id);
  store_.emplace(id, std::make_pair(std::move(session), order_.begin()));
  while (store_.size() > limits_.max_sessions) {
    store_.erase(order_.back());
    order_.pop_back();
  }
}

std::shared_ptr<const Session> SessionService::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = store_.find(id);
  if (it == store_.end()) return nullptr;
  order_.splice(order_.begin(), order_, it->second.second);
  return it->second.first;
}

std::size_t SessionService::size() const {
  std::lock_guard lock(mu_);
  return store_.size();
}

Response SessionService::create(std::string_view body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return error(400, "request body must be a JSON object");
  if (!doc.contains("machine")) return error(400, "missing field 'machine'");

  std::optional<Machine> machine;
  try {
    machine = machine_from_json(doc["machine"]);
  } catch (const MachineFormatError& e) {
    return error(400, "malformed machine", {{"field", "machine." + e.field()}, {"detail", e.what()}});
  }
  const ValidationReport report = validate(*machine);
  if (!report.ok()) {
    json violations = json::array();
    for (const Violation& v : report.violations)
      violations.push_back({{"component", v.component}, {"message", v.message}});
    return error(400, "invalid machine", {{"violations", violations}, {"report", report.to_string()}});
  }

  Word word;
  try {
    word = word_from_json(doc.value("word", json()));
  } catch (const std::exception& e) {
    return error(400, e.what(), {{"field", "word"}});
  }

  ExploreOptions options;
  bool invariants = true;
  const json opts = doc.value("options", json::object());
  if (!opts.is_object()) return error(400, "options must be an object", {{"field", "options"}});
  try {
    if (opts.contains("max_steps")) {
      const json& ms = opts["max_steps"];
      if (!ms.is_number_integer() || ms.get<long long>() < 1)
        return error(400, "max_steps must be a positive integer", {{"field", "options.max_steps"}});
      options.max_steps = ms.get<std::size_t>();
    }
    options.add_dead = opts.value("add_dead", false);
    invariants = opts.value("invariants", true);
  } catch (const json::exception&) {
    return error(400, "add_dead and invariants must be booleans", {{"field", "options"}});
  }

  if (word.size() > limits_.max_word)
    return error(413, "word longer than " + std::to_string(limits_.max_word) + " symbols", {{"field", "word"}});
  if (options.max_steps > limits_.max_steps)
    return error(413, "max_steps above " + std::to_string(limits_.max_steps), {{"field", "options.max_steps"}});
  options.max_nodes = limits_.max_nodes;

  auto session = std::make_shared<Session>(Session{{}, word, options, invariants, {}, {}, {}, {}});
  try {
    Visualization v = visualize(*machine, word, options, invariants);
    session->forest = std::move(v.forest);
    session->frames = std::move(v.frames);
  } catch (const InputError& e) {
    return error(400, e.what(), {{"field", "word"}});
  } catch (const LimitError& e) {
    return error(413, e.what());
  }
  for (const Frame& f : session->frames) session->frame_bodies.push_back(canonical_dump(frame_to_json(f)));
  session->created_at = std::chrono::system_clock::now();

  const Frame& last = session->frames.back();
  json out{{"frame_count", session->frames.size()},
           {"verdict", std::string(to_string(session->forest.verdict()))},
           {"computation_count", last.computation_count},
           {"accepting_leaves", session->forest.accepting_leaves().size()},
           {"cutoff_count", session->forest.cutoff_count()},
           {"node_count", session->forest.nodes().size()}};
  {
    std::lock_guard lock(mu_);
    session->id = fresh_id();
    out["id"] = session->id;
    insert(std::move(session));
  }
  return json_response(201, out);
}

Response SessionService::frame(const std::string& id, std::string_view n) const {
  auto s = find(id);
  if (!s) return error(404, "unknown session");
  const auto i = parse_index(n);
  if (!i) return error(400, "frame index must be a non-negative integer");
  if (*i >= s->frames.size()) return error(416, "frame out of range", {{"frame_count", s->frames.size()}});
  return Response{200, s->frame_bodies[*i], "application/json", {}};
}

Response SessionService::diagram(const std::string& id, std::string_view n, std::string_view format) const {
  auto s = find(id);
  if (!s) return error(404, "unknown session");
  const auto i = parse_index(n);
  if (!i) return error(400, "frame index must be a non-negative integer");
  if (*i >= s->frames.size()) return error(416, "frame out of range", {{"frame_count", s->frames.size()}});
  if (format.empty()) format = "svg";
  if (format != "dot" && format != "svg") return error(400, "format must be dot or svg");

  const std::string dot = emit_dot({s->forest.machine(), &s->frames[*i]});
  if (format == "dot") return Response{200, dot, "text/vnd.graphviz; charset=utf-8", {}};
  try {
    return Response{200, render_svg(dot, render_), "image/svg+xml", {}};
  } catch (const DiagramError& e) {
    return error(500, e.what());
  }
}

Response SessionService::jump(const std::string& id, std::string_view from, std::string_view dir) const {
  auto s = find(id);
  if (!s) return error(404, "unknown session");
  const auto i = parse_index(from);
  if (!i) return error(400, "from must be a non-negative integer");
  if (*i >= s->frames.size()) return error(416, "frame out of range", {{"frame_count", s->frames.size()}});
  Direction d;
  if (dir == "next")
    d = Direction::Next;
  else if (dir == "prev")
    d = Direction::Prev;
  else
    return error(400, "dir must be next or prev");
  const auto target = jump_to_invariant_failure(s->frames, *i, d);
  return json_response(200, {{"frame", target ? json(*target) : json(nullptr)}});
}

Response SessionService::remove(const std::string& id) {
  std::lock_guard lock(mu_);
  auto it = store_.find(id);
  if (it == store_.end()) return error(404, "unknown session");
  order_.erase(it->second.second);
  store_.erase(it);
  return Response{204, "", "application/json", {}};
}

Response SessionService::health() const {
  return json_response(200, {{"status", "ok"}, {"sessions", size()}});
}

}  // namespace ndviz
