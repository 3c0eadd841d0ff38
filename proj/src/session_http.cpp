#include <httplib.h>

#include "ndviz/session.hpp"

namespace ndviz {

namespace {

constexpr const char* kStubPage =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>ndviz</title></head>\n"
    "<body><h1>ndviz session service</h1>\n"
    "<p>No UI assets are mounted. Start the server with <code>--static DIR</code> to serve them here.</p>\n"
    "<p>API: <code>POST /sessions</code>, <code>GET /sessions/{id}/frames/{n}</code>, "
    "<code>GET /sessions/{id}/diagram/{n}?format=dot|svg</code>, "
    "<code>GET /sessions/{id}/jump?from=n&amp;dir=next|prev</code>, <code>DELETE /sessions/{id}</code>, "
    "<code>GET /healthz</code>.</p>\n</body></html>\n";

// Sessions are immutable, so GET responses are revalidated by ETag only.
void send(const httplib::Request& req, httplib::Response& res, Response r, bool cacheable) {
  res.status = r.status;
  for (const auto& [k, v] : r.headers) res.set_header(k, v);
  if (cacheable && r.status == 200) {
    const std::string tag = etag_of(r.body);
    res.set_header("ETag", tag);
    res.set_header("Cache-Control", "no-cache");
    if (req.get_header_value("If-None-Match") == tag) {
      res.status = 304;
      return;
    }
  }
  if (r.status != 204 && r.status != 304) res.set_content(std::move(r.body), r.content_type);
}

}  // namespace

void mount_routes(httplib::Server& server, SessionService& service, const HttpOptions& options) {
  server.set_payload_max_length(4 * 1024 * 1024);
  server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                              {"Access-Control-Expose-Headers", "ETag"},
                              {"Vary", "Origin"}});

  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, If-None-Match");
    res.set_header("Access-Control-Max-Age", "600");
  });

  server.Get("/healthz", [&service](const httplib::Request& req, httplib::Response& res) {
    send(req, res, service.health(), false);
  });
  server.Post("/sessions", [&service](const httplib::Request& req, httplib::Response& res) {
    Response r = service.create(req.body);
    if (r.status == 201) {
      const auto id = nlohmann::json::parse(r.body)["id"].get<std::string>();
      r.headers["Location"] = "/sessions/" + id;
    }
    send(req, res, std::move(r), false);
  });
  server.Get(R"(/sessions/([0-9a-zA-Z]+)/frames/([^/]+))",
             [&service](const httplib::Request& req, httplib::Response& res) {
               send(req, res, service.frame(req.matches[1], req.matches[2].str()), true);
             });
  server.Get(R"(/sessions/([0-9a-zA-Z]+)/diagram/([^/]+))",
             [&service](const httplib::Request& req, httplib::Response& res) {
               send(req, res, service.diagram(req.matches[1], req.matches[2].str(), req.get_param_value("format")),
                    true);
             });
  server.Get(R"(/sessions/([0-9a-zA-Z]+)/jump)", [&service](const httplib::Request& req, httplib::Response& res) {
    send(req, res, service.jump(req.matches[1], req.get_param_value("from"), req.get_param_value("dir")), true);
  });
  server.Delete(R"(/sessions/([0-9a-zA-Z]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    send(req, res, service.remove(req.matches[1]), false);
  });

  if (options.static_dir) {
    if (!server.set_mount_point("/", options.static_dir->string()))
      throw std::invalid_argument("static directory not found: " + options.static_dir->string());
  } else {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kStubPage, "text/html; charset=utf-8");
    });
  }
}

bool serve(SessionService& service, const std::string& host, int port, const HttpOptions& options) {
  httplib::Server server;
  mount_routes(server, service, options);
  return server.listen(host, port);
}

}  // namespace ndviz
