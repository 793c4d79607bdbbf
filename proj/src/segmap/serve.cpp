// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/serve.hpp"

#include <httplib.h>

#include <map>

#include "segmap/error.hpp"
#include "segmap/text.hpp"

namespace segmap {

using nlohmann::json;

int http_status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::parse: return 400;
    case ErrorKind::not_found: return 404;
    case ErrorKind::conflict: return 409;
    case ErrorKind::precondition: return 422;
    case ErrorKind::io: return 500;
  }
  return 500;
}

json error_body(std::string_view error, std::string_view detail) {
  return {{"error", std::string(error)}, {"detail", std::string(detail)}};
}

namespace {

std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::parse: return "bad_request";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::conflict: return "conflict";
    case ErrorKind::precondition: return "precondition_failed";
    case ErrorKind::io: return "io_error";
  }
  return "internal";
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorKind::parse, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("invalid JSON body: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw Error(ErrorKind::invalid_argument, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::invalid_argument, std::string("field '") + name + "' has the wrong type");
  }
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  std::string v = req.get_param_value(name);
  if (v.empty()) return std::nullopt;
  return v;
}

std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  auto v = param(req, name);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    long n = std::stol(*v, &used);
    if (used != v->size() || n < 0) throw std::invalid_argument("");
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_argument, std::string("query parameter '") + name + "' must be a nonnegative integer");
  }
}

json decision_view(const CodingDecision& d) {
  return {{"coder_id", d.coder_id}, {"round", d.round},        {"verdict", to_string(d.verdict)},
          {"comment", d.comment},   {"timestamp", d.timestamp}};
}

}  // namespace

struct ReviewServer::Impl {
  ServeContext ctx;
  httplib::Server server;
  std::map<std::string, const NGramCandidate*> by_term;

  json contexts_for(const NGramCandidate& c, std::size_t limit) const {
    json out = json::array();
    if (!ctx.store) return out;
    std::set<std::string> docs_seen;
    for (const auto& o : c.occurrences) {
      if (out.size() >= limit) break;
      if (!docs_seen.insert(o.doc_id).second) continue;
      const DocumentRecord* r = ctx.store->find(o.doc_id);
      if (!r) continue;
      std::string text;
      switch (o.field.kind) {
        case FieldKind::title: text = r->title; break;
        case FieldKind::keyword:
          text = o.field.index < static_cast<int>(r->keywords.size()) ? r->keywords[o.field.index] : "";
          break;
        case FieldKind::abstract_text: {
          auto toks = tokenize_text(r->abstract_text);
          std::size_t lo = o.position > 10 ? o.position - 10 : 0;
          std::size_t hi = std::min(toks.size(), static_cast<std::size_t>(o.position) + 11);
          std::vector<std::string> window(toks.begin() + lo, toks.begin() + hi);
          text = (lo > 0 ? "... " : "") + join(window, " ") + (hi < toks.size() ? " ..." : "");
          break;
        }
      }
      out.push_back({{"doc_id", r->doc_id}, {"year", r->year}, {"field", o.field.to_string()}, {"text", text}});
    }
    return out;
  }

  template <class Fn>
  auto guard(Fn fn) {
    return [this, fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_json(res, http_status_for(e.kind()), error_body(kind_name(e.kind()), e.what()));
      } catch (const std::exception& e) {
        send_json(res, 500, error_body("internal", e.what()));
      }
    };
  }

  void routes() {
    server.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Allow-Headers", std::string("Content-Type, ") + kTokenHeader);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      if (req.method == "OPTIONS") {
        res.status = 204;
        return httplib::Server::HandlerResponse::Handled;
      }
      if (ctx.token && req.path != "/health" && req.get_header_value(kTokenHeader) != *ctx.token) {
        send_json(res, 401, error_body("unauthorized", std::string("missing or wrong ") + kTokenHeader + " header"));
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (res.body.empty() && res.status == 404) {
        send_json(res, 404, error_body("not_found", "no route for " + req.method + " " + req.path));
      }
    });

    server.Get("/health", guard([](const httplib::Request&, httplib::Response& res) {
                 send_json(res, 200, {{"status", "ok"}});
               }));

    server.Get("/candidates", guard([this](const httplib::Request& req, httplib::Response& res) {
                 std::optional<int> arity;
                 if (auto a = param(req, "arity")) {
                   if (*a != "2" && *a != "3") throw Error(ErrorKind::invalid_argument, "arity must be 2 or 3");
                   arity = std::stoi(*a);
                 }
                 auto status = param(req, "status");
                 if (status && *status != "valid" && *status != "invalid" && *status != "unresolved" &&
                     *status != "undecided") {
                   throw Error(ErrorKind::invalid_argument, "status must be valid, invalid, unresolved or undecided");
                 }
                 json out = ctx.codebook->list(status, arity, param(req, "q").value_or(""), size_param(req, "page", 1),
                                               size_param(req, "page_size", 50));
                 auto coder = param(req, "coder_id");
                 for (auto& item : out["items"]) {
                   const auto& term = item["term"].get_ref<const std::string&>();
                   if (auto it = by_term.find(term); it != by_term.end()) item["contexts"] = contexts_for(*it->second, 3);
                   if (coder) {
                     item["my_verdict"] = nullptr;
                     for (const auto& d : item["decisions"]) {
                       if (d["coder_id"] == *coder) item["my_verdict"] = d["verdict"];
                     }
                   }
                 }
                 send_json(res, 200, out);
               }));

    server.Post("/decisions", guard([this](const httplib::Request& req, httplib::Response& res) {
                  json body = parse_body(req);
                  CodingDecision d;
                  d.term = field<std::string>(body, "term");
                  d.coder_id = field<std::string>(body, "coder_id");
                  d.verdict = parse_verdict(field<std::string>(body, "verdict"));
                  d.round = body.contains("round") ? field<int>(body, "round") : ctx.codebook->snapshot().open_round();
                  d.comment = body.value("comment", "");
                  ctx.codebook->record(d);
                  auto state = ctx.codebook->snapshot();
                  auto disc = state.discrepancies();
                  send_json(res, 201,
                            {{"term", d.term},
                             {"round", d.round},
                             {"status", to_string(state.consensus(d.term))},
                             {"discrepancy", std::find(disc.begin(), disc.end(), d.term) != disc.end()}});
                }));

    server.Get("/discrepancies", guard([this](const httplib::Request&, httplib::Response& res) {
                 auto state = ctx.codebook->snapshot();
                 json items = json::array();
                 for (const auto& term : state.discrepancies()) {
                   json ds = json::array();
                   for (const auto& [coder, d] : state.latest(term)) ds.push_back(decision_view(d));
                   items.push_back({{"term", term}, {"decisions", ds}});
                 }
                 send_json(res, 200, {{"round", state.open_round()}, {"count", items.size()}, {"items", items}});
               }));

    server.Post("/rounds/resolve", guard([this](const httplib::Request& req, httplib::Response& res) {
                  json body = parse_body(req);
                  std::vector<Resolution> resolutions;
                  if (body.contains("resolutions")) {
                    if (!body["resolutions"].is_array()) {
                      throw Error(ErrorKind::invalid_argument, "field 'resolutions' must be an array");
                    }
                    for (const auto& r : body["resolutions"]) {
                      resolutions.push_back({field<std::string>(r, "term"),
                                             parse_verdict(field<std::string>(r, "verdict")), r.value("note", "")});
                    }
                  }
                  std::vector<std::string> deferred;
                  if (body.contains("deferred")) deferred = field<std::vector<std::string>>(body, "deferred");
                  const int closing = ctx.codebook->snapshot().open_round();
                  ctx.codebook->resolve_round(resolutions, deferred, body.value("changelog", ""));
                  json progress = ctx.codebook->progress();
                  send_json(res, 200, {{"closed_round", closing}, {"version", progress["version"]}, {"progress", progress}});
                }));

    server.Get("/progress", guard([this](const httplib::Request&, httplib::Response& res) {
                 send_json(res, 200, ctx.codebook->progress());
               }));

    server.Get("/labeling", guard([this](const httplib::Request&, httplib::Response& res) {
                 if (!ctx.labeling) throw Error(ErrorKind::not_found, "no labeling state loaded");
                 send_json(res, 200, ctx.labeling->snapshot().to_json());
               }));

    server.Post("/labeling", guard([this](const httplib::Request& req, httplib::Response& res) {
                  if (!ctx.labeling) throw Error(ErrorKind::not_found, "no labeling state loaded");
                  json body = parse_body(req);
                  auto term = field<std::string>(body, "term");
                  auto labels = field<std::vector<std::string>>(body, "labels");
                  ctx.labeling->set_labels(term, labels);
                  auto snap = ctx.labeling->snapshot();
                  send_json(res, 200, {{"term", term}, {"labels", snap.labels.at(term)}});
                }));
  }
};

ReviewServer::ReviewServer(ServeContext ctx) : impl_(std::make_unique<Impl>()) {
  if (!ctx.codebook) throw Error(ErrorKind::invalid_argument, "serve needs a codebook");
  impl_->ctx = std::move(ctx);
  for (const auto& c : impl_->ctx.candidates) impl_->by_term.emplace(c.term(), &c);
  impl_->routes();
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind(const std::string& host, int port) {
  if (port == 0) {
    int p = impl_->server.bind_to_any_port(host);
    if (p < 0) throw Error(ErrorKind::io, "cannot bind " + host);
    return p;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorKind::io, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ReviewServer::listen() { impl_->server.listen_after_bind(); }

void ReviewServer::stop() {
  if (impl_) impl_->server.stop();
}

bool ReviewServer::running() const { return impl_->server.is_running(); }

}  // namespace segmap
