#include "farmvoice/service/http_api.hpp"

#include <httplib.h>

#include "farmvoice/util/base64.hpp"

namespace fv::service {

using nlohmann::json;

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidCredentials:
    case ErrorCode::Unauthorized: return 401;
    case ErrorCode::Forbidden:
    case ErrorCode::ForbiddenForFreeForm: return 403;
    case ErrorCode::NotFound: return 404;
    case ErrorCode::DuplicateId:
    case ErrorCode::MissingBaseline: return 409;
    case ErrorCode::PayloadTooLarge: return 413;
    case ErrorCode::MissingTranscript: return 422;
    case ErrorCode::Pending: return 202;
    case ErrorCode::EngineUnavailable: return 503;
    case ErrorCode::EmptyAudio:
    case ErrorCode::UnsupportedLanguage:
    case ErrorCode::NegativeDuration:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ValidationError:
    case ErrorCode::ParseError:
    case ErrorCode::EmptyReference:
    case ErrorCode::InsufficientData:
    case ErrorCode::InsufficientPairs:
    case ErrorCode::SpecInfeasible: return 400;
    case ErrorCode::IoError: return 500;
  }
  return 500;
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  json body{{"error", to_string(code)}, {"message", message}};
  if (code == ErrorCode::Pending) body["status"] = "pending";
  send_json(res, http_status(code), body);
}

std::string bearer_token(const httplib::Request& req) {
  const auto h = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (h.size() <= kPrefix.size() || h.compare(0, kPrefix.size(), kPrefix) != 0) return {};
  return h.substr(kPrefix.size());
}

json parse_body(const httplib::Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::ValidationError, "request body must be a JSON object");
    return j;
  } catch (const json::exception&) {
    throw Error(ErrorCode::ValidationError, "request body is not valid JSON");
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::ValidationError, std::string("missing field ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::ValidationError, std::string("wrong type for field ") + key);
  }
}

template <typename T>
std::optional<T> optional_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return field<T>(j, key);
}

template <typename E>
E enum_field(const json& j, const char* key, std::optional<E> (*parse)(std::string_view) noexcept, E fallback) {
  auto text = optional_field<std::string>(j, key);
  if (!text) return fallback;
  auto v = parse(*text);
  if (!v) throw Error(ErrorCode::ValidationError, std::string("unknown value for ") + key + ": " + *text);
  return *v;
}

UploadRequest upload_from_json(const json& j) {
  UploadRequest req;
  auto& rec = req.recording;
  rec.id = RecordingId(field<std::string>(j, "id"));
  auto audio = util::base64_decode(field<std::string>(j, "audio_base64"));
  if (!audio) throw Error(ErrorCode::ValidationError, "audio_base64 is not valid base64");
  rec.audio = std::move(*audio);
  rec.media_type = optional_field<std::string>(j, "media_type").value_or("audio/wav");
  rec.duration_seconds = optional_field<double>(j, "duration_seconds").value_or(0.0);
  rec.language = optional_field<std::string>(j, "language").value_or("en");
  rec.speaker = optional_field<std::string>(j, "speaker").value_or("");
  rec.mode = enum_field(j, "mode", &parse_mode, FeedbackMode::FreeForm);
  rec.capture = enum_field(j, "capture", &parse_capture, CaptureModule::SpeechToText);
  if (auto s = optional_field<std::string>(j, "setting")) {
    auto v = parse_setting(*s);
    if (!v) throw Error(ErrorCode::ValidationError, "unknown setting " + *s);
    rec.setting = v;
  }
  if (auto t = optional_field<std::string>(j, "created_at")) {
    auto v = parse_timestamp(*t);
    if (!v) throw Error(ErrorCode::ValidationError, "created_at must be RFC 3339 UTC");
    rec.created_at = *v;
  }
  req.run_id = optional_field<std::string>(j, "run_id");
  req.participant = optional_field<std::string>(j, "participant");
  req.spoken_text = optional_field<std::string>(j, "spoken_text");
  return req;
}

}  // namespace

HttpServer::HttpServer(FeedbackService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  mount();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (server_->bind_to_port(host, port)) {
    bound = port;
  }
  if (bound <= 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

bool HttpServer::running() const { return server_->is_running(); }

void HttpServer::mount() {
  auto& srv = *server_;
  auto& svc = service_;
  // httplib's default also sets SO_REUSEPORT, which would let a second
  // instance share the port instead of failing to bind.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  // JSON bodies carry base64 audio, which is 4/3 of the raw size.
  srv.set_payload_max_length(svc.config().max_audio_bytes / 3 * 4 + 64 * 1024);

  // Auth gate ahead of routing: unknown paths answer 401 too, so nothing
  // about the API surface leaks to anonymous callers.
  srv.set_pre_routing_handler([&svc](const httplib::Request& req, httplib::Response& res) {
    if (req.path == "/v1/health" || req.path == "/v1/login") return httplib::Server::HandlerResponse::Unhandled;
    try {
      svc.authenticate(bearer_token(req));
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
      return httplib::Server::HandlerResponse::Handled;
    }
    return httplib::Server::HandlerResponse::Unhandled;
  });

  auto guarded = [&svc](auto handler) {
    return [&svc, handler](const httplib::Request& req, httplib::Response& res) {
      try {
        if (req.path == "/v1/login") {
          handler(req, res, AccountRow{});
        } else {
          handler(req, res, svc.authenticate(bearer_token(req)));
        }
      } catch (const Error& e) {
        send_error(res, e.code(), e.what());
      } catch (const std::exception& e) {
        send_error(res, ErrorCode::IoError, e.what());
      }
    };
  };

  srv.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, json{{"status", "ok"}});
  });

  srv.Post("/v1/login", guarded([&svc](const httplib::Request& req, httplib::Response& res, const AccountRow&) {
             const json body = parse_body(req);
             auto s = svc.login(field<std::string>(body, "name"), field<std::string>(body, "password"));
             send_json(res, 200,
                       json{{"token", s.token},
                            {"expires_at", format_timestamp(s.expires_at)},
                            {"account",
                             {{"name", s.account.name},
                              {"role", to_string(s.account.role)},
                              {"language", to_string(s.account.language)},
                              {"admin", s.account.admin}}}});
           }));

  srv.Post("/v1/recordings", guarded([&svc](const httplib::Request& req, httplib::Response& res, const AccountRow& me) {
             auto result = svc.upload_recording(me, upload_from_json(parse_body(req)));
             send_json(res, result.created ? 201 : 200, json{{"id", result.id}, {"created", result.created}});
           }));

  srv.Get("/v1/recordings", guarded([&svc](const httplib::Request&, httplib::Response& res, const AccountRow& me) {
            json items = json::array();
            for (const auto& row : svc.list_recordings(me)) {
              auto owner = svc.store().account_by_id(row.owner_id);
              items.push_back(to_json(row, owner ? owner->name : ""));
            }
            send_json(res, 200, json{{"recordings", items}});
          }));

  srv.Get(R"(/v1/recordings/([A-Za-z0-9._-]+))",
          guarded([&svc](const httplib::Request& req, httplib::Response& res, const AccountRow& me) {
            auto row = svc.get_recording(me, req.matches[1]);
            auto owner = svc.store().account_by_id(row.owner_id);
            send_json(res, 200, to_json(row, owner ? owner->name : ""));
          }));

  srv.Get(R"(/v1/recordings/([A-Za-z0-9._-]+)/audio)",
          guarded([&svc](const httplib::Request& req, httplib::Response& res, const AccountRow& me) {
            const auto row = svc.get_recording(me, req.matches[1]);
            const auto audio = svc.get_audio(me, req.matches[1]);
            res.status = 200;
            res.set_content(std::string(audio.begin(), audio.end()), row.recording.media_type);
          }));

  srv.Get(R"(/v1/recordings/([A-Za-z0-9._-]+)/transcript)",
          guarded([&svc](const httplib::Request& req, httplib::Response& res, const AccountRow& me) {
            send_json(res, 200, to_json(svc.get_transcript(me, req.matches[1])));
          }));

  srv.Put(R"(/v1/recordings/([A-Za-z0-9._-]+)/transcript)",
          guarded([&svc](const httplib::Request& req, httplib::Response& res, const AccountRow& me) {
            const json body = parse_body(req);
            send_json(res, 200, to_json(svc.edit_transcript(me, req.matches[1], field<std::string>(body, "text"))));
          }));

  srv.Get(R"(/v1/recordings/([A-Za-z0-9._-]+)/analysis)",
          guarded([&svc](const httplib::Request& req, httplib::Response& res, const AccountRow& me) {
            send_json(res, 200, svc.get_analysis(me, req.matches[1]));
          }));

  srv.Post("/v1/submissions", guarded([&svc](const httplib::Request& req, httplib::Response& res, const AccountRow& me) {
             const json body = parse_body(req);
             SubmitRequest s;
             s.recording_id = field<std::string>(body, "recording_id");
             s.choice = field<std::string>(body, "choice");
             s.edited_text = optional_field<std::string>(body, "edited_text");
             send_json(res, 201, to_json(svc.submit_feedback(me, s)));
           }));

  srv.Get("/v1/submissions", guarded([&svc](const httplib::Request&, httplib::Response& res, const AccountRow& me) {
            json items = json::array();
            for (const auto& s : svc.list_submissions(me)) items.push_back(to_json(s));
            send_json(res, 200, json{{"submissions", items}});
          }));

  srv.Put(R"(/v1/submissions/(\d+)/priority)",
          guarded([&svc](const httplib::Request& req, httplib::Response& res, const AccountRow& me) {
            const json body = parse_body(req);
            const auto id = std::stoll(req.matches[1]);
            send_json(res, 200, to_json(svc.set_priority(me, id, field<std::string>(body, "priority"))));
          }));

  srv.Get(R"(/v1/reports/([A-Za-z0-9._-]+))",
          guarded([&svc](const httplib::Request& req, httplib::Response& res, const AccountRow& me) {
            const std::string f = req.has_param("format") ? req.get_param_value("format") : "json";
            const auto format = parse_report_format(f);
            if (!format) throw Error(ErrorCode::ValidationError, "format must be json or csv");
            const std::string run = req.matches[1];
            const auto bytes = svc.get_report(me, run, *format);
            res.status = 200;
            const bool csv = *format == ReportFormat::Csv;
            res.set_header("Content-Disposition",
                           "attachment; filename=\"report-" + run + (csv ? ".csv" : ".json") + "\"");
            res.set_content(bytes, csv ? "text/csv; charset=utf-8" : "application/json");
          }));

  srv.Delete("/v1/data", guarded([&svc](const httplib::Request& req, httplib::Response& res, const AccountRow& me) {
               DeletionScope scope;
               if (req.has_param("recording")) scope.recording = req.get_param_value("recording");
               if (req.has_param("account")) scope.account = req.get_param_value("account");
               const bool all = req.has_param("scope") && req.get_param_value("scope") == "all";
               if (!scope.recording && !all && !scope.account) {
                 throw Error(ErrorCode::ValidationError, "give recording=<id>, scope=all or account=<name>");
               }
               send_json(res, 200, to_json(svc.delete_user_data(me, scope)));
             }));
}

}  // namespace fv::service
