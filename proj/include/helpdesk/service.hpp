#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "helpdesk/autoreply.hpp"
#include "helpdesk/error.hpp"
#include "helpdesk/model.hpp"

namespace helpdesk {

inline constexpr std::size_t kDefaultPayloadLimit = 64 * 1024;

/// Holds the responder the handlers read. Empty until install(); each
/// request takes its own reference, so a request never sees a half-built model.
class ModelSlot {
 public:
  void install(std::shared_ptr<const AutoResponder> responder) {
    std::lock_guard lock(mutex_);
    responder_ = std::move(responder);
  }

  std::shared_ptr<const AutoResponder> get() const {
    std::lock_guard lock(mutex_);
    return responder_;
  }

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const AutoResponder> responder_;
};

struct ServiceResponse {
  int status = 200;
  std::string body;
};

/// The JSON fields shared by the CLI `classify` output and the service.
inline nlohmann::ordered_json classification_json(const ReplyDecision& d) {
  nlohmann::ordered_json j;
  j["category"] = d.category ? nlohmann::ordered_json(*d.category) : nlohmann::ordered_json(nullptr);
  j["confidence"] = d.confidence;
  j["tailored"] = d.tailored;
  return j;
}

inline nlohmann::ordered_json reply_json(const ReplyDecision& d) {
  nlohmann::ordered_json j;
  j["rendered"] = d.rendered;
  j["tailored"] = d.tailored;
  j["category"] = d.category ? nlohmann::ordered_json(*d.category) : nlohmann::ordered_json(nullptr);
  j["confidence"] = d.confidence;
  return j;
}

namespace detail {

inline ServiceResponse error_response(int status, const std::string& message) {
  return {status, nlohmann::json{{"error", message}}.dump()};
}

inline std::string string_field(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidArgument(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw InvalidArgument(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

template <class ToJson>
ServiceResponse handle_email(const ModelSlot& slot, const std::string& body, ToJson to_json) {
  const auto responder = slot.get();
  if (!responder) return error_response(503, "model not loaded");
  nlohmann::json request;
  try {
    request = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    return error_response(400, std::string("malformed JSON: ") + e.what());
  }
  if (!request.is_object()) return error_response(400, "request body must be a JSON object");
  try {
    const auto subject = string_field(request, "subject");
    const auto text = string_field(request, "body");
    return {200, to_json(responder->compose_reply_raw(subject, text)).dump()};
  } catch (const InvalidArgument& e) {
    return error_response(400, e.what());
  }
}

}  // namespace detail

/// POST /classify: {subject, body} -> {category, confidence, tailored}.
inline ServiceResponse handle_classify(const ModelSlot& slot, const std::string& body) {
  return detail::handle_email(slot, body, [](const ReplyDecision& d) { return classification_json(d); });
}

/// POST /reply: {subject, body} -> {rendered, tailored, category, confidence}.
inline ServiceResponse handle_reply(const ModelSlot& slot, const std::string& body) {
  return detail::handle_email(slot, body, [](const ReplyDecision& d) { return reply_json(d); });
}

/// GET /health: 503 until a model is installed.
inline ServiceResponse handle_health(const ModelSlot& slot) {
  const auto responder = slot.get();
  if (!responder) return {503, nlohmann::json{{"status", "loading"}}.dump()};
  nlohmann::ordered_json j;
  j["status"] = "ok";
  j["model_version"] = kModelFormatVersion;
  j["model_kind"] = std::string(responder->model().kind());
  return {200, j.dump()};
}

/// Registers the three routes on `server`.
inline void install_routes(httplib::Server& server, const ModelSlot& slot,
                           std::size_t payload_limit = kDefaultPayloadLimit) {
  server.set_payload_max_length(payload_limit);
  auto send = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Post("/classify", [&slot, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_classify(slot, req.body));
  });
  server.Post("/reply", [&slot, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_reply(slot, req.body));
  });
  server.Get("/health", [&slot, send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_health(slot));
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const char* reason = res.status == 413 ? "payload too large" : httplib::status_message(res.status);
    res.set_content(nlohmann::json{{"error", reason}}.dump(), "application/json");
  });
}

}  // namespace helpdesk
