#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "helpdesk/corpus.hpp"
#include "helpdesk/error.hpp"
#include "helpdesk/labeling.hpp"
#include "helpdesk/model.hpp"
#include "helpdesk/prediction.hpp"

namespace helpdesk {

inline constexpr std::string_view kSnippetMarker = "{snippet}";

/// One generic shell with a single {snippet} marker, plus the per-category
/// snippets keyed by template id.
struct TemplateSet {
  std::string generic_shell;
  std::map<std::string, std::string> snippets;

  void validate() const {
    const auto first = generic_shell.find(kSnippetMarker);
    if (first == std::string::npos ||
        generic_shell.find(kSnippetMarker, first + 1) != std::string::npos) {
      throw InvalidArgument("generic_shell must contain the {snippet} marker exactly once");
    }
    for (const auto& [id, text] : snippets) {
      if (text.find(kSnippetMarker) != std::string::npos) {
        throw InvalidArgument("snippet '" + id + "' must not contain the {snippet} marker");
      }
    }
  }

  /// Every category needs a snippet; checked when a responder is built.
  void check_covers(std::span<const CategorySpec> categories) const {
    for (const auto& c : categories) {
      if (!snippets.contains(c.template_id)) {
        throw InvalidArgument("no reply template '" + c.template_id + "' for category '" + c.name + "'");
      }
    }
  }
};

inline TemplateSet default_templates() {
  TemplateSet t;
  t.generic_shell =
      "Thank you for contacting the IT helpdesk. Your query has been received and logged, "
      "and an agent will follow up with you as soon as possible.\n"
      "\n"
      "{snippet}\n"
      "\n"
      "Many common questions are answered on the IT help pages, including how to reset "
      "your password and how to connect to the campus network.\n"
      "\n"
      "IT Helpdesk";
  t.snippets = {
      {"adobe",
       "It looks like your query is about Adobe software. Creative Cloud licences are renewed "
       "each academic year: sign out of the Creative Cloud desktop app and sign back in with your "
       "university account to refresh an expired licence."},
      {"appsanywhere",
       "It looks like your query is about AppsAnywhere. If an application closes straight after "
       "launching, clear the Cloudpaging Player cache from the AppsAnywhere settings menu and "
       "launch the application again."},
      {"blackboard",
       "It looks like your query is about Blackboard. If you cannot see a module or submission "
       "point, clear your browser cache and sign in again; modules appear within 24 hours of "
       "enrolment."},
      {"password",
       "It looks like your query is about your password or multi-factor authentication. You can "
       "reset your password and re-register your authenticator app from the self-service account "
       "portal."},
      {"wifi",
       "It looks like your query is about WiFi or network access. Connect to eduroam using your "
       "full university email address and password; for remote access, use the VPN client from "
       "the software catalogue."},
  };
  return t;
}

inline TemplateSet templates_from_json(const nlohmann::json& j) {
  TemplateSet t;
  try {
    t.generic_shell = j.at("generic_shell").get<std::string>();
    t.snippets = j.at("snippets").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("template file: ") + e.what());
  }
  t.validate();
  return t;
}

inline nlohmann::json templates_to_json(const TemplateSet& t) {
  return {{"generic_shell", t.generic_shell}, {"snippets", t.snippets}};
}

/// Reads {"generic_shell": "...{snippet}...", "snippets": {id: text}}.
inline TemplateSet load_templates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open template file '" + path + "'");
  try {
    return templates_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("template file '" + path + "': " + e.what());
  }
}

/// Which side of the threshold gets the tailored reply.
enum class GateDirection {
  /// Tailor when top-class confidence >= threshold (default).
  confidence_at_least,
  /// Tailor when estimated error (1 - confidence) >= threshold.
  error_at_least,
};

struct GatePolicy {
  double threshold = 0.75;
  GateDirection direction = GateDirection::confidence_at_least;
};

inline bool should_tailor(double confidence, const GatePolicy& policy) {
  if (policy.direction == GateDirection::confidence_at_least) return confidence >= policy.threshold;
  return 1.0 - confidence >= policy.threshold;
}

/// Inserts `snippet` at the marker. An empty snippet on a line of its own
/// removes that line together with one adjacent blank line.
inline std::string render_reply(std::string_view shell, std::string_view snippet) {
  const auto pos = shell.find(kSnippetMarker);
  if (pos == std::string_view::npos) return std::string(shell);
  std::string before(shell.substr(0, pos));
  std::string after(shell.substr(pos + kSnippetMarker.size()));
  if (!snippet.empty()) return before + std::string(snippet) + after;
  const bool own_line = (before.empty() || before.back() == '\n') && (after.empty() || after.front() == '\n');
  if (own_line) {
    if (!after.empty()) after.erase(0, 1);
    if (before.ends_with("\n\n") && after.starts_with("\n")) after.erase(0, 1);
    else if (after.empty() && before.ends_with('\n')) before.pop_back();
  }
  return before + after;
}

struct ReplyDecision {
  std::optional<std::string> category;
  double confidence = 0.0;
  bool tailored = false;
  std::string rendered;
};

/// The gating rule on an already computed prediction.
inline ReplyDecision decide_reply(const Prediction& prediction, std::span<const CategorySpec> categories,
                                  const TemplateSet& templates, const GatePolicy& policy) {
  ReplyDecision d;
  d.confidence = prediction.confidence;
  d.category = categories[prediction.category].name;
  d.tailored = should_tailor(prediction.confidence, policy);
  const std::string_view snippet =
      d.tailored ? std::string_view(templates.snippets.at(categories[prediction.category].template_id))
                 : std::string_view();
  d.rendered = render_reply(templates.generic_shell, snippet);
  return d;
}

/// Model + templates + gate, validated together once.
class AutoResponder {
 public:
  AutoResponder(Classifier model, TemplateSet templates, GatePolicy policy = {})
      : model_(std::move(model)), templates_(std::move(templates)), policy_(policy) {
    templates_.validate();
    templates_.check_covers(model_.categories());
  }

  const Classifier& model() const { return model_; }
  const TemplateSet& templates() const { return templates_; }
  const GatePolicy& policy() const { return policy_; }

  ReplyDecision compose_reply(const CleanEmail& email) const {
    return decide_reply(model_.classify(email), model_.categories(), templates_, policy_);
  }

  ReplyDecision compose_reply_raw(std::string_view subject, std::string_view body) const {
    return decide_reply(model_.classify_raw(subject, body), model_.categories(), templates_, policy_);
  }

 private:
  Classifier model_;
  TemplateSet templates_;
  GatePolicy policy_;
};

}  // namespace helpdesk
