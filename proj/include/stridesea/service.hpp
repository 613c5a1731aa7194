#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "stridesea/ddp.hpp"
#include "stridesea/error.hpp"
#include "stridesea/portfolio.hpp"
#include "stridesea/report.hpp"

namespace stridesea::service {

using Json = nlohmann::ordered_json;

inline constexpr int kDefaultPort = 7430;

// Analysis and effect matrix are fixed at construction; only the selection,
// threshold and cutoff change, under one lock.
class Session {
 public:
  Session(ddp::RiskAnalysis analysis, ddp::EffectivenessMatrix effect)
      : analysis_(std::move(analysis)), effect_(std::move(effect)) {
    ddp::check_effectiveness(effect_);
    for (const auto& r : analysis_.risks) {
      const auto it = std::find(effect_.risks.begin(), effect_.risks.end(), r.name);
      if (it == effect_.risks.end())
        throw ValidationError("effect matrix has no column for risk \"" + r.name + "\"");
      column_.push_back(static_cast<std::size_t>(it - effect_.risks.begin()));
    }
    if (effect_.risks.size() != analysis_.risks.size())
      throw ValidationError("effect matrix columns do not match the analysis risks");
    selection_ = effect_.countermeasure_names();
    std::sort(selection_.begin(), selection_.end());
  }

  const ddp::RiskAnalysis& analysis() const { return analysis_; }
  const ddp::EffectivenessMatrix& effect() const { return effect_; }

  std::vector<std::string> selection() const {
    std::lock_guard lock(mu_);
    return selection_;
  }

  Json state() const {
    std::lock_guard lock(mu_);
    return snapshot(selection_, threshold_, cutoff_);
  }

  // Unknown names throw UnknownNameError before anything changes.
  Json set_portfolio(const std::vector<std::string>& names) {
    auto rows = ddp::resolve_selection(effect_, names);
    std::vector<std::string> next;
    for (auto r : rows) next.push_back(effect_.countermeasures[r].name);
    std::sort(next.begin(), next.end());
    std::lock_guard lock(mu_);
    selection_ = std::move(next);
    return snapshot(selection_, threshold_, cutoff_);
  }

  // Infeasible or invalid requests throw and leave the session untouched.
  Json optimize(double threshold, double cutoff) {
    auto best = ddp::optimize_portfolio(effect_, threshold, cutoff);
    std::lock_guard lock(mu_);
    selection_ = std::move(best.selected);
    threshold_ = threshold;
    cutoff_ = cutoff;
    return snapshot(selection_, threshold_, cutoff_);
  }

 private:
  Json snapshot(const std::vector<std::string>& selection, double threshold, double cutoff) const {
    const auto ev = ddp::evaluate_portfolio(effect_, std::span<const std::string>(selection));
    const auto& a = analysis_;
    Json objectives = Json::array(), risks = Json::array(), cms = Json::array();
    for (std::size_t o = 0; o < a.objectives.size(); ++o)
      objectives.push_back({{"name", a.objectives[o]},
                            {"importance", a.importances[o]},
                            {"weight", a.weights[o]},
                            {"loss", a.loss[o]}});
    for (std::size_t r = 0; r < a.risks.size(); ++r) {
      const auto col = column_[r];
      risks.push_back({{"name", a.risks[r].name},
                       {"category", report::category_letter(a.risks[r].category)},
                       {"asset", a.risks[r].asset},
                       {"likelihood", a.risks[r].likelihood},
                       {"criticality", a.criticality[r]},
                       {"crr", ev.crr[col]},
                       {"residual", ev.residual[col]}});
    }
    for (std::size_t c = 0; c < effect_.countermeasures.size(); ++c)
      cms.push_back({{"name", effect_.countermeasures[c].name},
                     {"cost", effect_.countermeasures[c].cost},
                     {"oe", ev.oe[c]},
                     {"selected", report::is_selected(ev, effect_.countermeasures[c].name)}});
    const auto uncovered = ddp::uncovered_risks(effect_, ev.crr, threshold, cutoff);
    return {{"objectives", objectives},
            {"risks", risks},
            {"countermeasures", cms},
            {"selection", selection},
            {"portfolio",
             {{"totalCost", ev.total_cost},
              {"totalResidual", ev.total_residual},
              {"feasible", uncovered.empty()},
              {"threshold", threshold},
              {"cutoff", cutoff},
              {"uncovered", uncovered}}}};
  }

  const ddp::RiskAnalysis analysis_;
  const ddp::EffectivenessMatrix effect_;
  std::vector<std::size_t> column_;  // analysis risk -> effect column

  mutable std::mutex mu_;
  std::vector<std::string> selection_;
  double threshold_ = 0.8;
  double cutoff_ = 0.0;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

inline Response json_response(int status, const Json& j) { return {status, j.dump() + "\n"}; }

inline Response error_response(int status, std::string code, const std::string& message,
                               Json extra = Json::object()) {
  Json j = {{"error", std::move(code)}, {"message", message}};
  for (auto& [k, v] : extra.items()) j[k] = v;
  return json_response(status, j);
}

namespace detail {
inline std::optional<Json> parse_object(const std::string& body) {
  auto j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

inline std::optional<double> number_field(const Json& j, const char* key, double fallback, bool& ok) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    ok = false;
    return std::nullopt;
  }
  return j.at(key).get<double>();
}
}  // namespace detail

// Transport-free request handling; the HTTP server is a thin shell over this.
inline Response handle(Session& s, const std::string& method, const std::string& path,
                       const std::string& body) {
  try {
    if (path == "/api/state") {
      if (method != "GET") return error_response(405, "method-not-allowed", "use GET");
      return json_response(200, s.state());
    }
    if (path == "/api/portfolio") {
      if (method != "POST") return error_response(405, "method-not-allowed", "use POST");
      auto j = detail::parse_object(body);
      if (!j || !j->contains("selected") || !j->at("selected").is_array())
        return error_response(400, "bad-request", "expected {\"selected\": [names]}");
      std::vector<std::string> names;
      for (const auto& n : j->at("selected")) {
        if (!n.is_string()) return error_response(400, "bad-request", "selected entries must be strings");
        names.push_back(n.get<std::string>());
      }
      return json_response(200, s.set_portfolio(names));
    }
    if (path == "/api/optimize") {
      if (method != "POST") return error_response(405, "method-not-allowed", "use POST");
      auto j = detail::parse_object(body.empty() ? "{}" : body);
      if (!j) return error_response(400, "bad-request", "expected {\"threshold\": x, \"cutoff\": y}");
      bool ok = true;
      auto threshold = detail::number_field(*j, "threshold", 0.8, ok);
      auto cutoff = detail::number_field(*j, "cutoff", 0.0, ok);
      if (!ok) return error_response(400, "bad-request", "threshold and cutoff must be numbers");
      return json_response(200, s.optimize(*threshold, *cutoff));
    }
    return error_response(404, "not-found", "no such endpoint: " + path);
  } catch (const UnknownNameError& e) {
    return error_response(404, "unknown-countermeasure", e.what(), {{"name", e.name()}});
  } catch (const InfeasibleError& e) {
    return error_response(422, "infeasible", e.what(), {{"uncoverable", e.uncoverable()}});
  } catch (const ValidationError& e) {
    return error_response(400, "bad-request", e.what());
  }
}

inline constexpr std::string_view kPlaceholderPage = R"(<!doctype html>
<html>
<head><meta charset="utf-8"><title>stridesea</title></head>
<body>
<h1>stridesea what-if service</h1>
<p>No console build is mounted. The JSON API lives under <code>/api</code>:</p>
<ul>
<li><code>GET /api/state</code></li>
<li><code>POST /api/portfolio</code> with <code>{"selected": [...]}</code></li>
<li><code>POST /api/optimize</code> with <code>{"threshold": 0.8, "cutoff": 0.0}</code></li>
</ul>
</body>
</html>
)";

class Server {
 public:
  // `static_dir` empty serves the placeholder page at "/".
  Server(Session& session, std::string static_dir = {}) : session_(session) {
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
      auto r = handle(session_, req.method, req.path, req.body);
      res.status = r.status;
      res.set_content(r.body, r.content_type);
    };
    http_.Get("/api/.*", route);
    http_.Post("/api/.*", route);
    http_.Put("/api/.*", route);
    http_.Delete("/api/.*", route);
    if (static_dir.empty() || !http_.set_mount_point("/", static_dir)) {
      http_.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(std::string(kPlaceholderPage), "text/html");
      });
    }
  }

  // Port 0 picks a free port. Returns the bound port; throws IoError.
  int bind(const std::string& host, int port) {
    const int bound = port == 0 ? http_.bind_to_any_port(host) : (http_.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
    return bound;
  }
  void listen() { http_.listen_after_bind(); }
  void stop() { http_.stop(); }
  void wait_until_ready() { http_.wait_until_ready(); }

 private:
  Session& session_;
  httplib::Server http_;
};

}  // namespace stridesea::service
