#include "frp/service.hpp"

#include "frp/error.hpp"
#include "frp/fiberclass.hpp"
#include "frp/laminate.hpp"
#include "frp/laminate_io.hpp"

#include <httplib.h>

#include <charconv>

namespace frp::service {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Signals an ApiError response from inside a handler.
struct Reject {
    Response response;
};

[[noreturn]] void reject(int status, std::string_view code, std::string_view message,
                         std::string_view detail = {}) {
    throw Reject{api_error(status, code, message, detail)};
}

json parse_body(std::string_view body) {
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        reject(400, "bad_request", std::string("request body is not valid JSON: ") + e.what());
    }
}

int status_for(const ValidationError& e) { return e.code() == "empty_class" ? 404 : 422; }

template <typename Fn>
Response guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const Reject& r) {
        return r.response;
    } catch (const ValidationError& e) {
        return api_error(status_for(e), e.code(), e.what(), e.detail());
    } catch (const std::exception& e) {
        return api_error(500, "internal_error", e.what());
    }
}

std::optional<std::size_t> top_of(const json& body) {
    auto it = body.find("top");
    if (it == body.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer() || it->get<long long>() < 0)
        reject(422, "invalid_requirement", "'top' must be a non-negative integer", "top");
    return it->get<std::size_t>();
}

ordered_json ranking_json(const std::vector<fuzzysim::SimilarityResult>& ranking,
                          std::optional<std::size_t> top) {
    ordered_json out = ordered_json::array();
    const std::size_t n = top ? std::min(*top, ranking.size()) : ranking.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({{"rank", ranking[i].rank},
                       {"name", ranking[i].record_name},
                       {"strength", ranking[i].strength}});
    }
    return out;
}

matdb::RequirementVector requirement_in(const json& body, matdb::RecordSchema expected) {
    if (!body.is_object()) reject(422, "invalid_requirement", "request body must be an object");
    auto it = body.find("requirements");
    if (it == body.end())
        reject(422, "invalid_requirement", "missing 'requirements'", "requirements");
    auto req = matdb::requirement_from_json(*it);
    if (req.schema != expected) {
        reject(422, "invalid_requirement",
               "requirements must use the " + std::string(matdb::schema_name(expected)) + " schema",
               "schema");
    }
    return req;
}

double number_field(const json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_number())
        reject(422, "invalid_input", std::string("'") + key + "' must be a number", key);
    return it->get<double>();
}

std::optional<std::string> origin_host(const std::string& origin) {
    const auto scheme = origin.find("://");
    if (scheme == std::string::npos) return std::nullopt;
    std::string rest = origin.substr(scheme + 3);
    if (!rest.empty() && rest.front() == '[') {
        const auto close = rest.find(']');
        return close == std::string::npos ? std::nullopt : std::optional(rest.substr(0, close + 1));
    }
    return rest.substr(0, rest.find(':'));
}

}  // namespace

Response api_error(int status, std::string_view code, std::string_view message,
                   std::string_view detail) {
    ordered_json body{{"code", code}, {"message", message}};
    if (!detail.empty()) body["detail"] = detail;
    return {status, std::move(body)};
}

Api::Api(std::shared_ptr<const matdb::MaterialDb> db, fuzzysim::RankOptions rank)
    : db_(std::move(db)), rank_(rank) {}

Response Api::healthz() const {
    ordered_json counts{{"polymers", db_ ? db_->polymers.size() : 0},
                        {"fibers", db_ ? db_->fibers.size() : 0}};
    return {200,
            {{"status", db_ ? "ok" : "no_db"}, {"db_counts", counts}, {"version", kVersion}}};
}

Response Api::polymers() const {
    return guarded([&] {
        if (!db_) reject(500, "db_unavailable", "no material database loaded");
        ordered_json out = ordered_json::array();
        for (const auto& p : db_->polymers) out.push_back(matdb::to_json(p));
        return Response{200, out};
    });
}

Response Api::fibers() const {
    return guarded([&] {
        if (!db_) reject(500, "db_unavailable", "no material database loaded");
        ordered_json out = ordered_json::array();
        for (const auto& f : db_->fibers) out.push_back(matdb::to_json(f));
        return Response{200, out};
    });
}

Response Api::select_matrix(std::string_view body) const {
    return guarded([&] {
        if (!db_) reject(500, "db_unavailable", "no material database loaded");
        const json j = parse_body(body);
        const auto req = requirement_in(j, matdb::RecordSchema::Polymer);
        const auto top = top_of(j);
        const auto ranking = fuzzysim::rank_by_similarity(
            req, std::span<const matdb::PolymerRecord>(db_->polymers), rank_);
        return Response{200, {{"results", ranking_json(ranking, top)}}};
    });
}

Response Api::select_fiber(std::string_view body) const {
    return guarded([&] {
        if (!db_) reject(500, "db_unavailable", "no material database loaded");
        const json j = parse_body(body);
        const auto req = requirement_in(j, matdb::RecordSchema::Fiber);
        const auto top = top_of(j);

        std::optional<double> tau_c;
        if (auto it = j.find("tau_c_override"); it != j.end() && !it->is_null()) {
            if (!it->is_number())
                reject(422, "invalid_input", "'tau_c_override' must be a number", "tau_c_override");
            tau_c = it->get<double>();
        }
        std::string matrix_name;
        if (auto it = j.find("matrix"); it != j.end() && !it->is_null()) {
            if (!it->is_string()) reject(422, "invalid_input", "'matrix' must be a name", "matrix");
            matrix_name = it->get<std::string>();
        }
        if (!tau_c) {
            if (matrix_name.empty())
                reject(422, "invalid_input", "give 'matrix' or 'tau_c_override'", "matrix");
            const auto* matrix = db_->find_polymer(matrix_name);
            if (!matrix) reject(422, "unknown_matrix", "no polymer named '" + matrix_name + "'", "matrix");
            tau_c = matrix->shear_strength();
        }

        const auto sel = fiberclass::select_fiber(
            req, std::span<const matdb::FiberRecord>(db_->fibers), *tau_c, rank_);
        ordered_json out{{"class", fiberclass::to_string(sel.fiber_class)},
                         {"tau_c", sel.tau_c},
                         {"requirement_critical_length", sel.requirement_critical_length},
                         {"results", ranking_json(sel.ranking, top)}};
        return Response{200, out};
    });
}

Response Api::classify_fiber(std::string_view body) const {
    return guarded([&] {
        const json j = parse_body(body);
        if (!j.is_object()) reject(422, "invalid_input", "request body must be an object");
        const double lc = fiberclass::critical_length(
            {number_field(j, "sigma_f"), number_field(j, "d"), number_field(j, "tau_c")});
        const auto cls = fiberclass::classify(number_field(j, "l"), lc);
        return Response{200, {{"l_c", lc}, {"class", fiberclass::to_string(cls)}}};
    });
}

Response Api::analyze(std::string_view body) const {
    return guarded([&] {
        const auto spec = laminate::spec_from_json(parse_body(body));
        return Response{200, laminate::to_json(laminate::analyze(spec))};
    });
}

Response Api::sweep(std::string_view body) const {
    return guarded([&] {
        const json j = parse_body(body);
        const auto spec = laminate::spec_from_json(j);
        std::vector<double> thetas;
        auto it = j.find("thetas");
        if (it == j.end()) reject(422, "bad_spec", "missing 'thetas'", "thetas");
        if (it->is_string()) {
            thetas = laminate::parse_theta_range(it->get<std::string>());
        } else if (it->is_array()) {
            for (std::size_t i = 0; i < it->size(); ++i) {
                const auto& t = (*it)[i];
                const std::string at = "thetas[" + std::to_string(i) + "]";
                if (!t.is_number()) reject(422, "bad_spec", at + " must be a number", at);
                const double theta = t.get<double>();
                if (!(theta >= 0.0 && theta <= 90.0))
                    reject(422, "bad_spec", at + " must be in [0, 90] degrees", at);
                thetas.push_back(theta);
            }
        } else {
            reject(422, "bad_spec", "'thetas' must be an array or a start:stop:step range", "thetas");
        }
        const auto rows = laminate::sweep_orientations(spec, thetas);
        return Response{200, laminate::to_json(std::span<const laminate::SweepRow>(rows))};
    });
}

Response Api::dispatch(std::string_view method, std::string_view path, std::string_view body) const {
    if (method == "GET") {
        if (path == "/healthz") return healthz();
        if (path == "/api/polymers") return polymers();
        if (path == "/api/fibers") return fibers();
    } else if (method == "POST") {
        if (path == "/api/select/matrix") return select_matrix(body);
        if (path == "/api/select/fiber") return select_fiber(body);
        if (path == "/api/fibers/classify") return classify_fiber(body);
        if (path == "/api/laminate/analyze") return analyze(body);
        if (path == "/api/laminate/sweep") return sweep(body);
    }
    return api_error(404, "not_found", "no route for " + std::string(method) + " " + std::string(path));
}

ListenAddress parse_listen(std::string_view text) {
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0)
        throw ValidationError("invalid_listen", "listen address must be host:port", std::string(text));
    ListenAddress addr;
    addr.host = std::string(text.substr(0, colon));
    const auto port = text.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), addr.port);
    if (ec != std::errc{} || ptr != port.data() + port.size() || addr.port < 0 || addr.port > 65535)
        throw ValidationError("invalid_listen", "bad port in '" + std::string(text) + "'",
                              std::string(text));
    return addr;
}

struct Server::Impl {
    explicit Impl(Api a) : api(std::move(a)) {}

    Api api;
    httplib::Server http;
    std::string host;

    void cors(const httplib::Request& req, httplib::Response& res) const {
        if (!req.has_header("Origin")) return;
        const auto origin = req.get_header_value("Origin");
        const auto h = origin_host(origin);
        if (!h) return;
        const bool local = *h == "localhost" || *h == "127.0.0.1" || *h == "[::1]" || *h == host;
        if (!local) return;
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Vary", "Origin");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    }

    void handle(const httplib::Request& req, httplib::Response& res) const {
        const Response r = api.dispatch(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
        cors(req, res);
    }
};

Server::Server(Api api) : impl_(std::make_unique<Impl>(std::move(api))) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        impl_->handle(req, res);
    };
    impl_->http.Get(".*", handler);
    impl_->http.Post(".*", handler);
    impl_->http.Options(".*", [this](const httplib::Request& req, httplib::Response& res) {
        res.status = 204;
        impl_->cors(req, res);
    });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
    impl_->host = host;
    if (port == 0) return impl_->http.bind_to_any_port(host);
    return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool Server::listen_after_bind() { return impl_->http.listen_after_bind(); }

void Server::stop() {
    if (impl_) impl_->http.stop();
}

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace frp::service
