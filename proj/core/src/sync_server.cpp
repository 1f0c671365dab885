#include <algorithm>
#include <chrono>
#include <mutex>
#include <set>
#include <thread>

#include <httplib.h>

#include "smellcheck/calibrate.hpp"
#include "smellcheck/sync.hpp"
#include "smellcheck/xml.hpp"
#include "util.hpp"

namespace smellcheck::sync {

namespace fs = std::filesystem;

namespace {

constexpr const char* kClientHeader = "X-Smellcheck-Client";
constexpr const char* kContentType = "application/xml";

std::string sanitize_client_id(std::string id) {
    if (id.empty()) return "anonymous";
    for (char& c : id)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return id;
}

}  // namespace

struct Server::Impl {
    explicit Impl(const fs::path& root) : root(root) {
        store::Store server_store = store::Store::init(root, "server");
        config = server_store.load_config();
        setup_routes();
    }

    fs::path root;
    Config config;
    httplib::Server http;
    std::thread worker;
    // Store mutations are funneled through this lock; calibration holds it
    // for its whole snapshot-fit-save window, so concurrent uploads see 503.
    std::timed_mutex store_mutex;

    fs::path client_root(const std::string& client_id) const {
        return root / "clients" / client_id;
    }

    std::vector<std::string> client_ids() const {
        std::vector<std::string> ids;
        const fs::path dir = root / "clients";
        if (!fs::is_directory(dir)) return ids;
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.is_directory()) ids.push_back(entry.path().filename().string());
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    void respond_error(httplib::Response& res, int status, const std::string& message) {
        res.status = status;
        res.set_content("<error message=\"" + message + "\"/>\n", kContentType);
    }

    void setup_routes() {
        http.Post("/v1/samples", [this](const httplib::Request& req, httplib::Response& res) {
            handle_samples(req, res);
        });
        http.Post("/v1/feedback", [this](const httplib::Request& req, httplib::Response& res) {
            handle_feedback(req, res);
        });
        http.Get(R"(/v1/models/([A-Za-z0-9_\-]+))",
                 [this](const httplib::Request& req, httplib::Response& res) {
                     handle_get_model(req, res);
                 });
        http.Post(R"(/v1/calibrate/([A-Za-z0-9_\-]+))",
                  [this](const httplib::Request& req, httplib::Response& res) {
                      handle_calibrate(req, res);
                  });
    }

    void handle_samples(const httplib::Request& req, httplib::Response& res) {
        const std::string client = sanitize_client_id(req.get_header_value(kClientHeader));

        wire::ExchangeDocument doc;
        try {
            doc = wire::decode(req.body);
        } catch (const Error& e) {
            return respond_error(res, 400, e.what());
        }

        std::unique_lock<std::timed_mutex> lock(store_mutex, std::defer_lock);
        if (!lock.try_lock_for(std::chrono::milliseconds(250)))
            return respond_error(res, 503, "calibration in progress");

        wire::UploadResult result;
        try {
            store::Store client_store = store::Store::init(client_root(client), client);
            for (const wire::SampleSet& set : doc.samples) {
                const SmellKind* kind = config.find_smell(set.smell);
                if (!kind) return respond_error(res, 404, "unknown smell '" + set.smell + "'");

                // Server-side dedup key is (client, element, timestamp).
                std::set<std::string> seen;
                if (client_store.has_rows(set.smell))
                    for (const tagging::SampleRow& row : client_store.load_rows(set.smell))
                        seen.insert(row.element_key() + "|" + row.timestamp);

                std::vector<tagging::SampleRow> fresh;
                for (const wire::Row& wrow : set.rows) {
                    tagging::SampleRow row = wire::from_wire(wrow, kind->metric_set);
                    if (!seen.insert(row.element_key() + "|" + row.timestamp).second) {
                        ++result.duplicates;
                        continue;
                    }
                    fresh.push_back(std::move(row));
                }
                result.accepted += client_store.append_rows(*kind, fresh);
            }
        } catch (const SchemaMismatch& e) {
            return respond_error(res, 400, e.what());
        } catch (const Error& e) {
            return respond_error(res, 400, e.what());
        }

        res.status = result.duplicates > 0 ? 409 : 200;
        res.set_content(wire::encode_result(result), kContentType);
    }

    void handle_feedback(const httplib::Request& req, httplib::Response& res) {
        const std::string client = sanitize_client_id(req.get_header_value(kClientHeader));

        wire::ExchangeDocument doc;
        try {
            doc = wire::decode(req.body);
        } catch (const Error& e) {
            return respond_error(res, 400, e.what());
        }

        std::unique_lock<std::timed_mutex> lock(store_mutex, std::defer_lock);
        if (!lock.try_lock_for(std::chrono::milliseconds(250)))
            return respond_error(res, 503, "calibration in progress");

        wire::UploadResult result;
        try {
            store::Store client_store = store::Store::init(client_root(client), client);
            std::set<std::string> seen;
            for (const store::FeedbackEvent& ev : client_store.load_feedback())
                seen.insert(ev.timestamp + "|" + ev.class_name + "|" + ev.method);
            for (const wire::FeedbackEvent& ev : doc.feedback) {
                if (config.find_smell(ev.smell) == nullptr)
                    return respond_error(res, 404, "unknown smell '" + ev.smell + "'");
                if (!seen.insert(ev.timestamp + "|" + ev.class_name + "|" + ev.method).second) {
                    ++result.duplicates;
                    continue;
                }
                client_store.log_feedback({ev.timestamp, ev.smell, ev.application,
                                           ev.package_name, ev.class_name, ev.method, ev.verdict});
                ++result.accepted;
            }
        } catch (const Error& e) {
            return respond_error(res, 400, e.what());
        }

        res.status = result.duplicates > 0 ? 409 : 200;
        res.set_content(wire::encode_result(result), kContentType);
    }

    void handle_get_model(const httplib::Request& req, httplib::Response& res) {
        const std::string smell = req.matches[1];
        if (config.find_smell(smell) == nullptr)
            return respond_error(res, 404, "unknown smell '" + smell + "'");
        store::Store server_store = store::Store::open(root);
        if (!server_store.has_model(smell))
            return respond_error(res, 404, "no model calibrated for '" + smell + "'");

        wire::ExchangeDocument doc;
        doc.model = server_store.load_model(smell);
        res.status = 200;
        res.set_content(wire::encode(doc), kContentType);
    }

    void handle_calibrate(const httplib::Request& req, httplib::Response& res) {
        const std::string smell_name = req.matches[1];
        const SmellKind* kind = config.find_smell(smell_name);
        if (!kind) return respond_error(res, 404, "unknown smell '" + smell_name + "'");

        std::unique_lock<std::timed_mutex> lock(store_mutex, std::defer_lock);
        if (!lock.try_lock_for(std::chrono::milliseconds(250)))
            return respond_error(res, 503, "calibration in progress");

        try {
            // Aggregate snapshot: all clients' rows in sorted client order.
            std::vector<tagging::SampleRow> all_rows;
            for (const std::string& client : client_ids()) {
                store::Store client_store = store::Store::open(client_root(client));
                if (!client_store.has_rows(smell_name)) continue;
                const std::vector<tagging::SampleRow> rows = client_store.load_rows(smell_name);
                all_rows.insert(all_rows.end(), rows.begin(), rows.end());
            }
            if (all_rows.empty())
                return respond_error(res, 409, "no samples uploaded for '" + smell_name + "'");

            store::Store server_store = store::Store::open(root);
            blr::CalibrateOptions opts;
            if (req.has_param("ridge")) opts.ridge = std::stod(req.get_param_value("ridge"));
            if (req.has_param("alpha")) opts.alpha = std::stod(req.get_param_value("alpha"));
            if (req.has_param("strict")) opts.strict = req.get_param_value("strict") == "1";
            if (req.has_param("criterion") && req.get_param_value("criterion") == "lr")
                opts.criterion = blr::SelectionCriterion::lr;
            if (server_store.has_model(smell_name))
                opts.prior_version = server_store.load_model(smell_name).version;

            const SmellModel model =
                blr::calibrate(store::rows_to_table(all_rows, *kind), *kind, opts);
            server_store.save_model(model);

            wire::ExchangeDocument doc;
            doc.model = model;
            res.status = 200;
            res.set_content(wire::encode(doc), kContentType);
        } catch (const Error& e) {
            respond_error(res, 409, std::string("calibration failed: ") + e.what());
        }
    }
};

Server::Server(const fs::path& store_root) : impl_(std::make_unique<Impl>(store_root)) {}

Server::~Server() { stop(); }

bool Server::listen(const std::string& host, int port) { return impl_->http.listen(host, port); }

int Server::start_background(const std::string& host) {
    const int port = impl_->http.bind_to_any_port(host);
    if (port <= 0) throw NetworkError("cannot bind server socket on " + host);
    impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
    impl_->http.wait_until_ready();
    return port;
}

void Server::stop() {
    if (!impl_) return;
    impl_->http.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace smellcheck::sync
