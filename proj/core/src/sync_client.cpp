#include <httplib.h>

#include "smellcheck/sync.hpp"
#include "smellcheck/xml.hpp"

namespace smellcheck::sync {

namespace {

constexpr const char* kClientHeader = "X-Smellcheck-Client";
constexpr const char* kContentType = "application/xml";

httplib::Client make_client(const std::string& server_url) {
    httplib::Client cli(server_url);
    cli.set_connection_timeout(5);
    cli.set_read_timeout(30);
    return cli;
}

wire::UploadResult post_document(const std::string& server_url, const std::string& path,
                                 const wire::ExchangeDocument& doc, const std::string& client_id,
                                 bool* replayed) {
    httplib::Client cli = make_client(server_url);
    httplib::Headers headers = {{kClientHeader, client_id}};
    const httplib::Result res = cli.Post(path, headers, wire::encode(doc), kContentType);
    if (!res)
        throw NetworkError("cannot reach " + server_url + ": " + httplib::to_string(res.error()));
    if (res->status == 200 || res->status == 409) {
        *replayed = res->status == 409;
        return wire::decode_result(res->body);
    }
    throw Error("server rejected upload (" + std::to_string(res->status) + "): " + res->body);
}

}  // namespace

PushResult push_samples(const std::string& server_url, store::Store& store,
                        const SmellKind& smell, const std::string& client_id) {
    const std::string watermark_key = "samples." + smell.name;
    const long mark = store.watermark(watermark_key);

    std::vector<tagging::SampleRow> rows;
    if (store.has_rows(smell.name)) rows = store.load_rows(smell.name);
    if (mark >= static_cast<long>(rows.size())) return {};  // nothing new, no request

    wire::ExchangeDocument doc;
    wire::SampleSet set;
    set.smell = smell.name;
    for (std::size_t i = static_cast<std::size_t>(mark); i < rows.size(); ++i)
        set.rows.push_back(wire::to_wire(rows[i], smell.metric_set));
    doc.samples.push_back(std::move(set));

    PushResult result;
    result.sent = rows.size() - static_cast<std::size_t>(mark);
    bool replayed = false;
    const wire::UploadResult ack =
        post_document(server_url, "/v1/samples", doc, client_id, &replayed);
    result.accepted = ack.accepted;
    result.duplicates = ack.duplicates;
    // Replayed rows are server-known; the watermark may advance past them.
    store.set_watermark(watermark_key, static_cast<long>(rows.size()));
    return result;
}

PushResult push_feedback(const std::string& server_url, store::Store& store,
                         const std::string& client_id) {
    const long mark = store.watermark("feedback");
    const std::vector<store::FeedbackEvent> events = store.load_feedback();
    if (mark >= static_cast<long>(events.size())) return {};

    wire::ExchangeDocument doc;
    for (std::size_t i = static_cast<std::size_t>(mark); i < events.size(); ++i) {
        const store::FeedbackEvent& ev = events[i];
        doc.feedback.push_back({ev.smell, ev.application, ev.package_name, ev.class_name,
                                ev.method, ev.verdict, ev.timestamp});
    }

    PushResult result;
    result.sent = events.size() - static_cast<std::size_t>(mark);
    bool replayed = false;
    const wire::UploadResult ack =
        post_document(server_url, "/v1/feedback", doc, client_id, &replayed);
    result.accepted = ack.accepted;
    result.duplicates = ack.duplicates;
    store.set_watermark("feedback", static_cast<long>(events.size()));
    return result;
}

SmellModel pull_model(const std::string& server_url, store::Store& store,
                      const std::string& smell) {
    httplib::Client cli = make_client(server_url);
    const httplib::Result res = cli.Get("/v1/models/" + smell);
    if (!res)
        throw NetworkError("cannot reach " + server_url + ": " + httplib::to_string(res.error()));
    if (res->status == 404) throw NoServerModel("server has no model for '" + smell + "'");
    if (res->status != 200)
        throw Error("server error (" + std::to_string(res->status) + "): " + res->body);

    const wire::ExchangeDocument doc = wire::decode(res->body);
    if (!doc.model) throw WireError("server response carries no <model>");

    const bool newer = !store.has_model(smell) || doc.model->version > store.load_model(smell).version;
    if (newer) store.save_model(*doc.model);
    return *doc.model;
}

int trigger_calibration(const std::string& server_url, const std::string& smell) {
    httplib::Client cli = make_client(server_url);
    const httplib::Result res = cli.Post("/v1/calibrate/" + smell, "", kContentType);
    if (!res)
        throw NetworkError("cannot reach " + server_url + ": " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw Error("server calibration failed (" + std::to_string(res->status) + "): " +
                    res->body);
    const wire::ExchangeDocument doc = wire::decode(res->body);
    if (!doc.model) throw WireError("calibration response carries no <model>");
    return doc.model->version;
}

}  // namespace smellcheck::sync
