#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "smellcheck/model.hpp"
#include "smellcheck/smell_kind.hpp"
#include "smellcheck/store.hpp"

namespace smellcheck::sync {

// The calibration server: aggregates uploads from many clients into
// per-client stores under <root>/clients/ and serves calibrated models.
//
// Endpoints (HTTP/1.1, Content-Type application/xml):
//   POST /v1/samples          upload sample rows; 409 when any row replays
//   POST /v1/feedback         upload feedback events
//   GET  /v1/models/<smell>   latest model document, 404 before calibration
//   POST /v1/calibrate/<smell> recalibrate over the aggregate, returns model
//
// Clients identify themselves with the X-Smellcheck-Client header; the id is
// a self-declared token used only for dedup.
class Server {
public:
    explicit Server(const std::filesystem::path& store_root);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Blocks serving requests until stop().
    bool listen(const std::string& host, int port);
    // Binds an ephemeral port and serves from a background thread; returns
    // the bound port. Used by tests.
    int start_background(const std::string& host = "127.0.0.1");
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct PushResult {
    std::size_t sent = 0;
    std::size_t accepted = 0;
    std::size_t duplicates = 0;
};

// Sends sample rows past the local sync watermark. The watermark advances on
// 2xx and on 409 (the server already knows the replayed rows); any transport
// failure leaves it unchanged.
PushResult push_samples(const std::string& server_url, store::Store& store,
                        const SmellKind& smell, const std::string& client_id);

// Same contract for the feedback event log.
PushResult push_feedback(const std::string& server_url, store::Store& store,
                         const std::string& client_id);

// Fetches the server's latest model and stores it locally iff its version is
// newer than the local one. Returns the server model.
SmellModel pull_model(const std::string& server_url, store::Store& store,
                      const std::string& smell);

// Asks the server to recalibrate; returns the new model version.
int trigger_calibration(const std::string& server_url, const std::string& smell);

}  // namespace smellcheck::sync
