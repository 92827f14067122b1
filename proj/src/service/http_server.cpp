#include "fakewatch/service/http_server.hpp"

#include <httplib.h>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/strings.hpp"

namespace fakewatch::service {

HttpServer::HttpServer(const ApiService& api) : api_(api), server_(std::make_unique<httplib::Server>()) {
  auto adapt = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    r.body = req.body;
    for (const auto& [k, v] : req.headers) r.headers[to_lower(k)] = v;
    ApiResponse out = api_.handle(r);
    res.status = out.status;
    for (const auto& [k, v] : out.headers) {
      if (k != "Content-Type") res.set_header(k, v);
    }
    if (out.status != 204) res.set_content(out.body, "application/json");
  };
  server_->Get("/api/.*", adapt);
  server_->Post("/api/.*", adapt);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (port_ <= 0) throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void HttpServer::wait() {
  if (thread_.joinable()) thread_.join();
}

}  // namespace fakewatch::service
