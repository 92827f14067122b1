#pragma once

#include <memory>
#include <string>
#include <thread>

#include "fakewatch/service/api.hpp"

namespace httplib {
class Server;
}

namespace fakewatch::service {

// Serves ApiService over HTTP/1.1 on a background thread.
class HttpServer {
 public:
  explicit HttpServer(const ApiService& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // port 0 picks a free port. Throws kIo when binding fails.
  int start(const std::string& host, int port);
  void stop();
  // Blocks until stop() is called from elsewhere.
  void wait();
  int port() const { return port_; }

 private:
  const ApiService& api_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace fakewatch::service
