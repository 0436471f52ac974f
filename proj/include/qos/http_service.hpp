#pragma once

#include <string>
#include <thread>

#include <httplib.h>

#include "qos/service.hpp"

namespace qos {

// JSON/REST adapter for QuoteService.
//
//   POST /v1/quote          {tenant_id, job_type}
//   POST /v1/contract       {quote_id, tier}
//   GET  /v1/contracts/{id}
//   GET  /v1/cluster
//
// Business rejections (no quote, expired or consumed quote, tier that no
// longer fits) map to 409; malformed requests to 400; unknown ids to 404.
class HttpQuoteServer {
 public:
  explicit HttpQuoteServer(QuoteService& service);
  ~HttpQuoteServer();

  // Blocks serving requests until stop() is called.
  bool listen(const std::string& host, int port);

  // Binds an OS-assigned port and serves from a background thread.
  // Returns the bound port, or -1 on failure.
  int start_background(const std::string& host);

  void stop();

 private:
  void install_routes();

  QuoteService& service_;
  httplib::Server server_;
  std::thread thread_;
};

}  // namespace qos
