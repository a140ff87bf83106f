// Copyright 2026 The qbafsum Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "support/fake_service.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#ifdef QBAFSUM_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

namespace qbafsum::testing {

struct FakeService::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  mutable std::mutex mutex;
  std::map<std::string, Handler> handlers;
  std::map<std::string, int> counts;
  int failures_left = 0;
  int failure_status = 500;
  std::string authorization;
};

FakeService::FakeService() : impl_(std::make_unique<Impl>()) {
  impl_->server.Post(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    Handler handler;
    {
      std::lock_guard lock(impl_->mutex);
      ++impl_->counts[req.path];
      impl_->authorization = req.get_header_value("Authorization");
      if (impl_->failures_left > 0) {
        --impl_->failures_left;
        res.status = impl_->failure_status;
        res.set_content("{}", "application/json");
        return;
      }
      auto it = impl_->handlers.find(req.path);
      if (it == impl_->handlers.end()) {
        res.status = 404;
        return;
      }
      handler = it->second;
    }
    auto [status, body] = handler(nlohmann::json::parse(req.body));
    res.status = status;
    res.set_content(body.dump(), "application/json");
  });
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  if (impl_->port <= 0) throw std::runtime_error("fake service could not bind");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

FakeService::~FakeService() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void FakeService::on(const std::string& path, Handler handler) {
  std::lock_guard lock(impl_->mutex);
  impl_->handlers[path] = std::move(handler);
}

void FakeService::fail_next(int count, int status) {
  std::lock_guard lock(impl_->mutex);
  impl_->failures_left = count;
  impl_->failure_status = status;
}

std::string FakeService::url(const std::string& path) const {
  return "http://127.0.0.1:" + std::to_string(impl_->port) + path;
}

int FakeService::requests(const std::string& path) const {
  std::lock_guard lock(impl_->mutex);
  auto it = impl_->counts.find(path);
  return it == impl_->counts.end() ? 0 : it->second;
}

std::string FakeService::last_authorization() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->authorization;
}

}  // namespace qbafsum::testing
