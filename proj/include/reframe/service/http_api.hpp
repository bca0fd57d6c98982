#pragma once

#include <string>

#include "reframe/service/service.hpp"

namespace httplib {
class Server;
}

namespace reframe::service {

/// Mounts the /api/v1 routes on `server`. The service must outlive it.
void mount_api(httplib::Server& server, Service& service);

/// Blocks serving the API until the process is stopped.
void serve(Service& service, const std::string& host, int port);

}  // namespace reframe::service
