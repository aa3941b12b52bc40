#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>

#include "duplex/workspace.hpp"

namespace duplex {

struct HttpRequest {
    std::string method;
    std::string path;
    // Header names are matched case-insensitively.
    std::map<std::string, std::string> headers;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::map<std::string, std::string> headers;
};

/// Session store and request router. `handle` is transport independent;
/// HttpServer puts it behind a socket.
///
/// Routes (JSON bodies unless noted):
///   POST   /sessions                          {workspace_path | workspace | session_path | session}
///   GET    /sessions/{s}
///   DELETE /sessions/{s}
///   GET    /sessions/{s}/graphs
///   GET    /sessions/{s}/graphs/{g}/filters
///   PUT    /sessions/{s}/graphs/{g}/filters   {filters: [...]}
///   PUT    /sessions/{s}/selection            {graph, nodes, edges}
///   GET    /sessions/{s}/highlight
///   POST   /sessions/{s}/graphs/{g}/layout    {algo, seed, iterations, cooling, ordering, canvas}
///   GET    /sessions/{s}/graphs/{g}/layout
///   PUT    /sessions/{s}/graphs/{g}/positions {positions: {id: [x, y]}} | {pan: [dx, dy]}
///   PUT    /sessions/{s}/graphs/{g}/lens      {enabled, focus, radius, magnification}
///   GET    /sessions/{s}/graphs/{g}/view
///   GET    /sessions/{s}/graphs/{g}/export.svg
///   PUT    /sessions/{s}/styles               partial style object
///   GET    /sessions/{s}/session.json
///   POST   /sessions/{s}/save                 {path}
/// Mutations bump the session revision and return it; an `If-Match`
/// header carrying another revision yields 409. Responses carry the
/// revision as ETag. Errors are {code, message, detail}.
class Service {
public:
    Service();
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    HttpResponse handle(const HttpRequest& request);

    std::size_t session_count() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds and serves on a background thread. Port 0 picks a free port.
    /// Returns the bound port.
    int start(const std::string& host, int port);
    /// Blocks until the server started by start() stops.
    void wait();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Splits "host:port" (port required). Throws InvalidArgument.
std::pair<std::string, int> parse_address(const std::string& address);

} // namespace duplex
