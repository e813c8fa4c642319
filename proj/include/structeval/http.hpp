#pragma once

// Minimal JSON-over-HTTP POST used by the embedding and completion clients.

#include <chrono>
#include <semaphore>
#include <string>
#include <string_view>

#include <httplib.h>

#include "structeval/errors.hpp"
#include "structeval/json.hpp"

namespace structeval::http {

/// `scheme://host[:port]` plus the request path.
struct Endpoint {
    std::string origin;
    std::string path = "/";
};

/// Splits an http(s) URL into origin and path. Throws std::invalid_argument
/// on anything that is not an absolute http(s) URL.
inline Endpoint parse_endpoint(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) throw std::invalid_argument("endpoint must be an absolute URL: " + std::string(url));
    const auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw std::invalid_argument("unsupported URL scheme: " + std::string(scheme));
    const auto path_start = url.find('/', scheme_end + 3);
    Endpoint ep;
    if (path_start == std::string_view::npos) {
        ep.origin = std::string(url);
    } else {
        ep.origin = std::string(url.substr(0, path_start));
        ep.path = std::string(url.substr(path_start));
    }
    if (ep.origin.size() <= scheme_end + 3) throw std::invalid_argument("endpoint has no host: " + std::string(url));
    return ep;
}

/// POSTs a JSON body and parses the JSON reply. Connection failures and
/// timeouts raise TransportError; a non-2xx status or an unparsable body
/// raises MalformedResponse.
inline JsonValue post_json(const Endpoint& ep, const JsonValue& body, std::chrono::milliseconds timeout) {
    httplib::Client client(ep.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    auto res = client.Post(ep.path, serialize_canonical(body), "application/json");
    if (!res) {
        throw TransportError("request to " + ep.origin + ep.path + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw MalformedResponse("request to " + ep.origin + ep.path + " returned HTTP " + std::to_string(res->status));
    }
    try {
        return parse_strict(res->body);
    } catch (const ParseError& e) {
        throw MalformedResponse(std::string("response body is not JSON: ") + e.what());
    }
}

/// Caps the number of concurrent requests issued through one client.
class RequestGate {
public:
    explicit RequestGate(std::ptrdiff_t max_in_flight) : slots_(max_in_flight < 1 ? 1 : max_in_flight) {}

    class Ticket {
    public:
        explicit Ticket(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
        ~Ticket() { s_.release(); }
        Ticket(const Ticket&) = delete;
        Ticket& operator=(const Ticket&) = delete;

    private:
        std::counting_semaphore<>& s_;
    };

    Ticket enter() { return Ticket(slots_); }

private:
    std::counting_semaphore<> slots_;
};

}  // namespace structeval::http
