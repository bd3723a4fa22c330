// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/wire.hpp"

#include <httplib.h>
#include <json.hpp>

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

#include "tilecraft/schedule.hpp"

namespace tilecraft::wire {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxHeaderBytes = 1 << 20;

void put_f32le(std::string& out, float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
    }
}

float get_f32le(const unsigned char* p) {
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) {
        bits |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    }
    return std::bit_cast<float>(bits);
}

std::string header_line(const Header& h) {
    json j;
    j["protocol"] = h.protocol;
    if (h.error) {
        j["error"] = *h.error;
    } else {
        j["t"] = h.t;
        j["T"] = h.total_steps;
        j["count"] = h.count;
        j["h"] = h.height;
        j["w"] = h.width;
        j["d"] = h.depth;
        j["conditioning"] = h.conditioning;
    }
    return j.dump() + "\n";
}

Header parse_header(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedMessage, std::string("header is not JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("protocol") || !j["protocol"].is_string()) {
        throw Error(ErrorCode::MalformedMessage, "header lacks a protocol tag");
    }
    Header h;
    h.protocol = j["protocol"].get<std::string>();
    if (h.protocol != kProtocol) {
        throw Error(ErrorCode::ProtocolVersionMismatch,
                    "expected protocol " + std::string(kProtocol) + ", got " + h.protocol);
    }
    if (j.contains("error")) {
        h.error = j["error"].is_string() ? j["error"].get<std::string>() : j["error"].dump();
        return h;
    }
    auto field = [&](const char* key, int& out) {
        if (!j.contains(key) || !j[key].is_number_integer()) {
            throw Error(ErrorCode::MalformedMessage, std::string("header field '") + key +
                                                         "' missing or not an integer");
        }
        const auto v = j[key].get<std::int64_t>();
        if (v < 0 || v > (1 << 24)) {
            throw Error(ErrorCode::MalformedMessage,
                        std::string("header field '") + key + "' out of range");
        }
        out = static_cast<int>(v);
    };
    field("t", h.t);
    field("T", h.total_steps);
    field("count", h.count);
    field("h", h.height);
    field("w", h.width);
    field("d", h.depth);
    if (j.contains("conditioning")) {
        if (!j["conditioning"].is_array()) {
            throw Error(ErrorCode::MalformedMessage, "conditioning must be a list");
        }
        for (const auto& item : j["conditioning"]) {
            if (!item.is_string()) {
                throw Error(ErrorCode::MalformedMessage, "conditioning entries must be text");
            }
            h.conditioning.push_back(item.get<std::string>());
        }
    }
    const std::uint64_t total = static_cast<std::uint64_t>(h.count) * h.height * h.width * h.depth;
    if (total > (std::uint64_t{1} << 30)) {
        throw Error(ErrorCode::MalformedMessage, "declared payload is too large");
    }
    return h;
}

std::string normalize_endpoint(std::string endpoint) {
    if (endpoint.find("://") == std::string::npos) {
        endpoint = "http://" + endpoint;
    }
    while (!endpoint.empty() && endpoint.back() == '/') {
        endpoint.pop_back();
    }
    return endpoint;
}

} // namespace

std::size_t Header::payload_floats() const {
    if (error) {
        return 0;
    }
    return static_cast<std::size_t>(count) * static_cast<std::size_t>(height) *
           static_cast<std::size_t>(width) * static_cast<std::size_t>(depth);
}

std::string encode(const Message& message) {
    std::string out = header_line(message.header);
    out.reserve(out.size() + message.payload.size() * 4);
    for (float v : message.payload) {
        put_f32le(out, v);
    }
    return out;
}

Message decode(std::string_view bytes) {
    const auto newline = bytes.find('\n');
    if (newline == std::string_view::npos) {
        throw Error(ErrorCode::MalformedMessage, "no header line terminator");
    }
    Message m;
    m.header = parse_header(bytes.substr(0, newline));
    const std::string_view body = bytes.substr(newline + 1);
    const std::size_t expected = m.header.payload_floats();
    if (body.size() != expected * 4) {
        throw Error(ErrorCode::ShapeMismatch, "payload has " + std::to_string(body.size()) +
                                                  " bytes, header declares " +
                                                  std::to_string(expected * 4));
    }
    m.payload.resize(expected);
    const auto* p = reinterpret_cast<const unsigned char*>(body.data());
    for (std::size_t i = 0; i < expected; ++i) {
        m.payload[i] = get_f32le(p + 4 * i);
    }
    return m;
}

Message read_message(std::istream& in) {
    std::string line;
    char c = 0;
    while (in.get(c) && c != '\n') {
        line.push_back(c);
        if (line.size() > kMaxHeaderBytes) {
            throw Error(ErrorCode::MalformedMessage, "header line too long");
        }
    }
    if (c != '\n') {
        throw Error(ErrorCode::Transport, "stream ended before a complete header");
    }
    Message m;
    m.header = parse_header(line);
    const std::size_t n = m.header.payload_floats();
    std::string raw(n * 4, '\0');
    if (n > 0 && !in.read(raw.data(), static_cast<std::streamsize>(raw.size()))) {
        throw Error(ErrorCode::ShapeMismatch, "stream ended inside the payload");
    }
    m.payload.resize(n);
    const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
    for (std::size_t i = 0; i < n; ++i) {
        m.payload[i] = get_f32le(p + 4 * i);
    }
    return m;
}

void write_message(std::ostream& out, const Message& message) {
    const std::string bytes = encode(message);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Message error_message(std::string_view text) {
    Message m;
    m.header.error = std::string(text);
    return m;
}

Message make_request(const DenoiserRequest& request) {
    Message m;
    Header& h = m.header;
    h.t = request.t;
    h.total_steps = request.total_steps;
    h.count = static_cast<int>(request.batch.size());
    if (!request.batch.empty()) {
        h.height = request.batch.front().height;
        h.width = request.batch.front().width;
        h.depth = request.batch.front().depth;
    }
    h.conditioning = request.conditioning;
    m.payload.reserve(h.payload_floats());
    for (const LatentGrid& g : request.batch) {
        if (g.height != h.height || g.width != h.width || g.depth != h.depth) {
            throw Error(ErrorCode::ShapeMismatch, "batch grids differ in shape");
        }
        for (double v : g.data) {
            m.payload.push_back(static_cast<float>(v));
        }
    }
    return m;
}

std::vector<LatentGrid> to_grids(const Message& message) {
    const Header& h = message.header;
    std::vector<LatentGrid> out;
    out.reserve(static_cast<std::size_t>(h.count));
    const std::size_t per = static_cast<std::size_t>(h.height) * h.width * h.depth;
    for (int i = 0; i < h.count; ++i) {
        LatentGrid g(h.height, h.width, h.depth);
        for (std::size_t k = 0; k < per; ++k) {
            g.data[k] = message.payload[static_cast<std::size_t>(i) * per + k];
        }
        out.push_back(std::move(g));
    }
    return out;
}

Message post_message(const std::string& endpoint, const Message& request,
                     std::chrono::milliseconds timeout) {
    httplib::Client client(normalize_endpoint(endpoint));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    const std::string body = encode(request);
    auto res = client.Post("/denoise", body, "application/octet-stream");
    if (!res) {
        const auto err = res.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
            throw Error(ErrorCode::Timeout, "no answer from " + endpoint + " (" +
                                                httplib::to_string(err) + ")");
        }
        throw Error(ErrorCode::Transport, "request to " + endpoint + " failed (" +
                                              httplib::to_string(err) + ")");
    }
    Message reply = decode(res->body);
    if (reply.header.error) {
        throw Error(ErrorCode::MalformedMessage, "server rejected the request: " + *reply.header.error);
    }
    if (res->status != 200) {
        throw Error(ErrorCode::Transport, "HTTP status " + std::to_string(res->status));
    }
    return reply;
}

RemoteDenoiser::RemoteDenoiser(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {}

std::vector<LatentGrid> RemoteDenoiser::predict_noise(const DenoiserRequest& request) {
    const Message outgoing = make_request(request);
    Message reply;
    try {
        reply = post_message(endpoint_, outgoing, timeout_);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Transport && e.code() != ErrorCode::Timeout) {
            throw;
        }
        reply = post_message(endpoint_, outgoing, timeout_);
    }
    const Header& in = reply.header;
    const Header& out = outgoing.header;
    if (in.count != out.count || in.height != out.height || in.width != out.width ||
        in.depth != out.depth) {
        throw Error(ErrorCode::ShapeMismatch,
                    "server answered " + std::to_string(in.count) + "x" + std::to_string(in.height) +
                        "x" + std::to_string(in.width) + "x" + std::to_string(in.depth) +
                        " for a " + std::to_string(out.count) + "x" + std::to_string(out.height) +
                        "x" + std::to_string(out.width) + "x" + std::to_string(out.depth) +
                        " request");
    }
    return to_grids(reply);
}

Handler echo_handler() {
    return [](const Message& request) { return request; };
}

Handler zero_handler() {
    return [](const Message& request) {
        Message reply = request;
        std::fill(reply.payload.begin(), reply.payload.end(), 0.0f);
        return reply;
    };
}

Handler denoiser_handler(Denoiser& denoiser) {
    return [&denoiser](const Message& request) {
        const Header& h = request.header;
        if (h.t < 1 || h.t > h.total_steps) {
            return error_message("timestep outside [1, T]");
        }
        const NoiseSchedule schedule = make_schedule(h.total_steps);
        const std::vector<LatentGrid> grids = to_grids(request);
        DenoiserRequest local;
        local.batch = grids;
        local.t = h.t;
        local.total_steps = h.total_steps;
        local.alpha_bar = schedule.alpha_bar(h.t);
        local.conditioning = h.conditioning;
        const std::vector<LatentGrid> eps = denoiser.predict_noise(local);
        Message reply;
        reply.header = h;
        for (const LatentGrid& g : eps) {
            for (double v : g.data) {
                reply.payload.push_back(static_cast<float>(v));
            }
        }
        return reply;
    };
}

struct Server::Impl {
    httplib::Server http;
    std::thread thread;
};

Server::Server(Handler handler) : impl_(std::make_unique<Impl>()) {
    auto respond = [handler = std::move(handler)](const httplib::Request& req, httplib::Response& res) {
        Message reply;
        try {
            reply = handler(decode(req.body));
            res.status = reply.header.error ? 400 : 200;
        } catch (const std::exception& e) {
            reply = error_message(e.what());
            res.status = 400;
        }
        res.set_content(encode(reply), "application/octet-stream");
    };
    impl_->http.Post("/denoise", respond);
}

Server::~Server() { stop(); }

int Server::start(const std::string& host, int port) {
    host_ = host;
    if (port == 0) {
        port_ = impl_->http.bind_to_any_port(host);
    } else {
        port_ = impl_->http.bind_to_port(host, port) ? port : -1;
    }
    if (port_ < 0) {
        throw Error(ErrorCode::Transport, "cannot bind " + host + ":" + std::to_string(port));
    }
    impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
    impl_->http.wait_until_ready();
    return port_;
}

void Server::stop() {
    if (impl_ && impl_->thread.joinable()) {
        impl_->http.stop();
        impl_->thread.join();
    }
}

std::string Server::endpoint() const { return "http://" + host_ + ":" + std::to_string(port_); }

} // namespace tilecraft::wire
