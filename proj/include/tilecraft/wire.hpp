// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// td/1 remote denoiser protocol.
//
// A message is one JSON header line terminated by LF, followed by the payload:
// count*h*w*d little-endian IEEE-754 float32 values in (image, row, col, channel)
// order. Request header:
//
//   {"protocol":"td/1","t":25,"T":50,"count":2,"h":64,"w":96,"d":4,"conditioning":["..",".."]}
//
// The response mirrors the header and carries the predicted noise. A server that
// cannot answer replies with {"protocol":"td/1","error":"..."} and no payload.
// Over HTTP the message is the body of POST /denoise.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tilecraft/denoiser.hpp"
#include "tilecraft/latent.hpp"

namespace tilecraft::wire {

inline constexpr std::string_view kProtocol = "td/1";

struct Header {
    std::string protocol{kProtocol};
    int t = 0;
    int total_steps = 0;
    int count = 0;
    int height = 0;
    int width = 0;
    int depth = 0;
    std::vector<std::string> conditioning;
    std::optional<std::string> error;

    std::size_t payload_floats() const;
};

struct Message {
    Header header;
    std::vector<float> payload;
};

/// Header line + payload bytes.
std::string encode(const Message& message);

/// Parse a complete message. Throws MalformedMessage for bad framing or JSON,
/// ProtocolVersionMismatch for a foreign protocol tag, ShapeMismatch when the payload
/// length disagrees with the header.
Message decode(std::string_view bytes);

/// Stream framing: read exactly one message (header line, then the declared payload).
Message read_message(std::istream& in);
void write_message(std::ostream& out, const Message& message);

Message error_message(std::string_view text);

Message make_request(const DenoiserRequest& request);
std::vector<LatentGrid> to_grids(const Message& message);

/// Denoiser that forwards each request to a td/1 server over HTTP POST /denoise.
/// Each call has a timeout and is retried once on transport failure or timeout.
class RemoteDenoiser final : public Denoiser {
public:
    explicit RemoteDenoiser(std::string endpoint,
                            std::chrono::milliseconds timeout = std::chrono::seconds(30));

    std::vector<LatentGrid> predict_noise(const DenoiserRequest& request) override;

    const std::string& endpoint() const { return endpoint_; }

private:
    std::string endpoint_;
    std::chrono::milliseconds timeout_;
};

/// One round trip; no retry.
Message post_message(const std::string& endpoint, const Message& request,
                     std::chrono::milliseconds timeout);

using Handler = std::function<Message(const Message&)>;

/// Returns the request payload unchanged.
Handler echo_handler();
/// Returns an all-zero prediction.
Handler zero_handler();
/// Serves a local denoiser; abar_t is derived from (t, T) with the linear-beta schedule.
Handler denoiser_handler(Denoiser& denoiser);

/// In-process td/1 HTTP server, used for loopback testing and local serving.
class Server {
public:
    explicit Server(Handler handler);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Bind (port 0 picks a free port) and serve on a background thread.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();

    int port() const { return port_; }
    std::string endpoint() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
    std::string host_;
};

} // namespace tilecraft::wire
