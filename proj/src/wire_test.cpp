// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "tilecraft/schedule.hpp"
#include "tilecraft/wire.hpp"

using namespace tilecraft;
using namespace tilecraft::wire;

namespace {

Message sample_message() {
    Message m;
    m.header.t = 7;
    m.header.total_steps = 50;
    m.header.count = 2;
    m.header.height = 3;
    m.header.width = 2;
    m.header.depth = 1;
    m.header.conditioning = {"a \"forest\"", "désert"};
    std::mt19937 rng(1);
    std::normal_distribution<float> nd;
    for (int i = 0; i < 12; ++i) m.payload.push_back(nd(rng));
    m.payload[3] = -0.0f;
    m.payload[4] = 1e-42f; // subnormal
    return m;
}

} // namespace

TEST_CASE("encoding: sorted JSON header line then little-endian float32") {
    Message m;
    m.header.t = 1;
    m.header.total_steps = 2;
    m.header.count = 1;
    m.header.height = 1;
    m.header.width = 2;
    m.header.depth = 1;
    m.header.conditioning = {"x"};
    m.payload = {1.0f, -2.5f};
    const std::string bytes = encode(m);
    const std::string header =
        "{\"T\":2,\"conditioning\":[\"x\"],\"count\":1,\"d\":1,\"h\":1,\"protocol\":\"td/1\",\"t\":1,\"w\":2}\n";
    REQUIRE(bytes.size() == header.size() + 8);
    CHECK(bytes.substr(0, header.size()) == header);
    const unsigned char one[4] = {0x00, 0x00, 0x80, 0x3F};
    const unsigned char minus[4] = {0x00, 0x00, 0x20, 0xC0};
    CHECK(std::memcmp(bytes.data() + header.size(), one, 4) == 0);
    CHECK(std::memcmp(bytes.data() + header.size() + 4, minus, 4) == 0);
}

TEST_CASE("decode inverts encode bit for bit") {
    const Message m = sample_message();
    const Message back = decode(encode(m));
    CHECK(back.header.conditioning == m.header.conditioning);
    CHECK(back.header.t == 7);
    REQUIRE(back.payload.size() == m.payload.size());
    CHECK(std::memcmp(back.payload.data(), m.payload.data(), 4 * m.payload.size()) == 0);

    std::stringstream stream;
    write_message(stream, m);
    write_message(stream, error_message("boom"));
    const Message first = read_message(stream);
    const Message second = read_message(stream);
    CHECK(std::memcmp(first.payload.data(), m.payload.data(), 4 * m.payload.size()) == 0);
    REQUIRE(second.header.error.has_value());
    CHECK(*second.header.error == "boom");
}

TEST_CASE("decode failures") {
    auto code_of = [](const std::string& bytes) {
        try {
            decode(bytes);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io; // sentinel: no error
    };
    const std::string good = encode(sample_message());
    CHECK(code_of(good.substr(0, good.size() - 1)) == ErrorCode::ShapeMismatch);
    CHECK(code_of(good + "xxxx") == ErrorCode::ShapeMismatch);
    CHECK(code_of("not json\n") == ErrorCode::MalformedMessage);
    CHECK(code_of("{\"protocol\":\"td/1\"}") == ErrorCode::MalformedMessage); // no newline
    CHECK(code_of("{\"protocol\":\"td/2\",\"t\":1}\n") == ErrorCode::ProtocolVersionMismatch);
    CHECK(code_of("{\"protocol\":\"td/1\",\"t\":1}\n") == ErrorCode::MalformedMessage);
    CHECK(code_of("{\"protocol\":\"td/1\",\"t\":1,\"T\":1,\"count\":-1,\"h\":1,\"w\":1,\"d\":1}\n") ==
          ErrorCode::MalformedMessage);

    std::stringstream truncated(good.substr(0, good.size() - 3));
    CHECK_THROWS_AS(read_message(truncated), Error);
}

TEST_CASE("loopback echo is bit exact through the HTTP transport") {
    Server server(echo_handler());
    server.start();
    const Message m = sample_message();
    const Message reply = post_message(server.endpoint(), m, std::chrono::seconds(5));
    CHECK(std::memcmp(reply.payload.data(), m.payload.data(), 4 * m.payload.size()) == 0);
    CHECK(reply.header.conditioning == m.header.conditioning);

    RemoteDenoiser remote(server.endpoint());
    std::vector<LatentGrid> batch{LatentGrid(3, 4, 2, 0.25), LatentGrid(3, 4, 2, -1.5)};
    DenoiserRequest req{batch, 3, 10, 0.5, {"a", "b"}, 0};
    const auto out = remote.predict_noise(req);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == batch[0]);
    CHECK(out[1] == batch[1]);
    server.stop();
}

TEST_CASE("a server that answers the wrong shape is rejected") {
    Server server([](const Message& request) {
        Message reply = request;
        reply.header.width += 1;
        reply.payload.resize(reply.header.payload_floats());
        return reply;
    });
    server.start();
    RemoteDenoiser remote(server.endpoint());
    std::vector<LatentGrid> batch{LatentGrid(2, 2, 1)};
    DenoiserRequest req{batch, 1, 1, 0.5, {"a"}, 0};
    try {
        remote.predict_noise(req);
        FAIL("expected ShapeMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ShapeMismatch);
    }
}

TEST_CASE("malformed requests get an error header, not a dropped connection") {
    Server server(zero_handler());
    server.start();
    Message bad = sample_message();
    bad.payload.pop_back(); // header now overstates the payload
    try {
        post_message(server.endpoint(), bad, std::chrono::seconds(5));
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedMessage);
        CHECK(std::string(e.what()).find("payload") != std::string::npos);
    }
    const Message zeros = post_message(server.endpoint(), sample_message(), std::chrono::seconds(5));
    for (float v : zeros.payload) CHECK(v == 0.0f);
}

TEST_CASE("denoiser handler serves a local model") {
    GaussianDenoiser local{GaussianTexturePrior{}};
    Server server(denoiser_handler(local));
    server.start();
    RemoteDenoiser remote(server.endpoint());
    std::vector<LatentGrid> batch{LatentGrid(4, 4, 1, 0.3)};
    const NoiseSchedule s = make_schedule(10);
    DenoiserRequest req{batch, 4, 10, s.alpha_bar(4), {"a"}, 0};
    const auto got = remote.predict_noise(req);
    const auto want = local.predict_noise(req);
    for (std::size_t i = 0; i < 16; ++i) CHECK(got[0].data[i] == doctest::Approx(want[0].data[i]).epsilon(1e-6));
    req.t = 11;
    CHECK_THROWS_AS(remote.predict_noise(req), Error);
}

TEST_CASE("unreachable endpoint is a transport error") {
    int port = 0;
    {
        Server probe(echo_handler());
        port = probe.start();
    }
    RemoteDenoiser remote("127.0.0.1:" + std::to_string(port), std::chrono::milliseconds(500));
    std::vector<LatentGrid> batch{LatentGrid(2, 2, 1)};
    DenoiserRequest req{batch, 1, 1, 0.5, {"a"}, 0};
    try {
        remote.predict_noise(req);
        FAIL("expected a transport failure");
    } catch (const Error& e) {
        CHECK((e.code() == ErrorCode::Transport || e.code() == ErrorCode::Timeout));
    }
}
