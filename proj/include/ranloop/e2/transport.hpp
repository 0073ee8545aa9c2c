#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "ranloop/e2/wire.hpp"

// Stream-socket transport: length-prefixed frames over TCP, RIC side
// listening. Sockets are non-blocking; senders serialize whole frames so
// partial frames never interleave.

namespace ranloop::e2 {

class TransportError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Reassembles frames from an arbitrary byte stream (prefix-safe).
class FrameBuffer {
  public:
    void feed(std::span<const uint8_t> data);
    // Next complete frame, if any. Throws ProtocolError on corruption.
    std::optional<Frame> next();
    size_t buffered() const { return buf_.size(); }

  private:
    Bytes buf_;
};

// RAII framed TCP connection.
class Connection {
  public:
    Connection() = default;
    explicit Connection(int fd);
    ~Connection();
    Connection(Connection&& other) noexcept;
    Connection& operator=(Connection&& other) noexcept;
    Connection(const Connection&) = delete;
    Connection& operator=(const Connection&) = delete;

    static Connection connect_to(const std::string& host, uint16_t port);

    bool open() const { return fd_ >= 0; }
    int fd() const { return fd_; }
    void close();

    // Writes the whole frame, waiting for writability as needed.
    void send_frame(std::span<const uint8_t> frame_bytes);

    // Reads whatever is available without blocking and returns completed
    // frames. Returns false once the peer has closed. Throws ProtocolError
    // on stream corruption.
    bool poll_frames(std::vector<Frame>& out);

    // Blocks up to timeout_ms for at least one frame (-1 = forever).
    // Returns frames received; empty on timeout or close.
    std::vector<Frame> wait_frames(int timeout_ms);

  private:
    int fd_ = -1;
    FrameBuffer rx_;
};

class Listener {
  public:
    // port 0 binds an ephemeral port on 127.0.0.1.
    explicit Listener(uint16_t port);
    ~Listener();
    Listener(const Listener&) = delete;
    Listener& operator=(const Listener&) = delete;

    uint16_t port() const { return port_; }
    int fd() const { return fd_; }

    // Non-blocking accept; nullopt when no connection is pending.
    std::optional<Connection> accept_conn();

  private:
    int fd_ = -1;
    uint16_t port_ = 0;
};

inline constexpr uint16_t kDefaultRicPort = 36421;

}  // namespace ranloop::e2
