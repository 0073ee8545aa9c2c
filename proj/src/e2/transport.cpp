#include "ranloop/e2/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace ranloop::e2 {

void FrameBuffer::feed(std::span<const uint8_t> data) {
    buf_.insert(buf_.end(), data.begin(), data.end());
}

std::optional<Frame> FrameBuffer::next() {
    DecodeResult res = decode_frame(buf_);
    if (std::holds_alternative<NeedMore>(res)) return std::nullopt;
    auto& done = std::get<DecodedFrame>(res);
    Frame f = std::move(done.frame);
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<long>(done.consumed));
    return f;
}

namespace {

void set_nonblocking(int fd) {
    int flags = fcntl(fd, F_GETFL, 0);
    fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

void wait_fd(int fd, short events, int timeout_ms) {
    struct pollfd pfd{fd, events, 0};
    ::poll(&pfd, 1, timeout_ms);
}

}  // namespace

Connection::Connection(int fd) : fd_(fd) {
    set_nonblocking(fd_);
    int one = 1;
    setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

Connection::~Connection() { close(); }

Connection::Connection(Connection&& other) noexcept : fd_(other.fd_), rx_(std::move(other.rx_)) {
    other.fd_ = -1;
}

Connection& Connection::operator=(Connection&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        rx_ = std::move(other.rx_);
        other.fd_ = -1;
    }
    return *this;
}

void Connection::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

Connection Connection::connect_to(const std::string& host, uint16_t port) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError("socket: " + std::string(strerror(errno)));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw TransportError("bad address: " + host);
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        int err = errno;
        ::close(fd);
        throw TransportError("connect " + host + ":" + std::to_string(port) + ": " +
                             strerror(err));
    }
    return Connection(fd);
}

void Connection::send_frame(std::span<const uint8_t> frame_bytes) {
    if (fd_ < 0) throw TransportError("send on closed connection");
    size_t sent = 0;
    while (sent < frame_bytes.size()) {
        ssize_t n = ::send(fd_, frame_bytes.data() + sent, frame_bytes.size() - sent,
                           MSG_NOSIGNAL);
        if (n > 0) {
            sent += static_cast<size_t>(n);
            continue;
        }
        if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
            wait_fd(fd_, POLLOUT, 1000);
            continue;
        }
        if (n < 0 && errno == EINTR) continue;
        throw TransportError("send: " + std::string(strerror(errno)));
    }
}

bool Connection::poll_frames(std::vector<Frame>& out) {
    if (fd_ < 0) return false;
    uint8_t chunk[4096];
    while (true) {
        ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
        if (n > 0) {
            rx_.feed({chunk, static_cast<size_t>(n)});
            continue;
        }
        if (n == 0) {
            while (auto f = rx_.next()) out.push_back(std::move(*f));
            return false;  // peer closed
        }
        if (errno == EAGAIN || errno == EWOULDBLOCK) break;
        if (errno == EINTR) continue;
        throw TransportError("recv: " + std::string(strerror(errno)));
    }
    while (auto f = rx_.next()) out.push_back(std::move(*f));
    return true;
}

std::vector<Frame> Connection::wait_frames(int timeout_ms) {
    std::vector<Frame> out;
    if (fd_ < 0) return out;
    while (auto f = rx_.next()) out.push_back(std::move(*f));
    if (!out.empty()) return out;
    wait_fd(fd_, POLLIN, timeout_ms);
    poll_frames(out);
    return out;
}

Listener::Listener(uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw TransportError("socket: " + std::string(strerror(errno)));
    int one = 1;
    setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        int err = errno;
        ::close(fd_);
        throw TransportError("bind port " + std::to_string(port) + ": " + strerror(err));
    }
    if (::listen(fd_, 16) < 0) {
        int err = errno;
        ::close(fd_);
        throw TransportError("listen: " + std::string(strerror(err)));
    }
    socklen_t len = sizeof(addr);
    getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    set_nonblocking(fd_);
}

Listener::~Listener() {
    if (fd_ >= 0) ::close(fd_);
}

std::optional<Connection> Listener::accept_conn() {
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) {
        if (errno == EAGAIN || errno == EWOULDBLOCK) return std::nullopt;
        throw TransportError("accept: " + std::string(strerror(errno)));
    }
    return Connection(fd);
}

}  // namespace ranloop::e2
