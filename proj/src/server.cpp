#include "semiqm/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <set>

namespace semiqm::server {

namespace {

void set_recv_timeout(int fd, int timeout_ms) {
    timeval tv{};
    tv.tv_sec = timeout_ms / 1000;
    tv.tv_usec = (timeout_ms % 1000) * 1000;
    setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

bool write_all(int fd, const std::string& data) {
    size_t off = 0;
    while (off < data.size()) {
        ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
        if (n <= 0) return false;
        off += static_cast<size_t>(n);
    }
    return true;
}

}  // namespace

BankServer::BankServer(bank::Bank& bank, const std::string& host, int port) : bank_(bank) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
    int one = 1;
    setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        throw std::runtime_error("bad listen address: " + host);
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
        ::listen(listen_fd_, 16) != 0) {
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    }
    socklen_t len = sizeof(addr);
    getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    accept_thread_ = std::thread([this] { accept_loop(); });
}

BankServer::~BankServer() {
    stop();
}

void BankServer::stop() {
    if (stopping_.exchange(true)) return;
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    std::vector<std::thread> workers;
    {
        std::lock_guard lock(workers_mu_);
        workers.swap(workers_);
        // Kick any worker still blocked in recv.
        for (int fd : live_fds_) ::shutdown(fd, SHUT_RDWR);
    }
    for (auto& t : workers) {
        if (t.joinable()) t.join();
    }
}

void BankServer::accept_loop() {
    while (!stopping_) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) break;
        std::lock_guard lock(workers_mu_);
        live_fds_.insert(fd);
        workers_.emplace_back([this, fd] { serve_connection(fd); });
    }
}

void BankServer::serve_connection(int fd) {
    set_recv_timeout(fd, bank_.config().timeout_ms);
    std::set<std::string> sessions_seen;
    std::string buffer;
    char chunk[4096];
    bool closing = false;
    while (!closing && !stopping_) {
        size_t newline = buffer.find('\n');
        if (newline == std::string::npos) {
            ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
            if (n <= 0) break;  // closed or timed out
            buffer.append(chunk, static_cast<size_t>(n));
            continue;
        }
        std::string line = buffer.substr(0, newline + 1);
        buffer.erase(0, newline + 1);
        try {
            wire::WireMessage msg = wire::decode(line);
            sessions_seen.insert(msg.session);
            for (const wire::WireMessage& reply : bank_.on_message(msg)) {
                if (!write_all(fd, wire::encode(reply))) {
                    closing = true;
                    break;
                }
            }
        } catch (const DecodeError& e) {
            wire::WireMessage err{"0000000000000000", 0, wire::MsgType::Error,
                                  wire::to_json(wire::ErrorBody{e.what()})};
            write_all(fd, wire::encode(err));
            closing = true;
        } catch (const lightning::StorageError&) {
            // Fail closed: no reply when the spend could not be made durable.
            closing = true;
        }
    }
    for (const std::string& s : sessions_seen) bank_.drop_session(s);
    {
        std::lock_guard lock(workers_mu_);
        live_fds_.erase(fd);
    }
    ::close(fd);
}

SocketTransport SocketTransport::connect(const std::string& host, int port, int timeout_ms) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw wire::ProtocolError("socket() failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw wire::ProtocolError("bad bank address: " + host);
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        throw wire::ProtocolError("cannot connect to bank at " + host + ":" +
                                  std::to_string(port));
    }
    set_recv_timeout(fd, timeout_ms);
    return SocketTransport(fd);
}

SocketTransport::~SocketTransport() {
    if (fd_ >= 0) ::close(fd_);
}

SocketTransport::SocketTransport(SocketTransport&& other) noexcept
    : fd_(other.fd_), buffer_(std::move(other.buffer_)) {
    other.fd_ = -1;
}

void SocketTransport::send(const wire::WireMessage& msg) {
    if (!write_all(fd_, wire::encode(msg))) throw wire::ProtocolError("bank connection lost");
}

wire::WireMessage SocketTransport::recv() {
    char chunk[4096];
    while (true) {
        size_t newline = buffer_.find('\n');
        if (newline != std::string::npos) {
            std::string line = buffer_.substr(0, newline + 1);
            buffer_.erase(0, newline + 1);
            return wire::decode(line);
        }
        ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
        if (n <= 0) throw wire::ProtocolError("bank connection closed");
        buffer_.append(chunk, static_cast<size_t>(n));
    }
}

}  // namespace semiqm::server
