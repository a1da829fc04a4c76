#pragma once

#include <atomic>
#include <memory>
#include <set>
#include <thread>

#include "semiqm/bank.hpp"

namespace semiqm::server {

// Newline-delimited JSON over TCP, one service thread per connection. Sessions
// opened on a connection are dropped when it closes, so an abandoned verify
// consumes nothing on the bank.
class BankServer {
public:
    BankServer(bank::Bank& bank, const std::string& host, int port);
    ~BankServer();

    int port() const { return port_; }
    void stop();

private:
    void accept_loop();
    void serve_connection(int fd);

    bank::Bank& bank_;
    int listen_fd_ = -1;
    int port_ = 0;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;
    std::mutex workers_mu_;
    std::vector<std::thread> workers_;
    std::set<int> live_fds_;
};

class SocketTransport : public wire::Transport {
public:
    static SocketTransport connect(const std::string& host, int port, int timeout_ms = 30000);
    ~SocketTransport() override;
    SocketTransport(SocketTransport&& other) noexcept;
    SocketTransport(const SocketTransport&) = delete;

    void send(const wire::WireMessage& msg) override;
    wire::WireMessage recv() override;

private:
    explicit SocketTransport(int fd) : fd_(fd) {}
    int fd_ = -1;
    std::string buffer_;
};

}  // namespace semiqm::server
