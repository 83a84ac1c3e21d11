#include <contour/simserver.hpp>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

namespace contour {

namespace {

constexpr size_t max_message_size = 64 * 1024 * 1024;

bool read_exact(int fd, uint8_t* out, size_t n, const std::atomic<bool>* running) {
    size_t got = 0;
    while (got < n) {
        if (running) {
            pollfd pfd{fd, POLLIN, 0};
            int rc = ::poll(&pfd, 1, 100);
            if (!running->load()) return false;
            if (rc == 0) continue;
            if (rc < 0) return false;
        }
        ssize_t r = ::read(fd, out + got, n - got);
        if (r <= 0) return false;
        got += static_cast<size_t>(r);
    }
    return true;
}

bool write_all(int fd, byte_span data) {
    size_t sent = 0;
    while (sent < data.size()) {
        ssize_t w = ::write(fd, data.data() + sent, data.size() - sent);
        if (w <= 0) return false;
        sent += static_cast<size_t>(w);
    }
    return true;
}

bool read_frame(int fd, bytes& out, const std::atomic<bool>* running) {
    uint8_t len_raw[4];
    if (!read_exact(fd, len_raw, 4, running)) return false;
    uint32_t len = static_cast<uint32_t>(len_raw[0]) | static_cast<uint32_t>(len_raw[1]) << 8 |
                   static_cast<uint32_t>(len_raw[2]) << 16 |
                   static_cast<uint32_t>(len_raw[3]) << 24;
    if (len > max_message_size) return false;
    out.resize(len);
    return len == 0 || read_exact(fd, out.data(), len, running);
}

bool write_frame(int fd, byte_span body) {
    byte_writer w;
    w.u32le(static_cast<uint32_t>(body.size()));
    w.raw(body);
    return write_all(fd, as_span(w.data()));
}

} // namespace

sim_server::sim_server(sim_chain& chain, sim_chain::branch_id branch, uint16_t port)
    : chain_(chain), branch_(branch) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) fail(errc::io, "socket creation failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        ::close(listen_fd_);
        fail(errc::io, "bind failed");
    }
    if (::listen(listen_fd_, 8) < 0) {
        ::close(listen_fd_);
        fail(errc::io, "listen failed");
    }
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    running_ = true;
    thread_ = std::thread([this] { serve(); });
}

sim_server::~sim_server() { stop(); }

void sim_server::stop() {
    if (!running_.exchange(false)) return;
    if (thread_.joinable()) thread_.join();
    if (listen_fd_ >= 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
}

const block& sim_server::mine_block(int64_t timestamp) {
    std::lock_guard lock(chain_mutex_);
    return chain_.mine_block(timestamp, branch_);
}

void sim_server::serve() {
    while (running_) {
        pollfd pfd{listen_fd_, POLLIN, 0};
        int rc = ::poll(&pfd, 1, 100);
        if (!running_) break;
        if (rc <= 0) continue;
        int conn = ::accept(listen_fd_, nullptr, nullptr);
        if (conn < 0) continue;
        handle_connection(conn);
        ::close(conn);
    }
}

void sim_server::handle_connection(int fd) {
    bytes req;
    while (running_ && read_frame(fd, req, &running_)) {
        byte_writer resp;
        if (req.empty()) {
            resp.u8(static_cast<uint8_t>(sim_status::bad_request));
            if (!write_frame(fd, as_span(resp.data()))) return;
            continue;
        }
        uint8_t op = req[0];
        byte_span payload(req.data() + 1, req.size() - 1);
        try {
            std::lock_guard lock(chain_mutex_);
            if (op == static_cast<uint8_t>(sim_op::headers_from) && payload.size() == 32) {
                std::vector<block_header> headers =
                    chain_.header_stream(digest32::from_span(payload), branch_);
                resp.u8(static_cast<uint8_t>(sim_status::ok));
                resp.varint(headers.size());
                for (const block_header& h : headers) {
                    auto raw = h.serialize();
                    resp.raw(byte_span(raw.data(), raw.size()));
                }
            } else if (op == static_cast<uint8_t>(sim_op::get_block) && payload.size() == 32) {
                const block& blk = chain_.get_block(digest32::from_span(payload));
                resp.u8(static_cast<uint8_t>(sim_status::ok));
                resp.raw(as_span(blk.serialize()));
            } else if (op == static_cast<uint8_t>(sim_op::submit_tx)) {
                transaction tx = transaction::parse(payload);
                digest32 txid = chain_.submit_tx(tx, branch_);
                resp.u8(static_cast<uint8_t>(sim_status::ok));
                resp.raw(txid.span());
            } else if (op == static_cast<uint8_t>(sim_op::mine) && payload.size() == 8) {
                byte_reader r(payload);
                const block& blk = chain_.mine_block(r.i64le(), branch_);
                resp.u8(static_cast<uint8_t>(sim_status::ok));
                resp.raw(blk.header.hash().span());
                resp.u32le(chain_.tip_height(branch_));
            } else {
                resp.u8(static_cast<uint8_t>(sim_status::bad_request));
            }
        } catch (const error& e) {
            byte_writer err;
            switch (e.code()) {
                case errc::not_found:
                    err.u8(static_cast<uint8_t>(sim_status::not_found));
                    break;
                case errc::rejected:
                case errc::duplicate:
                    err.u8(static_cast<uint8_t>(sim_status::rejected));
                    break;
                default:
                    err.u8(static_cast<uint8_t>(sim_status::bad_request));
                    break;
            }
            if (!write_frame(fd, as_span(err.data()))) return;
            continue;
        }
        if (!write_frame(fd, as_span(resp.data()))) return;
    }
}

sim_client::sim_client(const std::string& host, uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) fail(errc::io, "socket creation failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        fail(errc::config, "host must be an IPv4 address");
    }
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        ::close(fd_);
        fail(errc::io, "connect failed");
    }
}

sim_client::~sim_client() {
    if (fd_ >= 0) ::close(fd_);
}

bytes sim_client::request(sim_op op, byte_span payload) {
    byte_writer w;
    w.u8(static_cast<uint8_t>(op));
    w.raw(payload);
    if (transcript_)
        transcript_->insert(transcript_->end(), w.data().begin(), w.data().end());
    if (!write_frame(fd_, as_span(w.data()))) fail(errc::io, "request write failed");
    bytes resp;
    if (!read_frame(fd_, resp, nullptr) || resp.empty()) fail(errc::io, "response read failed");
    sim_status status = static_cast<sim_status>(resp[0]);
    bytes body(resp.begin() + 1, resp.end());
    switch (status) {
        case sim_status::ok:
            return body;
        case sim_status::not_found:
            fail(errc::not_found, "server: not found");
        case sim_status::rejected:
            fail(errc::rejected, "server: transaction rejected");
        default:
            fail(errc::format, "server: bad request");
    }
}

std::vector<block_header> sim_client::headers_from(const digest32& hash) {
    bytes body = request(sim_op::headers_from, hash.span());
    byte_reader r(as_span(body));
    uint64_t count = r.varint();
    if (count > r.remaining() / 80) fail(errc::format, "header count exceeds response");
    std::vector<block_header> out;
    out.reserve(count);
    for (uint64_t i = 0; i < count; ++i) out.push_back(block_header::parse(r));
    r.expect_done();
    return out;
}

block sim_client::get_block(const digest32& hash) {
    bytes body = request(sim_op::get_block, hash.span());
    return block::parse(as_span(body));
}

digest32 sim_client::submit_tx(const transaction& tx) {
    bytes body = request(sim_op::submit_tx, as_span(tx.serialize()));
    return digest32::from_span(as_span(body));
}

std::pair<digest32, uint32_t> sim_client::mine(int64_t timestamp) {
    byte_writer w;
    w.i64le(timestamp);
    bytes body = request(sim_op::mine, as_span(w.data()));
    byte_reader r(as_span(body));
    digest32 hash = digest32::from_span(r.raw(32));
    uint32_t height = r.u32le();
    r.expect_done();
    return {hash, height};
}

} // namespace contour
