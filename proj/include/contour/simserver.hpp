#pragma once

#include <contour/simchain.hpp>

#include <atomic>
#include <mutex>
#include <thread>

namespace contour {

// Framing: every message is u32-LE length then body. Requests carry an
// opcode byte (0x01 headers_from, 0x02 get_block, 0x03 submit_tx,
// 0x04 mine with an i64-LE timestamp) and its payload; responses carry a
// status byte (0 ok, 1 not_found, 2 rejected, 3 bad_request) and the
// result payload. Mine answers with the new tip hash then its u32 height.
enum class sim_op : uint8_t {
    headers_from = 0x01,
    get_block = 0x02,
    submit_tx = 0x03,
    mine = 0x04,
};
enum class sim_status : uint8_t { ok = 0, not_found = 1, rejected = 2, bad_request = 3 };

// Serves one branch of a sim_chain on a localhost TCP port. The caller
// drives mining; concurrent requests are answered under a chain lock.
class sim_server {
  public:
    sim_server(sim_chain& chain, sim_chain::branch_id branch, uint16_t port = 0);
    ~sim_server();

    sim_server(const sim_server&) = delete;
    sim_server& operator=(const sim_server&) = delete;

    uint16_t port() const { return port_; }
    void stop();

    // Serializes mining against in-flight requests.
    const block& mine_block(int64_t timestamp);

  private:
    void serve();
    void handle_connection(int fd);

    sim_chain& chain_;
    sim_chain::branch_id branch_;
    uint16_t port_ = 0;
    int listen_fd_ = -1;
    std::atomic<bool> running_{false};
    std::mutex chain_mutex_;
    std::thread thread_;
};

class sim_client {
  public:
    sim_client(const std::string& host, uint16_t port);
    ~sim_client();

    sim_client(const sim_client&) = delete;
    sim_client& operator=(const sim_client&) = delete;

    std::vector<block_header> headers_from(const digest32& hash);
    block get_block(const digest32& hash);
    digest32 submit_tx(const transaction& tx);
    std::pair<digest32, uint32_t> mine(int64_t timestamp);

    // Collects every outbound frame; used to audit what a client reveals.
    void record_outbound(bytes* sink) { transcript_ = sink; }

  private:
    bytes request(sim_op op, byte_span payload);

    int fd_ = -1;
    bytes* transcript_ = nullptr;
};

} // namespace contour
