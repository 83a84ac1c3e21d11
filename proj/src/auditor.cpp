#include <contour/auditor.hpp>

#include <charconv>
#include <fstream>

namespace contour {

header_store header_store::with_checkpoint(const digest32& hash, uint32_t height,
                                           int64_t arrival) {
    header_store store;
    store.records_.push_back({height, hash, arrival});
    store.index_[hash] = height;
    return store;
}

std::optional<uint32_t> header_store::height_of(const digest32& hash) const {
    auto it = index_.find(hash);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void header_store::append(const digest32& hash, int64_t arrival) {
    uint32_t height = records_.back().height + 1;
    records_.push_back({height, hash, arrival});
    index_[hash] = height;
}

namespace {

const char store_magic[4] = {'C', 'N', 'H', 'S'};
constexpr uint8_t store_version = 0x01;
constexpr size_t store_header_size = 4 + 1 + 32 + 4;
constexpr size_t store_record_size = 4 + 32 + 8;

} // namespace

header_store header_store::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) fail(errc::io, "cannot open header store: " + path.string());
    bytes raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (raw.size() < store_header_size + store_record_size ||
        (raw.size() - store_header_size) % store_record_size != 0)
        fail(errc::format, "header store has wrong size");
    byte_reader r(as_span(raw));
    byte_span magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), store_magic))
        fail(errc::format, "bad header store magic");
    if (r.u8() != store_version) fail(errc::format, "unsupported header store version");
    digest32 cp_hash = digest32::from_span(r.raw(32));
    uint32_t cp_height = r.u32le();

    header_store store;
    size_t count = (raw.size() - store_header_size) / store_record_size;
    for (size_t i = 0; i < count; ++i) {
        header_record rec;
        rec.height = r.u32le();
        rec.hash = digest32::from_span(r.raw(32));
        rec.arrival = r.i64le();
        if (i == 0) {
            if (rec.height != cp_height || rec.hash != cp_hash)
                fail(errc::format, "first record does not match checkpoint");
        } else if (rec.height != store.records_.back().height + 1) {
            fail(errc::format, "record heights not contiguous");
        }
        store.records_.push_back(rec);
        store.index_[rec.hash] = rec.height;
    }
    return store;
}

void header_store::save(const std::filesystem::path& path) const {
    byte_writer w;
    w.raw(byte_span(reinterpret_cast<const uint8_t*>(store_magic), 4));
    w.u8(store_version);
    w.raw(records_.front().hash.span());
    w.u32le(records_.front().height);
    for (const header_record& rec : records_) {
        w.u32le(rec.height);
        w.raw(rec.hash.span());
        w.i64le(rec.arrival);
    }
    atomic_write_file(path, as_span(w.data()));
}

size_t sync(header_store& store, std::span<const block_header> headers, int64_t arrival_now) {
    size_t appended = 0;
    for (const block_header& h : headers) {
        if (h.prev_hash != store.tip().hash)
            fail(errc::chain_mismatch, "header does not extend the stored tip");
        if (!check_pow(h)) fail(errc::invalid_header, "header fails its proof of work");
        store.append(h.hash(), arrival_now);
        ++appended;
    }
    return appended;
}

const char* reject_reason_name(reject_reason reason) {
    switch (reason) {
        case reject_reason::none: return "None";
        case reject_reason::unknown_header: return "UnknownHeader";
        case reject_reason::bad_statement_path: return "BadStatementPath";
        case reject_reason::bad_tx_path: return "BadTxPath";
        case reject_reason::wrong_authority: return "WrongAuthority";
        case reject_reason::unconfirmed: return "Unconfirmed";
    }
    return "None";
}

verify_result check_inclusion(const header_store& store, const auditor_policy& policy,
                              const digest32& digest, const inclusion_proof& proof) {
    std::optional<uint32_t> height = store.height_of(proof.header.hash());
    if (!height) return {false, reject_reason::unknown_header};

    digest32 root;
    try {
        root = extract_commit_root(proof.tx);
    } catch (const error&) {
        return {false, reject_reason::bad_statement_path};
    }
    if (!verify_statement_branch(digest, proof.stmt_branch, root))
        return {false, reject_reason::bad_statement_path};

    if (!verify_bitcoin_tx_branch(proof.tx.txid(), proof.tx_branch, proof.header.merkle_root))
        return {false, reject_reason::bad_tx_path};

    if (!tx_spends_from(proof.tx, policy.authority))
        return {false, reject_reason::wrong_authority};

    uint32_t tip = store.tip().height;
    if (tip < *height || tip - *height < policy.k_confirmations)
        return {false, reject_reason::unconfirmed};

    return {true, reject_reason::none};
}

staleness staleness_alarm(const header_store& store, const auditor_policy& policy, int64_t now) {
    if (now - store.tip().arrival > policy.max_block_interval)
        return staleness::eclipse_suspected;
    return staleness::ok;
}

std::string arch_state::serialize() const {
    return block_hash.hex() + " " + std::to_string(height) + "\n";
}

arch_state arch_state::parse(std::string_view text) {
    if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
    size_t space = text.find(' ');
    if (space == std::string_view::npos) fail(errc::format, "state line must be hash, space, height");
    arch_state state;
    state.block_hash = digest32::from_hex(text.substr(0, space));
    std::string_view num = text.substr(space + 1);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), state.height);
    if (ec != std::errc() || ptr != num.data() + num.size())
        fail(errc::format, "state height is not a number");
    return state;
}

coverage check_arch_state(const header_store& store, const arch_state& state,
                          const inclusion_proof& proof) {
    std::optional<uint32_t> arch_height = store.height_of(state.block_hash);
    if (!arch_height || *arch_height != state.height)
        fail(errc::untrusted_state, "archivist state hash not in the verified header set");
    std::optional<uint32_t> proof_height = store.height_of(proof.header.hash());
    if (!proof_height) fail(errc::untrusted_state, "proof header not in the verified header set");
    return state.height >= *proof_height ? coverage::covered : coverage::not_covered;
}

} // namespace contour
