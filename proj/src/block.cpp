#include "streamnet/block.hpp"

namespace streamnet {

void put_u32_le(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(v & 0xff);
    out.push_back((v >> 8) & 0xff);
    out.push_back((v >> 16) & 0xff);
    out.push_back((v >> 24) & 0xff);
}

void put_u64_le(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

static void put_bytes(std::vector<uint8_t>& out, const uint8_t* data, size_t len) {
    put_u32_le(out, static_cast<uint32_t>(len));
    out.insert(out.end(), data, data + len);
}

static void put_str(std::vector<uint8_t>& out, const std::string& s) {
    put_bytes(out, reinterpret_cast<const uint8_t*>(s.data()), s.size());
}

// Zero hash encodes as an empty field so a real 32-byte id can never be
// confused with "absent".
static void put_edge(std::vector<uint8_t>& out, const BlockId& id) {
    if (id.is_zero())
        put_u32_le(out, 0);
    else
        put_bytes(out, id.v.data(), id.v.size());
}

static void append_txn(std::vector<uint8_t>& out, const Transaction& t) {
    put_str(out, t.claimed_sender);
    put_u32_le(out, static_cast<uint32_t>(t.inputs.size()));
    for (const auto& in : t.inputs) {
        out.insert(out.end(), in.txn.v.begin(), in.txn.v.end());
        put_u32_le(out, in.index);
    }
    put_u32_le(out, static_cast<uint32_t>(t.outputs.size()));
    for (const auto& o : t.outputs) {
        put_str(out, o.addr);
        put_u64_le(out, o.amount);
    }
    put_u32_le(out, t.bundle_index);
    put_u32_le(out, t.bundle_last);
}

std::vector<uint8_t> serialize_txn(const Transaction& t) {
    std::vector<uint8_t> out;
    append_txn(out, t);
    return out;
}

std::vector<uint8_t> serialize_header(const BlockHeader& h) {
    std::vector<uint8_t> out;
    out.reserve(128 + 64 * h.payload.size());
    put_str(out, h.sender_addr);
    put_u64_le(out, h.timestamp);
    put_str(out, h.bundle_id);
    put_edge(out, h.trunk);
    put_edge(out, h.branch);
    put_str(out, h.tag);
    put_u64_le(out, h.attach_ts);
    put_u64_le(out, h.nonce);
    put_u32_le(out, static_cast<uint32_t>(h.payload.size()));
    for (const auto& t : h.payload) append_txn(out, t);
    return out;
}

TxnId txn_id(const Transaction& t) {
    return sha256(serialize_txn(t));
}

BlockId hash_block(const BlockHeader& h) {
    return sha256(serialize_header(h));
}

bool pow_ok(const BlockId& id, int difficulty_bits) {
    return leading_zero_bits(id) >= difficulty_bits;
}

PowResult pow_search(BlockHeader& h, int difficulty_bits) {
    PowResult r;
    // Nonce sits at a fixed offset from the end: 8 bytes nonce + 4 bytes
    // payload count + payload txns. Rebuilding the prefix once and patching
    // the nonce in place keeps the search proportional to one hash per try.
    std::vector<uint8_t> bytes = serialize_header(h);
    size_t payload_len = 4;
    {
        std::vector<uint8_t> tail;
        put_u32_le(tail, static_cast<uint32_t>(h.payload.size()));
        for (const auto& t : h.payload) append_txn(tail, t);
        payload_len = tail.size();
    }
    size_t nonce_off = bytes.size() - payload_len - 8;
    for (uint64_t n = h.nonce;; ++n) {
        for (int i = 0; i < 8; ++i) bytes[nonce_off + i] = (n >> (8 * i)) & 0xff;
        BlockId id = sha256(bytes);
        ++r.attempts;
        if (pow_ok(id, difficulty_bits)) {
            h.nonce = n;
            r.nonce = n;
            r.id = id;
            return r;
        }
    }
}

}  // namespace streamnet
