#include "streamnet/dag.hpp"

#include <algorithm>
#include <sstream>

namespace streamnet {

const char* to_string(InsertStatus s) {
    switch (s) {
        case InsertStatus::Inserted: return "Inserted";
        case InsertStatus::Duplicate: return "Duplicate";
        case InsertStatus::InvalidHeader: return "InvalidHeader";
        case InsertStatus::InvalidPow: return "InvalidPow";
        case InsertStatus::UnknownParent: return "UnknownParent";
        case InsertStatus::UnknownReference: return "UnknownReference";
    }
    return "?";
}

uint32_t DagState::ix_of(const BlockId& id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        throw UnknownBlock("unknown block " + to_hex(id));
    return it->second;
}

BlockId DagState::genesis_id() const {
    if (recs_.empty())
        throw UnknownBlock("empty DAG has no genesis");
    return recs_[0].id;
}

InsertStatus DagState::insert(const BlockHeader& h) {
    BlockId id = hash_block(h);
    if (index_.count(id)) return InsertStatus::Duplicate;

    if (recs_.empty()) {
        // Genesis: both edges null, PoW exempt.
        if (!h.trunk.is_zero() || !h.branch.is_zero()) return InsertStatus::InvalidHeader;
        BlockRecord r;
        r.header = h;
        r.id = id;
        recs_.push_back(std::move(r));
        index_.emplace(id, 0);
        tips_.insert(id);
        return InsertStatus::Inserted;
    }

    if (h.trunk.is_zero() || h.branch.is_zero()) return InsertStatus::InvalidHeader;
    if (!pow_ok(id, difficulty_bits_)) return InsertStatus::InvalidPow;
    auto pit = index_.find(h.trunk);
    if (pit == index_.end()) return InsertStatus::UnknownParent;
    auto rit = index_.find(h.branch);
    if (rit == index_.end()) return InsertStatus::UnknownReference;

    uint32_t ix = static_cast<uint32_t>(recs_.size());
    BlockRecord r;
    r.header = h;
    r.id = id;
    r.parent = static_cast<int32_t>(pit->second);
    r.reference = static_cast<int32_t>(rit->second);
    r.before.push_back(pit->second);
    if (rit->second != pit->second) r.before.push_back(rit->second);
    recs_.push_back(std::move(r));
    index_.emplace(id, ix);

    for (uint32_t t : recs_[ix].before) {
        recs_[t].after.push_back(ix);
        tips_.erase(recs_[t].id);
    }
    recs_[pit->second].children.push_back(ix);
    tips_.insert(id);
    return InsertStatus::Inserted;
}

static std::string field_or_dash(const std::string& hex) {
    return hex.empty() ? "-" : hex;
}

std::string dump_line(const BlockHeader& h) {
    std::ostringstream os;
    os << to_hex(hash_block(h));
    os << '\t' << field_or_dash(bytes_to_hex(h.sender_addr));
    os << '\t' << h.timestamp;
    os << '\t' << field_or_dash(bytes_to_hex(h.bundle_id));
    os << '\t' << (h.trunk.is_zero() ? "-" : to_hex(h.trunk));
    os << '\t' << (h.branch.is_zero() ? "-" : to_hex(h.branch));
    os << '\t' << field_or_dash(bytes_to_hex(h.tag));
    os << '\t' << h.attach_ts;
    os << '\t' << h.nonce;
    std::vector<uint8_t> payload;
    put_u32_le(payload, static_cast<uint32_t>(h.payload.size()));
    for (const auto& t : h.payload) {
        auto tb = serialize_txn(t);
        payload.insert(payload.end(), tb.begin(), tb.end());
    }
    os << '\t' << bytes_to_hex(payload.data(), payload.size());
    return os.str();
}

namespace {

struct ByteReader {
    const std::vector<uint8_t>& b;
    size_t pos = 0;

    uint32_t u32() {
        if (pos + 4 > b.size()) throw std::invalid_argument("truncated payload");
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    uint64_t u64() {
        if (pos + 8 > b.size()) throw std::invalid_argument("truncated payload");
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    std::string str() {
        uint32_t n = u32();
        if (pos + n > b.size()) throw std::invalid_argument("truncated payload");
        std::string s(b.begin() + pos, b.begin() + pos + n);
        pos += n;
        return s;
    }
    Hash256 hash() {
        if (pos + 32 > b.size()) throw std::invalid_argument("truncated payload");
        Hash256 h;
        std::copy(b.begin() + pos, b.begin() + pos + 32, h.v.begin());
        pos += 32;
        return h;
    }
};

Transaction read_txn(ByteReader& r) {
    Transaction t;
    t.claimed_sender = r.str();
    uint32_t nin = r.u32();
    for (uint32_t i = 0; i < nin; ++i) {
        OutputRef ref;
        ref.txn = r.hash();
        ref.index = r.u32();
        t.inputs.push_back(ref);
    }
    uint32_t nout = r.u32();
    for (uint32_t i = 0; i < nout; ++i) {
        TxOutput o;
        o.addr = r.str();
        o.amount = r.u64();
        t.outputs.push_back(o);
    }
    t.bundle_index = r.u32();
    t.bundle_last = r.u32();
    return t;
}

std::string undash(const std::string& f) {
    return f == "-" ? std::string() : f;
}

}  // namespace

BlockHeader parse_dump_line(const std::string& line) {
    std::vector<std::string> f;
    size_t start = 0;
    while (true) {
        size_t tab = line.find('\t', start);
        f.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    if (f.size() != 10) throw std::invalid_argument("dump line: expected 10 fields");

    BlockHeader h;
    auto sender = hex_to_bytes(undash(f[1]));
    h.sender_addr.assign(sender.begin(), sender.end());
    h.timestamp = std::stoull(f[2]);
    auto bundle = hex_to_bytes(undash(f[3]));
    h.bundle_id.assign(bundle.begin(), bundle.end());
    h.trunk = f[4] == "-" ? BlockId{} : hash_from_hex(f[4]);
    h.branch = f[5] == "-" ? BlockId{} : hash_from_hex(f[5]);
    auto tag = hex_to_bytes(undash(f[6]));
    h.tag.assign(tag.begin(), tag.end());
    h.attach_ts = std::stoull(f[7]);
    h.nonce = std::stoull(f[8]);
    auto payload = hex_to_bytes(f[9]);
    ByteReader r{payload};
    uint32_t ntx = r.u32();
    for (uint32_t i = 0; i < ntx; ++i) h.payload.push_back(read_txn(r));

    if (hash_block(h) != hash_from_hex(f[0]))
        throw std::invalid_argument("dump line: id does not match header");
    return h;
}

std::string DagState::dump_canonical() const {
    std::vector<std::string> lines;
    lines.reserve(recs_.size());
    for (const auto& r : recs_) lines.push_back(dump_line(r.header));
    std::sort(lines.begin(), lines.end());  // id is the first column
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

Hash256 DagState::state_hash() const {
    return sha256(dump_canonical());
}

DagState DagState::load_dump(const std::string& text, int difficulty_bits) {
    std::vector<BlockHeader> headers;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        headers.push_back(parse_dump_line(line));
    }

    DagState dag(difficulty_bits);
    OrphanPool pool(headers.size() + 1);
    size_t genesis_at = headers.size();
    for (size_t i = 0; i < headers.size(); ++i) {
        if (headers[i].trunk.is_zero() && headers[i].branch.is_zero()) {
            if (genesis_at != headers.size())
                throw std::invalid_argument("dump contains two genesis blocks");
            genesis_at = i;
        }
    }
    if (genesis_at == headers.size() && !headers.empty())
        throw std::invalid_argument("dump has no genesis block");
    if (headers.empty()) return dag;

    if (dag.insert(headers[genesis_at]) != InsertStatus::Inserted)
        throw std::invalid_argument("genesis insert failed");
    for (size_t i = 0; i < headers.size(); ++i) {
        if (i == genesis_at) continue;
        auto out = pool.insert_or_buffer(dag, headers[i]);
        if (!out.buffered && out.status != InsertStatus::Inserted)
            throw std::invalid_argument(std::string("dump load: ") + to_string(out.status));
    }
    if (dag.size() != headers.size())
        throw std::invalid_argument("dump load: unresolvable dependencies");
    return dag;
}

DagState DagState::induced(const std::vector<uint8_t>& keep, uint32_t new_g_ix) const {
    DagState out(difficulty_bits_);
    if (new_g_ix >= keep.size() || !keep[new_g_ix])
        throw std::invalid_argument("induced: genesis not in member set");

    // Insertion order is preserved; the new genesis must be the earliest kept
    // block so the index-0 genesis convention and edges-point-down ordering
    // both survive (true for Later(new_g) windows: descendants are always
    // inserted after their ancestors).
    std::vector<uint32_t> remap(recs_.size(), UINT32_MAX);
    uint32_t next = 0;
    for (uint32_t ix = 0; ix < recs_.size(); ++ix) {
        if (!keep[ix]) continue;
        if (next == 0 && ix != new_g_ix)
            throw std::invalid_argument("induced: a member precedes the genesis");
        remap[ix] = next++;
    }

    for (uint32_t ix = 0; ix < recs_.size(); ++ix) {
        if (remap[ix] == UINT32_MAX) continue;
        const BlockRecord& src = recs_[ix];
        BlockRecord dst;
        dst.header = src.header;
        dst.id = src.id;
        dst.parent = (src.parent >= 0 && keep[src.parent]) ? static_cast<int32_t>(remap[src.parent]) : -1;
        dst.reference =
            (src.reference >= 0 && keep[src.reference]) ? static_cast<int32_t>(remap[src.reference]) : -1;
        for (uint32_t t : src.before)
            if (keep[t]) dst.before.push_back(remap[t]);
        for (uint32_t t : src.after)
            if (keep[t]) dst.after.push_back(remap[t]);
        for (uint32_t t : src.children)
            if (keep[t]) dst.children.push_back(remap[t]);
        out.index_.emplace(dst.id, remap[ix]);
        if (dst.after.empty()) out.tips_.insert(dst.id);
        out.recs_.push_back(std::move(dst));
    }
    return out;
}

OrphanPool::Outcome OrphanPool::insert_or_buffer(DagState& dag, const BlockHeader& h) {
    Outcome out;
    out.status = dag.insert(h);
    if (out.status == InsertStatus::UnknownParent || out.status == InsertStatus::UnknownReference) {
        BlockId id = hash_block(h);
        if (pooled_.count(id)) {
            out.buffered = true;
            return out;
        }
        if (pooled_.size() >= cap_) {
            ++overflow_dropped_;
            return out;
        }
        BlockId missing = out.status == InsertStatus::UnknownParent ? h.trunk : h.branch;
        waiting_[missing].push_back(h);
        pooled_.insert(id);
        out.buffered = true;
        return out;
    }
    if (out.status != InsertStatus::Inserted) return out;

    out.inserted.push_back(hash_block(h));
    // Drain: each newly available block may unlock parked headers, possibly
    // re-parking them on their other missing edge.
    std::vector<BlockId> ready = {out.inserted[0]};
    while (!ready.empty()) {
        BlockId dep = ready.back();
        ready.pop_back();
        auto it = waiting_.find(dep);
        if (it == waiting_.end()) continue;
        std::vector<BlockHeader> parked = std::move(it->second);
        waiting_.erase(it);
        for (const auto& ph : parked) {
            BlockId pid = hash_block(ph);
            InsertStatus st = dag.insert(ph);
            if (st == InsertStatus::Inserted) {
                pooled_.erase(pid);
                out.inserted.push_back(pid);
                ready.push_back(pid);
            } else if (st == InsertStatus::UnknownParent || st == InsertStatus::UnknownReference) {
                waiting_[st == InsertStatus::UnknownParent ? ph.trunk : ph.branch].push_back(ph);
            } else {
                pooled_.erase(pid);  // duplicate or invalid: stop tracking
            }
        }
    }
    return out;
}

}  // namespace streamnet
