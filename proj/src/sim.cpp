#include "streamnet/sim.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <stdexcept>

#include "streamnet/oracle.hpp"

namespace streamnet {

namespace {
constexpr uint64_t kHashBytes = 32;
}

Simulation::Simulation(const RunConfig& cfg) : Simulation(cfg, make_topology(cfg.topology)) {}

Simulation::Simulation(const RunConfig& cfg, const Topology& topo) : cfg_(cfg), topo_(topo) {
    if (cfg_.topology.empty()) cfg_.topology = topo_.name.empty() ? "custom" : topo_.name;
    cfg_.validate();
    topo_.validate();
    adj_ = topo_.adjacency();
    latency_us_ = cfg_.latency_ms * 1000;
    timeout_us_ = std::max<uint64_t>(1, cfg_.timeout_hops * latency_us_);

    uint32_t n = topo_.n_nodes;
    if (cfg_.block_count == 0) {
        WorkloadSpec ws;
        ws.n_accounts = cfg_.accounts;
        ws.group1 = cfg_.group1;
        ws.txn_count = cfg_.txns;
        ws.bundle_size = cfg_.bundle_size;
        ws.conflict_fraction = cfg_.conflict_fraction;
        ws.spend_amount = cfg_.spend_amount;
        ws.coinbase = cfg_.coinbase;
        ws.seed = cfg_.seed;
        wl_ = std::make_unique<Workload>(build_workload(ws, n));
        genesis_ = std::make_shared<const BlockHeader>(wl_->genesis);
    } else {
        auto g = std::make_shared<BlockHeader>();
        g->sender_addr = "genesis";
        g->tag = "genesis";
        genesis_ = g;
    }
    genesis_id_ = hash_block(*genesis_);

    nodes_.reserve(n);
    for (uint32_t i = 0; i < n; ++i) {
        Node nd;
        nd.dag = DagState(cfg_.difficulty);
        nd.scores = StreamingScores(cfg_.top_combine);
        nd.rng = DetRng(cfg_.seed * 0x9e3779b97f4a7c15ULL + i + 1);
        if (wl_) nd.queue = wl_->queues[i];
        else nd.quota = cfg_.block_count / n + (i < cfg_.block_count % n ? 1 : 0);
        if (nd.dag.insert(*genesis_) != InsertStatus::Inserted)
            throw std::logic_error("genesis insert failed");
        nd.scores.on_insert(nd.dag, 0);
        nd.cache.emplace(genesis_id_, genesis_);
        nodes_.push_back(std::move(nd));
    }
}

void Simulation::push(Event ev) {
    ev.seq = seq_++;
    events_.push(std::move(ev));
}

bool Simulation::has_work(const Node& nd) const {
    if (cfg_.block_count > 0) return nd.quota > 0;
    return nd.next_batch < nd.queue.size();
}

void Simulation::arm_generation(uint32_t n, uint64_t at_us) {
    Node& nd = nodes_[n];
    if (nd.gen_armed || !has_work(nd)) return;
    nd.gen_armed = true;
    Event ev;
    ev.at_us = at_us;
    ev.kind = EvKind::StartGen;
    ev.node = n;
    push(std::move(ev));
}

void Simulation::run() {
    if (finalized_) return;
    for (uint32_t i = 0; i < n_nodes(); ++i) {
        Node& nd = nodes_[i];
        if (!has_work(nd)) continue;
        uint64_t t0 = cfg_.gen_rate > 0
                          ? static_cast<uint64_t>(nd.rng.exponential(cfg_.gen_rate) * 1e6)
                          : 0;
        arm_generation(i, t0);
    }
    while (!events_.empty()) {
        Event ev = events_.top();
        events_.pop();
        met_.end_us = ev.at_us;
        switch (ev.kind) {
            case EvKind::Deliver: handle_deliver(ev); break;
            case EvKind::StartGen: handle_start_gen(ev); break;
            case EvKind::FinishGen: handle_finish_gen(ev); break;
            case EvKind::PullTimeout: handle_pull_timeout(ev); break;
        }
    }
    finalize();
}

void Simulation::handle_start_gen(const Event& ev) {
    Node& nd = nodes_[ev.node];
    if (!has_work(nd)) {
        nd.gen_armed = false;
        return;
    }
    GenBatch batch;
    if (cfg_.block_count > 0) {
        --nd.quota;
    } else {
        // Execution batches wait until the funding bundle is locally visible,
        // so every generated spend has its inputs in its own past.
        const GenBatch& next = nd.queue[nd.next_batch];
        if (next.bundle_id != "ramp" && !nd.saw_ramp) {
            nd.gen_armed = false;
            nd.blocked_on_ramp = true;
            return;
        }
        batch = nd.queue[nd.next_batch++];
    }

    auto h = std::make_shared<BlockHeader>();
    h->sender_addr = "node" + std::to_string(ev.node);
    h->timestamp = ev.at_us / 1000;
    h->attach_ts = h->timestamp;
    h->tag = std::to_string(nd.gen_counter++);  // uniquifies otherwise-identical headers
    h->bundle_id = batch.bundle_id;
    h->payload = std::move(batch.txns);

    h->trunk = pivot(nd.dag, nd.dag.genesis_id(), nd.scores, cfg_.tie_break).tip;
    McmcParams mp;
    mp.alpha = cfg_.alpha;
    mp.rng_seed = nd.rng.next_u64();
    mp.edges = cfg_.walk_edges;
    h->branch = mcmc_tip(nd.dag, nd.dag.genesis_id(), mp, nd.scores);

    PowResult pow = pow_search(*h, cfg_.difficulty);
    uint64_t busy = cfg_.gen_fixed_us + pow.attempts * cfg_.pow_us_per_attempt;

    Event fin;
    fin.at_us = ev.at_us + busy;
    fin.kind = EvKind::FinishGen;
    fin.node = ev.node;
    fin.subject = pow.id;
    fin.block = std::move(h);
    push(std::move(fin));
}

void Simulation::handle_finish_gen(const Event& ev) {
    Node& nd = nodes_[ev.node];
    ++met_.blocks_generated;
    met_.last_gen_us = std::max(met_.last_gen_us, ev.at_us);
    accept_content(ev.node, ev.block, ev.at_us);
    for (uint32_t nb : adj_[ev.node]) send(ev.at_us, ev.node, nb, MsgKind::Block, ev.subject, ev.block);
    nd.gen_armed = false;
    if (has_work(nd)) {
        uint64_t next = cfg_.gen_rate > 0
                            ? ev.at_us + static_cast<uint64_t>(nd.rng.exponential(cfg_.gen_rate) * 1e6)
                            : ev.at_us;
        arm_generation(ev.node, next);
    }
}

void Simulation::accept_content(uint32_t n, const std::shared_ptr<const BlockHeader>& hp,
                                uint64_t now) {
    Node& nd = nodes_[n];
    BlockId id = hash_block(*hp);
    if (nd.store.is_retired(id)) {
        ++met_.stale_blocks;
        nd.pulls.erase(id);
        return;
    }
    if (!nd.cache.emplace(id, hp).second) return;  // content already held
    nd.pulls.erase(id);

    auto out = nd.pool.insert_or_buffer(nd.dag, *hp);
    if (out.status == InsertStatus::InvalidHeader || out.status == InsertStatus::InvalidPow) {
        ++met_.invalid_blocks;
        nd.cache.erase(id);  // never serve rejected content
        return;
    }
    if (out.buffered) {
        BlockId dep = out.status == InsertStatus::UnknownParent ? hp->trunk : hp->branch;
        if (nd.store.is_retired(dep)) {
            // Waiting on a retired block: the dependency will never arrive.
            ++met_.stale_blocks;
            nd.pool.purge_waiting_on([&](const BlockId& d) { return d == dep; });
        }
        return;
    }

    for (const BlockId& bid : out.inserted) {
        uint32_t ix = nd.dag.ix_of(bid);
        nd.scores.on_insert(nd.dag, ix);
        nd.last_change_us = now;
        ++nd.inserts_since_fwd;
        if (!nd.saw_ramp && nd.dag.rec(ix).header.bundle_id == "ramp") {
            nd.saw_ramp = true;
            if (nd.blocked_on_ramp) {
                nd.blocked_on_ramp = false;
                arm_generation(n, now);
            }
        }
    }

    if (cfg_.forward_every > 0 && nd.inserts_since_fwd >= cfg_.forward_every) {
        nd.inserts_since_fwd = 0;
        auto ng = should_forward(nd.dag, nd.scores, cfg_.forward_h);
        if (ng && *ng != nd.dag.genesis_id()) {
            ForwardResult fr = forward_genesis(nd.dag, nd.scores, *ng, nd.store);
            nd.dag = std::move(fr.dag);
            nd.scores = std::move(fr.scores);
            ++met_.forwards;
            nd.pool.purge_waiting_on([&](const BlockId& d) { return nd.store.is_retired(d); });
            for (auto it = nd.pulls.begin(); it != nd.pulls.end();) {
                if (nd.store.is_retired(it->first)) it = nd.pulls.erase(it);
                else ++it;
            }
        }
    }
}

void Simulation::handle_deliver(const Event& ev) {
    Node& nd = nodes_[ev.node];
    switch (ev.msg) {
        case MsgKind::Block: {
            const BlockId& id = ev.subject;
            if (nd.cache.count(id)) {
                ++met_.dup_block_receipts;
                return;
            }
            accept_content(ev.node, ev.block, ev.at_us);
            if (!nd.cache.count(id)) return;  // rejected as stale or invalid
            for (uint32_t nb : adj_[ev.node]) {
                if (nb == ev.src) continue;
                if (cfg_.mode == GossipMode::Signal)
                    send(ev.at_us, ev.node, nb, MsgKind::Hash, id, nullptr);
                else
                    send(ev.at_us, ev.node, nb, MsgKind::Block, id, ev.block);
            }
            return;
        }
        case MsgKind::Hash: {
            const BlockId& id = ev.subject;
            if (nd.store.is_retired(id)) {
                ++met_.stale_blocks;
                return;
            }
            if (nd.cache.count(id)) return;  // known content: no request
            PullState& p = nd.pulls[id];
            if (std::find(p.sources.begin(), p.sources.end(), ev.src) == p.sources.end())
                p.sources.push_back(ev.src);
            maybe_request(ev.node, id, ev.at_us);
            return;
        }
        case MsgKind::Request: {
            auto cit = nd.cache.find(ev.subject);
            if (cit != nd.cache.end())
                send(ev.at_us, ev.node, ev.src, MsgKind::Block, ev.subject, cit->second);
            else
                send(ev.at_us, ev.node, ev.src, MsgKind::Nack, ev.subject, nullptr);
            return;
        }
        case MsgKind::Nack: {
            if (nd.cache.count(ev.subject)) return;
            auto it = nd.pulls.find(ev.subject);
            if (it == nd.pulls.end()) return;
            it->second.in_flight = false;
            maybe_request(ev.node, ev.subject, ev.at_us);
            return;
        }
    }
}

void Simulation::maybe_request(uint32_t n, const BlockId& id, uint64_t now) {
    Node& nd = nodes_[n];
    auto it = nd.pulls.find(id);
    if (it == nd.pulls.end()) return;
    PullState& p = it->second;
    if (p.in_flight) return;
    if (p.attempts >= kMaxPullAttempts) {
        if (!p.failed) {
            p.failed = true;
            ++met_.pull_failures;
        }
        return;
    }
    if (p.sources.empty()) return;
    // Drops are per message, so cycling back to a tried announcer is useful.
    if (p.next_source >= p.sources.size()) p.next_source = 0;
    uint32_t target = p.sources[p.next_source++];
    ++p.attempts;
    if (p.attempts > 1) ++met_.pull_retries;
    p.in_flight = true;
    send(now, n, target, MsgKind::Request, id, nullptr);
    Event to;
    to.at_us = now + timeout_us_;
    to.kind = EvKind::PullTimeout;
    to.node = n;
    to.subject = id;
    to.attempt = p.attempts;
    push(std::move(to));
}

void Simulation::handle_pull_timeout(const Event& ev) {
    Node& nd = nodes_[ev.node];
    if (nd.cache.count(ev.subject)) return;
    auto it = nd.pulls.find(ev.subject);
    if (it == nd.pulls.end()) return;
    PullState& p = it->second;
    if (!p.in_flight || p.attempts != ev.attempt) return;  // superseded
    p.in_flight = false;
    maybe_request(ev.node, ev.subject, ev.at_us);
}

void Simulation::send(uint64_t now, uint32_t src, uint32_t dst, MsgKind kind,
                      const BlockId& subject, std::shared_ptr<const BlockHeader> block) {
    // Traffic is counted at send time; drops still cost the sender.
    PerBlockTraffic& pb = traffic_[subject];
    uint64_t bytes = kHashBytes;
    switch (kind) {
        case MsgKind::Block: {
            auto [bit, fresh] = block_size_.try_emplace(subject, 0);
            if (fresh) bit->second = serialize_header(*block).size();
            bytes = bit->second;
            ++met_.msgs_block;
            met_.bytes_block += bytes;
            ++pb.block_msgs;
            pb.block_bytes += bytes;
            pb.content_bytes = bytes;
            break;
        }
        case MsgKind::Hash:
            ++met_.msgs_hash;
            met_.bytes_hash += bytes;
            ++pb.hash_msgs;
            pb.hash_bytes += bytes;
            break;
        case MsgKind::Request:
            ++met_.msgs_request;
            met_.bytes_request += bytes;
            ++pb.request_msgs;
            pb.request_bytes += bytes;
            break;
        case MsgKind::Nack:
            ++met_.msgs_nack;
            met_.bytes_nack += bytes;
            ++pb.nack_msgs;
            pb.nack_bytes += bytes;
            break;
    }
    if (cfg_.trace) {
        static const char* const kNames[] = {"BLOCK", "HASH", "REQUEST", "NACK"};
        char line[160];
        std::snprintf(line, sizeof line, "%" PRIu64 "\t%s\t%u\t%u\t%s\n", now,
                      kNames[static_cast<int>(kind)], src, dst, to_hex(subject).c_str());
        trace_ += line;
    }
    Node& sn = nodes_[src];
    if (cfg_.drop_rate > 0 && sn.rng.uniform01() < cfg_.drop_rate) {
        ++met_.msgs_dropped;
        return;
    }
    uint64_t jitter = cfg_.jitter_ms > 0 ? sn.rng.below(cfg_.jitter_ms * 1000 + 1) : 0;
    Event ev;
    ev.at_us = now + latency_us_ + jitter;
    ev.kind = EvKind::Deliver;
    ev.node = dst;
    ev.src = src;
    ev.msg = kind;
    ev.subject = subject;
    ev.block = std::move(block);
    push(std::move(ev));
}

EpochOrder Simulation::final_order(uint32_t i) const {
    const Node& nd = nodes_[i];
    StreamingDiffSource diffs(nd.dag);
    return total_order(nd.dag, nd.scores, diffs, cfg_.tie_break);
}

UtxoState Simulation::final_utxo(uint32_t i) const {
    const Node& nd = nodes_[i];
    EpochOrder eo = final_order(i);
    PayloadSource src = [&nd](const BlockId& id) -> const BlockHeader* {
        auto it = nd.cache.find(id);
        return it == nd.cache.end() ? nullptr : it->second.get();
    };
    return apply_order(eo.order, src, nd.store.utxo_checkpoint());
}

void Simulation::finalize() {
    for (const Node& nd : nodes_) {
        met_.quiesce_us = std::max(met_.quiesce_us, nd.last_change_us);
        met_.orphans_pending += nd.pool.pending();
    }
    Hash256 h0 = nodes_[0].dag.state_hash();
    met_.converged = true;
    for (const Node& nd : nodes_)
        if (nd.dag.state_hash() != h0) met_.converged = false;

    const Node& n0 = nodes_[0];
    met_.blocks_total = n0.dag.size();
    PivotResult pr = pivot(n0.dag, n0.dag.genesis_id(), n0.scores, cfg_.tie_break);
    met_.pivot_depth = pr.chain.size();
    met_.inclusion_rate =
        static_cast<double>(oracle::past_ix(n0.dag, n0.dag.ix_of(pr.tip)).size()) /
        static_cast<double>(n0.dag.size());
    met_.sim_seconds = static_cast<double>(met_.end_us) / 1e6;
    met_.convergence_ms = met_.quiesce_us > met_.last_gen_us
                              ? static_cast<double>(met_.quiesce_us - met_.last_gen_us) / 1000.0
                              : 0.0;

    if (wl_) {
        UtxoState u = final_utxo(0);
        met_.txns_submitted = wl_->submitted;
        for (const TxnId& id : wl_->exec_ids) {
            if (u.accepted().count(id)) ++met_.txns_accepted;
            else if (u.rejected().count(id)) ++met_.txns_rejected;
            else ++met_.txns_undecided;
        }
        met_.conflict_pairs = wl_->conflicts.size();
        for (const ConflictPair& cp : wl_->conflicts) {
            int winners = (u.accepted().count(cp.a) ? 1 : 0) + (u.accepted().count(cp.b) ? 1 : 0);
            if (winners == 1) ++met_.conflict_one_winner;
            else if (winners == 0) ++met_.conflict_no_winner;
        }
        met_.ramp_accepted = true;
        for (const Transaction& t : wl_->queues[0][0].txns)
            if (!u.accepted().count(txn_id(t))) met_.ramp_accepted = false;
        if (met_.sim_seconds > 0)
            met_.tps = static_cast<double>(met_.txns_accepted) / met_.sim_seconds;
    }
    finalized_ = true;
}

std::string Simulation::report() const {
    if (!finalized_) throw std::logic_error("report before run");
    std::string out;
    char buf[192];
    auto kv = [&](const char* key, const std::string& val) {
        out += key;
        out += '=';
        out += val;
        out += '\n';
    };
    auto kvu = [&](const char* key, uint64_t v) {
        std::snprintf(buf, sizeof buf, "%" PRIu64, v);
        kv(key, buf);
    };
    auto kvf = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%.6f", v);
        kv(key, buf);
    };

    kv("config_hash", cfg_.config_hash());
    kv("topology", topo_.name);
    kvu("nodes", topo_.n_nodes);
    kvu("links", topo_.n_links());
    kv("mode", cfg_.mode == GossipMode::Signal ? "signal" : "mail");
    kvu("seed", cfg_.seed);

    kvu("blocks_generated", met_.blocks_generated);
    kvu("blocks_total", met_.blocks_total);
    kvu("pivot_depth", met_.pivot_depth);
    kvf("inclusion_rate", met_.inclusion_rate);
    kvu("converged", met_.converged ? 1 : 0);
    kvu("forwards", met_.forwards);
    kvu("persisted_blocks", nodes_[0].store.persisted_order().size());
    kvu("dropped_blocks", nodes_[0].store.dropped_count());
    kvu("stale_blocks", met_.stale_blocks);
    kvu("invalid_blocks", met_.invalid_blocks);
    kvu("orphans_pending", met_.orphans_pending);

    kvu("txns_submitted", met_.txns_submitted);
    kvu("txns_accepted", met_.txns_accepted);
    kvu("txns_rejected", met_.txns_rejected);
    kvu("txns_undecided", met_.txns_undecided);
    kvu("conflict_pairs", met_.conflict_pairs);
    kvu("conflict_one_winner", met_.conflict_one_winner);
    kvu("conflict_no_winner", met_.conflict_no_winner);
    kvu("ramp_accepted", met_.ramp_accepted ? 1 : 0);
    kvf("tps", met_.tps);
    kvf("sim_seconds", met_.sim_seconds);
    kvf("convergence_ms", met_.convergence_ms);

    kvu("msgs_block", met_.msgs_block);
    kvu("msgs_hash", met_.msgs_hash);
    kvu("msgs_request", met_.msgs_request);
    kvu("msgs_nack", met_.msgs_nack);
    kvu("bytes_block", met_.bytes_block);
    kvu("bytes_hash", met_.bytes_hash);
    kvu("bytes_request", met_.bytes_request);
    kvu("bytes_nack", met_.bytes_nack);
    kvu("msgs_dropped", met_.msgs_dropped);
    kvu("dup_block_receipts", met_.dup_block_receipts);
    kvu("pull_retries", met_.pull_retries);
    kvu("pull_failures", met_.pull_failures);

    for (uint32_t i = 0; i < n_nodes(); ++i) {
        std::snprintf(buf, sizeof buf, "node_hash_%u", i);
        std::string key = buf;
        kv(key.c_str(), to_hex(nodes_[i].dag.state_hash()));
    }
    return out;
}

}  // namespace streamnet
