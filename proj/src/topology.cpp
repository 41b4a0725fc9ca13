#include "streamnet/topology.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace streamnet {

std::vector<std::vector<uint32_t>> Topology::adjacency() const {
    std::vector<std::vector<uint32_t>> adj(n_nodes);
    for (auto [a, b] : links) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());
    return adj;
}

void Topology::validate() const {
    if (n_nodes == 0) throw std::invalid_argument("topology: no nodes");
    std::set<std::pair<uint32_t, uint32_t>> seen;
    for (auto [a, b] : links) {
        if (a >= n_nodes || b >= n_nodes) throw std::invalid_argument("topology: node id out of range");
        if (a == b) throw std::invalid_argument("topology: self-loop");
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second) throw std::invalid_argument("topology: duplicate link");
    }
    // Connectivity by BFS from node 0.
    auto adj = adjacency();
    std::vector<uint8_t> vis(n_nodes, 0);
    std::vector<uint32_t> q = {0};
    vis[0] = 1;
    for (size_t i = 0; i < q.size(); ++i)
        for (uint32_t t : adj[q[i]])
            if (!vis[t]) {
                vis[t] = 1;
                q.push_back(t);
            }
    if (q.size() != n_nodes) throw std::invalid_argument("topology: not connected");
}

const std::vector<std::string>& builtin_topology_names() {
    static const std::vector<std::string> names = {
        "3-clique", "4-clique", "7-clique", "7-star", "4-circle", "7-circle", "7-bridge",
    };
    return names;
}

namespace {

Topology clique(const std::string& name, uint32_t n) {
    Topology t{name, n, {}};
    for (uint32_t a = 0; a < n; ++a)
        for (uint32_t b = a + 1; b < n; ++b) t.links.emplace_back(a, b);
    return t;
}

Topology circle(const std::string& name, uint32_t n) {
    Topology t{name, n, {}};
    for (uint32_t a = 0; a < n; ++a) t.links.emplace_back(std::min(a, (a + 1) % n), std::max(a, (a + 1) % n));
    std::sort(t.links.begin(), t.links.end());
    return t;
}

}  // namespace

Topology make_topology(const std::string& name) {
    Topology t;
    if (name == "3-clique") t = clique(name, 3);
    else if (name == "4-clique") t = clique(name, 4);
    else if (name == "7-clique") t = clique(name, 7);
    else if (name == "7-star") {
        t = Topology{name, 7, {}};
        for (uint32_t b = 1; b < 7; ++b) t.links.emplace_back(0, b);
    } else if (name == "4-circle") t = circle(name, 4);
    else if (name == "7-circle") t = circle(name, 7);
    else if (name == "7-bridge") {
        // Two cliques of 4 and 3 joined by a single link: long hops across.
        t = Topology{name, 7, {}};
        for (uint32_t a = 0; a < 4; ++a)
            for (uint32_t b = a + 1; b < 4; ++b) t.links.emplace_back(a, b);
        for (uint32_t a = 4; a < 7; ++a)
            for (uint32_t b = a + 1; b < 7; ++b) t.links.emplace_back(a, b);
        t.links.emplace_back(3, 4);
    } else {
        throw std::invalid_argument("unknown topology: " + name);
    }
    t.validate();
    return t;
}

Topology parse_topology_file(const std::string& text, const std::string& filename) {
    Topology t;
    t.name = "custom";
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool have_nodes = false;
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument(filename + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("nodes=", 0) == 0) {
            if (have_nodes) fail("duplicate nodes= header");
            try {
                t.n_nodes = static_cast<uint32_t>(std::stoul(line.substr(6)));
            } catch (const std::exception&) {
                fail("bad node count");
            }
            have_nodes = true;
            continue;
        }
        size_t tab = line.find('\t');
        if (tab == std::string::npos) fail("expected node_a<TAB>node_b");
        try {
            uint32_t a = static_cast<uint32_t>(std::stoul(line.substr(0, tab)));
            uint32_t b = static_cast<uint32_t>(std::stoul(line.substr(tab + 1)));
            t.links.emplace_back(std::min(a, b), std::max(a, b));
        } catch (const std::invalid_argument&) {
            fail("bad link line");
        } catch (const std::out_of_range&) {
            fail("bad link line");
        }
    }
    if (!have_nodes) {
        lineno = 0;
        fail("missing nodes=N header");
    }
    try {
        t.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(filename + ": " + e.what());
    }
    return t;
}

std::string format_topology(const Topology& t) {
    std::ostringstream os;
    os << "nodes=" << t.n_nodes << '\n';
    for (auto [a, b] : t.links) os << a << '\t' << b << '\n';
    return os.str();
}

}  // namespace streamnet
