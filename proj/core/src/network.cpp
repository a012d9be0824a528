#include "ridemarket/network.hpp"

#include "ridemarket/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <queue>
#include <sstream>

namespace ridemarket {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_double(const std::string& s, const std::filesystem::path& file, int line) {
    double v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError(file.string(), line, "expected a number, got '" + s + "'");
    return v;
}

std::int64_t parse_int(const std::string& s, const std::filesystem::path& file, int line) {
    std::int64_t v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError(file.string(), line, "expected an integer, got '" + s + "'");
    return v;
}

} // namespace

RoadNetwork::RoadNetwork(std::vector<Node> nodes, std::vector<Edge> edges, double speed_mps,
                         std::size_t all_pairs_threshold)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), speed_mps_(speed_mps) {
    if (nodes_.empty())
        throw InputError("network has no nodes");
    if (!(speed_mps_ > 0.0))
        throw InputError("vehicle speed must be positive");

    index_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        auto [it, inserted] = index_.emplace(nodes_[i].id, i);
        (void)it;
        if (!inserted)
            throw InputError("duplicate node id " + std::to_string(nodes_[i].id));
    }

    std::vector<std::size_t> degree(nodes_.size(), 0);
    for (const Edge& e : edges_) {
        if (!(e.length_m > 0.0))
            throw InputError("edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                             " has non-positive length");
        auto fi = index_.find(e.from);
        auto ti = index_.find(e.to);
        if (fi == index_.end())
            throw InputError("edge references unknown node " + std::to_string(e.from));
        if (ti == index_.end())
            throw InputError("edge references unknown node " + std::to_string(e.to));
        ++degree[fi->second];
    }

    adj_offset_.assign(nodes_.size() + 1, 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        adj_offset_[i + 1] = adj_offset_[i] + degree[i];
    adj_.resize(edges_.size());
    std::vector<std::size_t> cursor(adj_offset_.begin(), adj_offset_.end() - 1);
    for (const Edge& e : edges_) {
        std::size_t fi = index_.at(e.from);
        adj_[cursor[fi]++] = {index_.at(e.to), e.length_m};
    }

    prefilled_ = nodes_.size() <= all_pairs_threshold;
    if (prefilled_) {
        all_pairs_.assign(nodes_.size() * nodes_.size(), kInf);
        for (std::size_t s = 0; s < nodes_.size(); ++s) {
            std::vector<double> row = dijkstra_row(s);
            std::copy(row.begin(), row.end(), all_pairs_.begin() + s * nodes_.size());
        }
        for (std::size_t s = 0; s < nodes_.size(); ++s)
            for (std::size_t t = 0; t < nodes_.size(); ++t)
                if (all_pairs_[s * nodes_.size() + t] == kInf)
                    throw ConnectivityError(nodes_[s].id, nodes_[t].id);
    } else {
        // Strong connectivity without the full table: forward and reverse
        // reachability from node 0.
        auto bfs = [&](bool forward) {
            std::vector<char> seen(nodes_.size(), 0);
            std::vector<std::size_t> stack{0};
            seen[0] = 1;
            std::vector<std::vector<std::size_t>> radj;
            if (!forward) {
                radj.resize(nodes_.size());
                for (const Edge& e : edges_)
                    radj[index_.at(e.to)].push_back(index_.at(e.from));
            }
            while (!stack.empty()) {
                std::size_t u = stack.back();
                stack.pop_back();
                if (forward) {
                    for (std::size_t k = adj_offset_[u]; k < adj_offset_[u + 1]; ++k) {
                        std::size_t v = adj_[k].first;
                        if (!seen[v]) {
                            seen[v] = 1;
                            stack.push_back(v);
                        }
                    }
                } else {
                    for (std::size_t v : radj[u])
                        if (!seen[v]) {
                            seen[v] = 1;
                            stack.push_back(v);
                        }
                }
            }
            return seen;
        };
        auto fwd = bfs(true);
        auto rev = bfs(false);
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (!fwd[i])
                throw ConnectivityError(nodes_[0].id, nodes_[i].id);
            if (!rev[i])
                throw ConnectivityError(nodes_[i].id, nodes_[0].id);
        }
    }
}

RoadNetwork::RoadNetwork(const RoadNetwork& other)
    : nodes_(other.nodes_), edges_(other.edges_), speed_mps_(other.speed_mps_),
      index_(other.index_), adj_offset_(other.adj_offset_), adj_(other.adj_),
      all_pairs_(other.all_pairs_), prefilled_(other.prefilled_) {}

RoadNetwork& RoadNetwork::operator=(const RoadNetwork& other) {
    if (this == &other)
        return *this;
    nodes_ = other.nodes_;
    edges_ = other.edges_;
    speed_mps_ = other.speed_mps_;
    index_ = other.index_;
    adj_offset_ = other.adj_offset_;
    adj_ = other.adj_;
    all_pairs_ = other.all_pairs_;
    prefilled_ = other.prefilled_;
    std::unique_lock lock(cache_mutex_);
    row_cache_.clear();
    return *this;
}

std::size_t RoadNetwork::node_index(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        throw InputError("unknown node id " + std::to_string(id));
    return it->second;
}

std::vector<double> RoadNetwork::dijkstra_row(std::size_t from) const {
    std::vector<double> dist(nodes_.size(), kInf);
    dist[from] = 0.0;
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, from);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u])
            continue;
        for (std::size_t k = adj_offset_[u]; k < adj_offset_[u + 1]; ++k) {
            auto [v, w] = adj_[k];
            double nd = d + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    return dist;
}

const std::vector<double>& RoadNetwork::source_row(std::size_t from) const {
    {
        std::shared_lock lock(cache_mutex_);
        auto it = row_cache_.find(from);
        if (it != row_cache_.end())
            return it->second;
    }
    std::vector<double> row = dijkstra_row(from);
    std::unique_lock lock(cache_mutex_);
    auto [it, inserted] = row_cache_.emplace(from, std::move(row));
    (void)inserted;
    return it->second;
}

double RoadNetwork::path_length_by_index(std::size_t from, std::size_t to) const {
    double d;
    if (prefilled_) {
        d = all_pairs_[from * nodes_.size() + to];
    } else {
        d = source_row(from)[to];
    }
    if (d == kInf)
        throw ConnectivityError(nodes_[from].id, nodes_[to].id);
    return d;
}

double RoadNetwork::shortest_path_length(NodeId origin, NodeId destination) const {
    return path_length_by_index(node_index(origin), node_index(destination));
}

double RoadNetwork::shortest_travel_time(NodeId origin, NodeId destination) const {
    return shortest_path_length(origin, destination) / speed_mps_;
}

RoadNetwork generate_grid(int rows, int cols, double edge_length_m, double speed_mps) {
    if (rows < 2 || cols < 2)
        throw InputError("grid dimensions must be at least 2x2");
    if (!(edge_length_m > 0.0))
        throw InputError("grid edge length must be positive");
    std::vector<RoadNetwork::Node> nodes;
    nodes.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            nodes.push_back({static_cast<NodeId>(r) * cols + c, c * edge_length_m, r * edge_length_m});
    std::vector<RoadNetwork::Edge> edges;
    auto id = [cols](int r, int c) { return static_cast<NodeId>(r) * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) {
                edges.push_back({id(r, c), id(r, c + 1), edge_length_m});
                edges.push_back({id(r, c + 1), id(r, c), edge_length_m});
            }
            if (r + 1 < rows) {
                edges.push_back({id(r, c), id(r + 1, c), edge_length_m});
                edges.push_back({id(r + 1, c), id(r, c), edge_length_m});
            }
        }
    return RoadNetwork(std::move(nodes), std::move(edges), speed_mps);
}

RoadNetwork load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open network file '" + path.string() + "'");

    double speed = 0.0;
    bool speed_seen = false;
    std::vector<RoadNetwork::Node> nodes;
    std::vector<RoadNetwork::Edge> edges;

    enum class Section { header, nodes, edges };
    Section section = Section::header;
    bool columns_seen = false;

    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#')
            continue;
        if (line.front() == '[') {
            if (line == "[nodes]") {
                section = Section::nodes;
            } else if (line == "[edges]") {
                section = Section::edges;
            } else {
                throw ParseError(path.string(), lineno, "unknown section '" + line + "'");
            }
            columns_seen = false;
            continue;
        }
        switch (section) {
        case Section::header: {
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError(path.string(), lineno, "expected 'key = value' before any section");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key == "speed_mps") {
                speed = parse_double(value, path, lineno);
                speed_seen = true;
            } else {
                throw ParseError(path.string(), lineno, "unknown header key '" + key + "'");
            }
            break;
        }
        case Section::nodes: {
            auto fields = split_fields(line);
            if (!columns_seen) {
                if (fields != std::vector<std::string>{"id", "x_m", "y_m"})
                    throw ParseError(path.string(), lineno, "[nodes] columns must be 'id, x_m, y_m'");
                columns_seen = true;
                break;
            }
            if (fields.size() != 3)
                throw ParseError(path.string(), lineno, "node row needs 3 fields");
            nodes.push_back({parse_int(fields[0], path, lineno), parse_double(fields[1], path, lineno),
                             parse_double(fields[2], path, lineno)});
            break;
        }
        case Section::edges: {
            auto fields = split_fields(line);
            if (!columns_seen) {
                if (fields != std::vector<std::string>{"from_id", "to_id", "length_m"})
                    throw ParseError(path.string(), lineno,
                                     "[edges] columns must be 'from_id, to_id, length_m'");
                columns_seen = true;
                break;
            }
            if (fields.size() != 3)
                throw ParseError(path.string(), lineno, "edge row needs 3 fields");
            edges.push_back({parse_int(fields[0], path, lineno), parse_int(fields[1], path, lineno),
                             parse_double(fields[2], path, lineno)});
            break;
        }
        }
    }
    if (!speed_seen)
        throw ParseError(path.string(), 1, "missing 'speed_mps' header");
    if (nodes.empty())
        throw ParseError(path.string(), lineno, "no nodes defined");

    try {
        return RoadNetwork(std::move(nodes), std::move(edges), speed);
    } catch (const InputError& e) {
        throw InputError(std::string(e.what()) + " (in '" + path.string() + "')");
    }
}

void save_network(const RoadNetwork& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write network file '" + path.string() + "'");
    out.precision(17);
    out << "speed_mps = " << net.speed_mps() << "\n\n[nodes]\nid, x_m, y_m\n";
    for (const auto& n : net.nodes())
        out << n.id << ", " << n.x_m << ", " << n.y_m << "\n";
    out << "\n[edges]\nfrom_id, to_id, length_m\n";
    for (const auto& e : net.edges())
        out << e.from << ", " << e.to << ", " << e.length_m << "\n";
}

} // namespace ridemarket
