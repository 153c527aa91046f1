#include "frqd/graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace frqd {

Graph::Graph(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("Graph: n must be positive");
    adj_.assign(static_cast<std::size_t>(n) * n, 0);
}

void Graph::check_ids(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::invalid_argument("Graph: agent id out of range");
}

void Graph::add_edge(int i, int j) {
    check_ids(i, j);
    if (i == j) throw std::invalid_argument("Graph: self-loops not allowed");
    adj_[static_cast<std::size_t>(i) * n_ + j] = 1;
    adj_[static_cast<std::size_t>(j) * n_ + i] = 1;
}

int Graph::degree(int i) const {
    check_ids(i, i);
    int d = 0;
    for (int j = 0; j < n_; ++j) d += adj_[static_cast<std::size_t>(i) * n_ + j];
    return d;
}

std::vector<int> Graph::neighbors(int i) const {
    check_ids(i, i);
    std::vector<int> out;
    for (int j = 0; j < n_; ++j)
        if (adj_[static_cast<std::size_t>(i) * n_ + j]) out.push_back(j);
    return out;
}

int Graph::shared_neighbor_count(int i, int j) const {
    check_ids(i, j);
    if (i == j) throw std::invalid_argument("shared_neighbor_count: i == j");
    const char* row_i = &adj_[static_cast<std::size_t>(i) * n_];
    const char* row_j = &adj_[static_cast<std::size_t>(j) * n_];
    // |B_i ∩ N_j| = |N_i ∩ N_j| + [i ∈ N_j]
    int c = row_j[i] ? 1 : 0;
    for (int k = 0; k < n_; ++k) c += (row_i[k] && row_j[k]) ? 1 : 0;
    return c;
}

std::vector<std::vector<int>> Graph::shared_neighbor_matrix() const {
    // (A^2 + A)_{ij} = |N_i ∩ N_j| + a_{ij} = |B_i ∩ N_j| for i != j.
    std::vector<std::vector<int>> out(n_, std::vector<int>(n_, 0));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_; ++i) {
        const char* row_i = &adj_[static_cast<std::size_t>(i) * n_];
        for (int k = 0; k < n_; ++k) {
            if (!row_i[k]) continue;
            const char* row_k = &adj_[static_cast<std::size_t>(k) * n_];
            for (int j = 0; j < n_; ++j) out[i][j] += row_k[j];
        }
        for (int j = 0; j < n_; ++j) out[i][j] += row_i[j];
    }
    return out;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (adj_[static_cast<std::size_t>(i) * n_ + j]) out.emplace_back(i, j);
    return out;
}

int Graph::edge_count() const {
    int c = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            c += adj_[static_cast<std::size_t>(i) * n_ + j];
    return c;
}

Graph two_hop_graph(const Graph& g, int r) {
    if (r < 1) throw std::invalid_argument("two_hop_graph: r must be >= 1");
    const auto counts = g.shared_neighbor_matrix();
    Graph out(g.n());
    for (int i = 0; i < g.n(); ++i)
        for (int j = i + 1; j < g.n(); ++j)
            if (counts[i][j] >= r) out.add_edge(i, j);
    return out;
}

bool is_connected(const Graph& g) {
    std::vector<char> seen(g.n(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w = 0; w < g.n(); ++w) {
            if (g.has_edge(v, w) && !seen[w]) {
                seen[w] = 1;
                ++reached;
                q.push(w);
            }
        }
    }
    return reached == g.n();
}

std::vector<double> laplacian(const Graph& g) {
    const int n = g.n();
    std::vector<double> L(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        int d = 0;
        for (int j = 0; j < n; ++j) {
            if (g.has_edge(i, j)) {
                L[static_cast<std::size_t>(i) * n + j] = -1.0;
                ++d;
            }
        }
        L[static_cast<std::size_t>(i) * n + i] = static_cast<double>(d);
    }
    return L;
}

std::string RedundancyWitness::describe() const {
    std::ostringstream os;
    if (kind == Kind::disconnected) {
        os << "r-2-hop graph disconnected: node " << node << " unreachable from node 0";
    } else {
        os << "pair (" << i << "," << j << ") shares " << count
           << " neighbors, inside the forbidden gap";
    }
    return os.str();
}

RedundancyResult is_rr_redundant(const Graph& g, int r, int r_prime) {
    if (r_prime < 0 || r <= r_prime)
        throw std::invalid_argument("is_rr_redundant: requires r > r' >= 0");
    const auto counts = g.shared_neighbor_matrix();

    Graph hop(g.n());
    for (int i = 0; i < g.n(); ++i)
        for (int j = i + 1; j < g.n(); ++j)
            if (counts[i][j] >= r) hop.add_edge(i, j);

    if (!is_connected(hop)) {
        std::vector<char> seen(g.n(), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w = 0; w < g.n(); ++w)
                if (hop.has_edge(v, w) && !seen[w]) {
                    seen[w] = 1;
                    q.push(w);
                }
        }
        RedundancyWitness w{RedundancyWitness::Kind::disconnected};
        for (int v = 0; v < g.n(); ++v)
            if (!seen[v]) {
                w.node = v;
                break;
            }
        return {false, w};
    }

    for (int i = 0; i < g.n(); ++i) {
        for (int j = i + 1; j < g.n(); ++j) {
            if (counts[i][j] < r && counts[i][j] > r_prime) {
                RedundancyWitness w{RedundancyWitness::Kind::violating_pair};
                w.i = i;
                w.j = j;
                w.count = counts[i][j];
                return {false, w};
            }
        }
    }
    return {true, std::nullopt};
}

Graph construct_redundant(int n, int r) {
    if (r < 1) throw std::invalid_argument("construct_redundant: r must be >= 1");
    if (n <= r) throw std::invalid_argument("construct_redundant: requires n > r");
    Graph g(n);
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) g.add_edge(i, j);
    for (int i = r; i < n; ++i)
        for (int j = 0; j < r; ++j) g.add_edge(i, j);
    return g;
}

namespace {

// One assignment of nodes to {neither, S1, S2}, encoded base 3. Returns
// true when some node in S1 ∪ S2 has >= r neighbors outside its subset.
bool assignment_ok(const Graph& g, const std::vector<int>& side, int r) {
    for (int i = 0; i < g.n(); ++i) {
        if (side[i] == 0) continue;
        int outside = 0;
        for (int j = 0; j < g.n(); ++j)
            if (g.has_edge(i, j) && side[j] != side[i]) ++outside;
        if (outside >= r) return true;
    }
    return false;
}

}  // namespace

bool is_r_robust_bruteforce(const Graph& g, int r) {
    if (r < 1) throw std::invalid_argument("is_r_robust_bruteforce: r must be >= 1");
    const int n = g.n();
    if (n > kRobustnessGuard)
        throw std::invalid_argument(
            "is_r_robust_bruteforce: n exceeds the exhaustive-search guard");

    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= 3;

    bool robust = true;
#pragma omp parallel
    {
        std::vector<int> side(n, 0);
#pragma omp for schedule(dynamic, 4096)
        for (long long codell = 0; codell < static_cast<long long>(total); ++codell) {
#ifdef _OPENMP
            // Cooperative early exit: skip remaining work once falsified.
            bool still_robust;
#pragma omp atomic read
            still_robust = robust;
            if (!still_robust) continue;
#endif
            auto code = static_cast<std::uint64_t>(codell);
            bool has1 = false, has2 = false;
            int first_nonzero = -1;
            for (int i = 0; i < n; ++i) {
                side[i] = static_cast<int>(code % 3);
                code /= 3;
                if (side[i] != 0 && first_nonzero < 0) first_nonzero = i;
                has1 |= side[i] == 1;
                has2 |= side[i] == 2;
            }
            // Both subsets nonempty; break (S1,S2)/(S2,S1) symmetry by
            // pinning the lowest assigned node to S1.
            if (!has1 || !has2 || side[first_nonzero] != 1) continue;
            if (!assignment_ok(g, side, r)) {
#pragma omp atomic write
                robust = false;
            }
        }
    }
    return robust;
}

Graph read_edge_list(std::istream& in) {
    std::string line;
    int n = -1;
    std::optional<Graph> g;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (n < 0) {
            if (!(ls >> n)) continue;  // skip blank/comment lines before header
            if (n < 1) throw std::runtime_error("edge list: invalid agent count");
            g.emplace(n);
            continue;
        }
        int i, j;
        if (!(ls >> i)) continue;
        if (!(ls >> j))
            throw std::runtime_error("edge list: malformed line " + std::to_string(lineno));
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw std::runtime_error("edge list: id out of range at line " +
                                     std::to_string(lineno));
        if (i == j)
            throw std::runtime_error("edge list: self-loop at line " + std::to_string(lineno));
        if (g->has_edge(i, j))
            throw std::runtime_error("edge list: duplicate edge at line " +
                                     std::to_string(lineno));
        g->add_edge(i, j);
    }
    if (!g) throw std::runtime_error("edge list: missing agent count header");
    return *g;
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return read_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << g.n() << "\n";
    for (auto [i, j] : g.edges()) out << i << " " << j << "\n";
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file: " + path);
    write_edge_list(g, out);
}

}  // namespace frqd
