#ifndef FRQD_GRAPH_HPP
#define FRQD_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace frqd {

// Simple undirected graph over agent ids {0..n-1}, stored as a dense
// symmetric adjacency matrix. Immutable value semantics: topology changes
// produce new Graph objects.
class Graph {
public:
    explicit Graph(int n);

    int n() const { return n_; }

    bool has_edge(int i, int j) const {
        check_ids(i, j);
        return adj_[static_cast<std::size_t>(i) * n_ + j];
    }

    void add_edge(int i, int j);

    int degree(int i) const;
    std::vector<int> neighbors(int i) const;

    // |B_i ∩ N_j|: neighbors shared by i and j, counting i itself when i
    // is adjacent to j.
    int shared_neighbor_count(int i, int j) const;

    // Whole-matrix shared-neighbor counts via A^2 + A. Off-diagonal entry
    // (i,j) equals shared_neighbor_count(i, j); tested against the
    // set-intersection path.
    std::vector<std::vector<int>> shared_neighbor_matrix() const;

    std::vector<std::pair<int, int>> edges() const;
    int edge_count() const;

    bool operator==(const Graph& other) const = default;

private:
    void check_ids(int i, int j) const;

    int n_;
    std::vector<char> adj_;  // row-major n x n
};

// Derived graph with an edge (i,j) whenever i and j share at least r
// neighbors, counting i itself.
Graph two_hop_graph(const Graph& g, int r);

bool is_connected(const Graph& g);

// Graph Laplacian L = D - A, row-major n x n.
std::vector<double> laplacian(const Graph& g);

struct RedundancyWitness {
    enum class Kind { disconnected, violating_pair };
    Kind kind;
    int node = -1;       // unreachable node when disconnected
    int i = -1, j = -1;  // violating pair otherwise
    int count = -1;      // its shared-neighbor count

    std::string describe() const;
};

struct RedundancyResult {
    bool redundant;
    std::optional<RedundancyWitness> witness;
    explicit operator bool() const { return redundant; }
};

// True iff the r-2-hop graph of g is connected and every pair outside it
// shares at most r_prime neighbors. O(n^3). Requires r > r_prime >= 0.
RedundancyResult is_rr_redundant(const Graph& g, int r, int r_prime);

// Clique on {0..r-1} with every node >= r attached to all of the clique.
// Requires n > r >= 1.
Graph construct_redundant(int n, int r);

// Exhaustive robustness check: every pair of nonempty disjoint subsets
// S1, S2 contains a node with >= r neighbors outside its own subset.
// Exponential; guarded at n <= 16.
bool is_r_robust_bruteforce(const Graph& g, int r);

inline constexpr int kRobustnessGuard = 16;

// Edge-list text format: first line `n`, then one `i j` pair per line,
// `#` starts a comment. Self-loops and duplicate edges are rejected.
Graph read_edge_list(std::istream& in);
Graph load_edge_list(const std::string& path);
void write_edge_list(const Graph& g, std::ostream& out);
void save_edge_list(const Graph& g, const std::string& path);

}  // namespace frqd

#endif
