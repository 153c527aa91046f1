#include <doctest.h>

#include <sstream>

#include "frqd/graph.hpp"
#include "frqd/rng.hpp"

using namespace frqd;

namespace {

Graph complete(int n) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

Graph path(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph star(int n) {
    Graph g(n);
    for (int i = 1; i < n; ++i) g.add_edge(0, i);
    return g;
}

Graph random_graph(int n, double density, Rng& rng) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform01() < density) g.add_edge(i, j);
    return g;
}

// Independent evaluation of (r,r')-redundancy straight from its definition:
// per-pair set intersections, 2-hop edges by threshold, connectivity by
// transitive closure. Shares no code with the implementation under test.
bool rr_redundant_by_definition(const Graph& g, int r, int r_prime) {
    const int n = g.n();
    auto shared = [&](int i, int j) {
        int c = 0;
        for (int k = 0; k < n; ++k)
            if ((g.has_edge(i, k) || k == i) && g.has_edge(j, k)) ++c;
        return c;
    };
    std::vector reach(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
        reach[i][i] = 1;
        for (int j = 0; j < n; ++j)
            if (i != j && shared(i, j) >= r) reach[i][j] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!reach[i][j]) return false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int c = shared(i, j);
            if (c < r && c > r_prime) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("shared neighbor counts") {
    CHECK(complete(4).shared_neighbor_count(0, 1) == 3);
    CHECK(path(3).shared_neighbor_count(0, 2) == 1);
    const Graph empty5(5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (i != j) CHECK(empty5.shared_neighbor_count(i, j) == 0);
    CHECK_THROWS_AS(complete(4).shared_neighbor_count(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(complete(4).shared_neighbor_count(2, 2), std::invalid_argument);
}

TEST_CASE("shared neighbor count symmetry and matrix equivalence") {
    Rng rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_index(24));
        const Graph g = random_graph(n, rng.uniform(0.05, 0.95), rng);
        const auto m = g.shared_neighbor_matrix();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                CHECK(g.shared_neighbor_count(i, j) == m[i][j]);
                CHECK(m[i][j] == m[j][i]);
                CHECK(m[i][j] <= g.degree(j) + 1);
            }
    }
}

TEST_CASE("two hop graph") {
    CHECK(two_hop_graph(complete(4), 3) == complete(4));
    CHECK(two_hop_graph(path(3), 1) == complete(3));

    const Graph h = two_hop_graph(star(6), 2);
    CHECK(h.edge_count() == 0);

    CHECK_THROWS_AS(two_hop_graph(path(3), 0), std::invalid_argument);
}

TEST_CASE("two hop output stays simple and undirected under random inputs") {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform_index(15));
        const Graph g = random_graph(n, rng.uniform(0.1, 0.9), rng);
        const Graph h = two_hop_graph(g, 1 + static_cast<int>(rng.uniform_index(4)));
        for (int i = 0; i < n; ++i) {
            CHECK(!h.has_edge(i, i));
            for (int j = 0; j < n; ++j) CHECK(h.has_edge(i, j) == h.has_edge(j, i));
        }
    }
}

TEST_CASE("redundancy verifier on known graphs") {
    CHECK(is_rr_redundant(complete(8), 7, 0).redundant);
    CHECK(is_rr_redundant(star(6), 1, 0).redundant);

    const auto bad = is_rr_redundant(path(4), 2, 0);
    CHECK(!bad.redundant);
    REQUIRE(bad.witness.has_value());
    if (bad.witness->kind == RedundancyWitness::Kind::violating_pair)
        CHECK(bad.witness->count == 1);

    CHECK_THROWS_AS(is_rr_redundant(path(4), 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(is_rr_redundant(path(4), 0, 0), std::invalid_argument);
}

TEST_CASE("redundancy verifier agrees with direct definition") {
    Rng rng(20240817);
    const std::pair<int, int> cases[] = {{1, 0}, {3, 1}, {7, 0}};
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_index(24));
        const Graph g = random_graph(n, rng.uniform(0.1, 0.9), rng);
        for (auto [r, rp] : cases)
            CHECK(is_rr_redundant(g, r, rp).redundant == rr_redundant_by_definition(g, r, rp));
    }
}

TEST_CASE("clique-core construction") {
    const Graph g = construct_redundant(10, 7);
    CHECK(g.edge_count() == 42);  // C(7,2) + 3*7
    for (int i = 0; i < 7; ++i)
        for (int j = i + 1; j < 7; ++j) CHECK(g.has_edge(i, j));
    for (int i = 7; i < 10; ++i) {
        for (int j = 0; j < 7; ++j) CHECK(g.has_edge(i, j));
        for (int j = 7; j < 10; ++j) CHECK((i == j || !g.has_edge(i, j)));
    }

    CHECK(construct_redundant(4, 3) == complete(4));
    CHECK(construct_redundant(5, 1) == star(5));
    CHECK_THROWS_AS(construct_redundant(3, 3), std::invalid_argument);
}

TEST_CASE("construction is redundant for every r' below r") {
    for (int r = 1; r <= 7; ++r)
        for (int n = r + 1; n <= r + 8; ++n) {
            const Graph g = construct_redundant(n, r);
            for (int rp = 0; rp < r; ++rp) CHECK(is_rr_redundant(g, r, rp).redundant);
        }
}

TEST_CASE("robustness brute force") {
    CHECK(is_r_robust_bruteforce(complete(6), 3));
    CHECK(!is_r_robust_bruteforce(path(4), 2));
    CHECK_THROWS_AS(is_r_robust_bruteforce(Graph(17), 1), std::invalid_argument);
}

TEST_CASE("construction robustness lower bound") {
    for (int r = 1; r <= 5; ++r)
        for (int n = r + 1; n <= 13; ++n) {
            const int bound = (r + 1 + 1) / 2;  // ceil((r+1)/2)
            CHECK(is_r_robust_bruteforce(construct_redundant(n, r), bound));
        }
}

TEST_CASE("laplacian") {
    const auto zero = laplacian(Graph(3));
    for (double v : zero) CHECK(v == 0.0);

    const auto k2 = laplacian(complete(2));
    CHECK(k2 == std::vector<double>{1, -1, -1, 1});

    const auto tri = laplacian(complete(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(tri[i * 3 + j] == (i == j ? 2.0 : -1.0));

    // Row sums vanish on random graphs.
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_index(12));
        const Graph g = random_graph(n, 0.5, rng);
        const auto L = laplacian(g);
        for (int i = 0; i < n; ++i) {
            double sum = 0;
            for (int j = 0; j < n; ++j) sum += L[i * n + j];
            CHECK(sum == 0.0);
        }
    }
}

TEST_CASE("connectivity") {
    CHECK(is_connected(path(5)));
    Graph two_edges(4);
    two_edges.add_edge(0, 1);
    two_edges.add_edge(2, 3);
    CHECK(!is_connected(two_edges));
    CHECK(is_connected(Graph(1)));
}

TEST_CASE("edge list io") {
    const Graph g = construct_redundant(6, 3);
    std::stringstream ss;
    write_edge_list(g, ss);
    CHECK(read_edge_list(ss) == g);

    std::istringstream self_loop("3\n0 0\n");
    CHECK_THROWS(read_edge_list(self_loop));
    std::istringstream dup("3\n0 1\n1 0\n");
    CHECK_THROWS(read_edge_list(dup));
    std::istringstream no_header("# nothing\n");
    CHECK_THROWS(read_edge_list(no_header));
    std::istringstream with_comments("# graph\n3\n0 1 # edge\n\n1 2\n");
    CHECK(read_edge_list(with_comments) == path(3));
}
