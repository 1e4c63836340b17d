#ifndef CSN_COMMUNITY_HPP
#define CSN_COMMUNITY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "csn/network.hpp"

namespace csn {

struct Partition {
    std::map<std::string, std::uint32_t> assignment;  // source_id -> label
    double modularity = 0.0;
    std::uint32_t n_communities = 0;
};

struct CommunityGraph {
    std::map<std::uint32_t, std::size_t> member_counts;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> edges;
};

struct CentralityResult {
    std::map<std::string, double> scores;  // L2-normalized, nonnegative
    bool converged = false;
    std::size_t iterations = 0;
};

enum class CentralityOrientation {
    In,   // a node pointed to by high-score nodes gains score (default)
    Out,  // score flows against edge direction
};

struct KCoreResult {
    std::uint32_t k = 0;  // main-core degree
    std::vector<std::string> members;
};

// Directed modularity of an assignment:
//   Q = (1/m) sum_{u,v} [W(u,v) - out(u) in(v) / m] delta(c_u, c_v)
// with W the weighted adjacency and m the total edge weight. Throws on an
// empty network or an assignment that misses a node.
double directed_modularity(const SharingNetwork& net,
                           const std::map<std::string, std::uint32_t>& assignment);

// Directed modularity maximization: recursive spectral bisection on the
// symmetrized modularity matrix with Kernighan-Lin node-swap fine-tuning after
// each split, followed by greedy single-node moves and community merges.
// Weakly connected components are partitioned independently. Deterministic.
Partition detect_communities(const SharingNetwork& net, double min_dq = 1e-10);

// Aggregates network edges by community, keeping self-loops. When `symmetric`
// is set the (x, y) and (y, x) cells are summed into the upper triangle,
// matching the both-directions tabulation convention.
CommunityGraph community_graph(const SharingNetwork& net, const Partition& partition,
                               bool symmetric = false);

// Main core of the subgraph induced by `members` (all nodes when empty),
// peeling on the undirected unweighted view with degree = in + out.
KCoreResult k_core(const SharingNetwork& net,
                   const std::vector<std::string>& members = {});

// Power iteration on the weighted adjacency; convergence when the successive
// L2 difference drops below `tol` (max `max_iter` iterations).
CentralityResult eigenvector_centrality(
    const SharingNetwork& net,
    CentralityOrientation orientation = CentralityOrientation::In,
    double tol = 1e-10, std::size_t max_iter = 1000);

}  // namespace csn

#endif
