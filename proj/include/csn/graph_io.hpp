#ifndef CSN_GRAPH_IO_HPP
#define CSN_GRAPH_IO_HPP

#include <iosfwd>
#include <string>

#include "csn/community.hpp"
#include "csn/network.hpp"

namespace csn {

// Tab-separated (from, to, weight) with a header line.
void write_edge_list(const SharingNetwork& net, std::ostream& out);
SharingNetwork read_edge_list(std::istream& in);

// GEXF 1.2, directed, with the edge weight attribute. The reader accepts the
// writer's output (lossless round-trip), not arbitrary GEXF.
void write_gexf(const SharingNetwork& net, std::ostream& out);
SharingNetwork read_gexf(std::istream& in);

// Graphviz digraph for quick rendering.
void write_dot(const SharingNetwork& net, std::ostream& out);

// Community-level graph emitters for the aggregated view.
void write_community_matrix(const CommunityGraph& cg, std::ostream& out);
void write_community_dot(const CommunityGraph& cg, std::ostream& out);
void write_community_gexf(const CommunityGraph& cg, std::ostream& out);

// Dispatch by format name: "edgelist", "gexf" or "dot".
void export_network(const SharingNetwork& net, const std::string& format,
                    std::ostream& out);

}  // namespace csn

#endif
