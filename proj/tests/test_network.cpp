#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "csn/graph_io.hpp"
#include "csn/network.hpp"

using namespace csn;

namespace {

Corpus timeline(const std::vector<std::tuple<std::string, std::string, std::int64_t>>&
                    specs) {
    std::vector<Article> arts;
    for (const auto& [id, src, t] : specs) {
        Article a;
        a.article_id = id;
        a.source_id = src;
        a.body = "body of " + id;
        a.published_utc = t;
        arts.push_back(std::move(a));
    }
    return make_corpus(std::move(arts));
}

VerbatimPair vp(const std::string& a, const std::string& b, double cos) {
    VerbatimPair p;
    p.article_a = std::min(a, b);
    p.article_b = std::max(a, b);
    p.cosine = cos;
    return p;
}

}  // namespace

TEST_CASE("strictly ordered timestamps orient the pair") {
    const Corpus c = timeline({{"A", "s1", 10}, {"B", "s2", 20}});
    const auto ordered = orient_pairs({vp("A", "B", 0.9)}, c);
    REQUIRE(ordered.size() == 1);
    CHECK(ordered[0].original == "A");
    CHECK(ordered[0].copy == "B");
}

TEST_CASE("equal timestamps break by (source_id, article_id)") {
    const Corpus c = timeline({{"X", "s2", 10}, {"Y", "s1", 10}});
    const auto ordered = orient_pairs({vp("X", "Y", 0.9)}, c);
    REQUIRE(ordered.size() == 1);
    CHECK(ordered[0].original == "Y");  // s1 < s2
    CHECK(ordered[0].copy == "X");
}

TEST_CASE("four mutually similar articles yield six oriented pairs") {
    const Corpus c = timeline(
        {{"A", "s1", 1}, {"B", "s2", 2}, {"C", "s3", 3}, {"D", "s4", 4}});
    std::vector<VerbatimPair> pairs;
    const std::vector<std::string> ids = {"A", "B", "C", "D"};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) pairs.push_back(vp(ids[i], ids[j], 0.9));
    CHECK(orient_pairs(pairs, c).size() == 6);
}

TEST_CASE("attribution picks the highest-cosine older article") {
    const Corpus c = timeline({{"O1", "s1", 1}, {"O2", "s2", 2}, {"C", "s3", 10}});
    const auto ordered = orient_pairs({vp("O1", "C", 0.90), vp("O2", "C", 0.95)}, c);
    const auto copies = attribute_copies(ordered, c);
    REQUIRE(copies.size() == 1);
    CHECK(copies[0].original == "O2");
    CHECK(copies[0].copy == "C");
    CHECK(copies[0].lag_seconds == 8);
}

TEST_CASE("cosine ties go to the oldest candidate") {
    const Corpus c = timeline({{"O1", "s1", 1}, {"O2", "s2", 5}, {"C", "s3", 10}});
    const auto ordered = orient_pairs({vp("O1", "C", 0.95), vp("O2", "C", 0.95)}, c);
    const auto copies = attribute_copies(ordered, c);
    REQUIRE(copies.size() == 1);
    CHECK(copies[0].original == "O1");
}

TEST_CASE("chain A->B->C with cos(A,C) highest attributes both copies to A") {
    const Corpus c = timeline({{"A", "s1", 1}, {"B", "s2", 2}, {"C", "s3", 3}});
    const auto ordered = orient_pairs(
        {vp("A", "B", 0.90), vp("B", "C", 0.88), vp("A", "C", 0.95)}, c);
    const auto copies = attribute_copies(ordered, c);
    REQUIRE(copies.size() == 2);
    // Output is sorted by copy id: B then C.
    CHECK(copies[0].copy == "B");
    CHECK(copies[0].original == "A");
    CHECK(copies[1].copy == "C");
    CHECK(copies[1].original == "A");
}

TEST_CASE("attribution is deterministic under input permutation") {
    const Corpus c = timeline({{"A", "s1", 1},
                               {"B", "s2", 2},
                               {"C", "s3", 3},
                               {"D", "s4", 3},
                               {"E", "s5", 9}});
    std::vector<VerbatimPair> pairs = {vp("A", "E", 0.9), vp("B", "E", 0.9),
                                       vp("C", "E", 0.9), vp("D", "E", 0.9),
                                       vp("A", "C", 0.88)};
    std::mt19937 rng(5);
    const auto baseline = attribute_copies(orient_pairs(pairs, c), c);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(pairs.begin(), pairs.end(), rng);
        const auto copies = attribute_copies(orient_pairs(pairs, c), c);
        REQUIRE(copies.size() == baseline.size());
        for (std::size_t i = 0; i < copies.size(); ++i) {
            CHECK(copies[i].original == baseline[i].original);
            CHECK(copies[i].copy == baseline[i].copy);
        }
    }
}

TEST_CASE("each copy is attributed at most once and lag is nonnegative") {
    const Corpus c = timeline({{"A", "s1", 1}, {"B", "s2", 2}, {"C", "s3", 3}});
    const auto ordered = orient_pairs(
        {vp("A", "B", 0.9), vp("B", "C", 0.9), vp("A", "C", 0.9)}, c);
    const auto copies = attribute_copies(ordered, c);
    std::set<std::string> seen;
    for (const AttributedCopy& a : copies) {
        CHECK(seen.insert(a.copy).second);
        CHECK(a.lag_seconds >= 0);
    }
}

TEST_CASE("minimum lag filter drops same-second pairs") {
    const Corpus c = timeline({{"A", "s1", 100}, {"B", "s2", 100}, {"D", "s4", 500}});
    const auto ordered = orient_pairs({vp("A", "B", 0.9), vp("A", "D", 0.9)}, c);
    CHECK(attribute_copies(ordered, c, 0).size() == 2);
    const auto filtered = attribute_copies(ordered, c, 1);
    REQUIRE(filtered.size() == 1);
    CHECK(filtered[0].copy == "D");
}

TEST_CASE("network aggregates edge weights") {
    const Corpus c = timeline({{"A1", "s1", 1},
                               {"A2", "s1", 2},
                               {"A3", "s1", 3},
                               {"B1", "s2", 10},
                               {"B2", "s2", 11},
                               {"B3", "s2", 12}});
    std::vector<AttributedCopy> copies;
    for (int i = 1; i <= 3; ++i) {
        AttributedCopy a;
        a.original = "A" + std::to_string(i);
        a.copy = "B" + std::to_string(i);
        a.original_source = "s1";
        a.copy_source = "s2";
        copies.push_back(a);
    }
    const SharingNetwork net = build_network(copies);
    REQUIRE(net.edges.size() == 1);
    CHECK(net.edges.at({"s1", "s2"}) == 3);
    CHECK(net.nodes == std::vector<std::string>{"s1", "s2"});
    CHECK(net.total_weight() == 3);
}

TEST_CASE("intra-source copies are excluded and logged as republications") {
    std::vector<AttributedCopy> copies(2);
    copies[0] = {"X", "Y", 0.9, "s1", "s1", 60};
    copies[1] = {"X", "Z", 0.9, "s1", "s2", 60};
    std::vector<AttributedCopy> republications;
    const SharingNetwork net = build_network(copies, &republications);
    CHECK(net.total_weight() == 1);
    REQUIRE(republications.size() == 1);
    CHECK(republications[0].copy == "Y");
}

TEST_CASE("edge list round trip") {
    SharingNetwork net;
    net.edges[{"s1", "s2"}] = 3;
    net.edges[{"s2", "s3"}] = 1;
    net.nodes = {"s1", "s2", "s3"};
    std::stringstream ss;
    write_edge_list(net, ss);
    const SharingNetwork back = read_edge_list(ss);
    CHECK(back.edges == net.edges);
    CHECK(back.nodes == net.nodes);
}

TEST_CASE("GEXF round trip and schema shape") {
    SharingNetwork net;
    net.edges[{"a source", "b <&> source"}] = 7;
    net.nodes = {"a source", "b <&> source"};
    std::stringstream ss;
    write_gexf(net, ss);
    const std::string xml = ss.str();
    CHECK(std::count(xml.begin(), xml.end(), '\n') > 5);
    CHECK(xml.find("<node ") != std::string::npos);
    CHECK(xml.find("defaultedgetype=\"directed\"") != std::string::npos);
    CHECK(xml.find("weight=\"7\"") != std::string::npos);

    std::stringstream in(xml);
    const SharingNetwork back = read_gexf(in);
    CHECK(back.edges == net.edges);
    CHECK(back.nodes == net.nodes);
}

TEST_CASE("unsupported export format is an error") {
    SharingNetwork net;
    std::stringstream ss;
    CHECK_THROWS(export_network(net, "svg", ss));
}
