#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "csn/corpus.hpp"
#include "csn/synth.hpp"

using namespace csn;

namespace {

Article art(const std::string& id, const std::string& src, const std::string& body,
            std::int64_t t) {
    Article a;
    a.article_id = id;
    a.source_id = src;
    a.body = body;
    a.published_utc = t;
    return a;
}

std::string write_temp(const std::string& content) {
    static int counter = 0;
    const std::string path =
        "/tmp/csn_corpus_test_" + std::to_string(counter++) + ".jsonl";
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("ISO-8601 round trip") {
    std::int64_t t = 0;
    REQUIRE(parse_iso8601_utc("2020-01-01T00:00:00Z", t));
    CHECK(t == 1577836800);
    CHECK(format_iso8601_utc(t) == "2020-01-01T00:00:00Z");
    REQUIRE(parse_iso8601_utc("1999-12-31T23:59:59", t));
    CHECK(format_iso8601_utc(t) == "1999-12-31T23:59:59Z");
    CHECK_FALSE(parse_iso8601_utc("not a date", t));
    CHECK_FALSE(parse_iso8601_utc("2020-13-01T00:00:00Z", t));
    CHECK_FALSE(parse_iso8601_utc("2020-02-30T00:00:00Z", t));
}

TEST_CASE("three valid records load with correct span") {
    const std::string path = write_temp(
        R"({"article_id":"a1","source_id":"s1","title":"t","body":"one","published_utc":"2020-01-01T00:00:00Z"})"
        "\n"
        R"({"article_id":"a2","source_id":"s2","title":"t","body":"two","published_utc":"2020-01-03T00:00:00Z"})"
        "\n"
        R"({"article_id":"a3","source_id":"s1","title":"t","body":"three","published_utc":"2020-01-02T00:00:00Z"})"
        "\n");
    std::ostringstream diag;
    LoadReport report;
    const Corpus c = load_corpus(path, diag, &report);
    CHECK(c.articles.size() == 3);
    CHECK(report.rejected == 0);
    CHECK(c.sources == std::set<std::string>{"s1", "s2"});
    CHECK(c.span_min == 1577836800);
    CHECK(c.span_max == 1577836800 + 2 * kSecondsPerDay);
}

TEST_CASE("whitespace-only body is rejected and reported") {
    const std::string path = write_temp(
        R"({"article_id":"a1","source_id":"s1","title":"t","body":"ok","published_utc":"2020-01-01T00:00:00Z"})"
        "\n"
        R"({"article_id":"a2","source_id":"s1","title":"t","body":"  \n ","published_utc":"2020-01-01T00:00:00Z"})"
        "\n"
        R"({"article_id":"a3","source_id":"s1","title":"t","body":"ok","published_utc":"2020-01-01T00:00:00Z"})"
        "\n");
    std::ostringstream diag;
    LoadReport report;
    const Corpus c = load_corpus(path, diag, &report);
    CHECK(c.articles.size() == 2);
    CHECK(report.rejected == 1);
    CHECK(diag.str().find(":2:") != std::string::npos);
}

TEST_CASE("duplicate ids and bad timestamps are rejected with line numbers") {
    const std::string path = write_temp(
        R"({"article_id":"a1","source_id":"s1","title":"t","body":"x","published_utc":"2020-01-01T00:00:00Z"})"
        "\n"
        R"({"article_id":"a1","source_id":"s1","title":"t","body":"y","published_utc":"2020-01-01T00:00:00Z"})"
        "\n"
        R"({"article_id":"a2","source_id":"s1","title":"t","body":"z","published_utc":"whenever"})"
        "\n"
        "this is not json\n");
    std::ostringstream diag;
    LoadReport report;
    const Corpus c = load_corpus(path, diag, &report);
    CHECK(c.articles.size() == 1);
    CHECK(report.rejected == 3);
    CHECK(diag.str().find(":2:") != std::string::npos);
    CHECK(diag.str().find(":3:") != std::string::npos);
    CHECK(diag.str().find(":4:") != std::string::npos);
}

TEST_CASE("synthetic corpus per-source counts match the generator ledger") {
    SynthConfig cfg;
    cfg.n_distinct = 900;
    cfg.n_verbatim = 80;
    cfg.n_partial = 20;
    cfg.seed = 3;
    const SynthResult synth = generate_synthetic_corpus(cfg);

    const std::string path = "/tmp/csn_corpus_test_synth.jsonl";
    {
        std::ofstream out(path);
        write_corpus_jsonl(synth.corpus, out);
    }
    std::ostringstream diag;
    LoadReport report;
    const Corpus loaded = load_corpus(path, diag, &report);
    CHECK(report.rejected == 0);
    CHECK(loaded.articles.size() == 1000);

    std::map<std::string, std::size_t> counts;
    for (const Article& a : loaded.articles) ++counts[a.source_id];
    CHECK(counts == synth.ledger.per_source_counts);
}

TEST_CASE("window partition: tumbling 5-day windows") {
    std::vector<Article> arts;
    arts.push_back(art("a", "s", "x", 0 * kSecondsPerDay));
    arts.push_back(art("b", "s", "x", 1 * kSecondsPerDay));
    arts.push_back(art("c", "s", "x", 6 * kSecondsPerDay));
    const Corpus c = make_corpus(std::move(arts));
    const auto windows = window_partition(c, 5 * kSecondsPerDay);
    REQUIRE(windows.size() == 2);
    CHECK(windows[0].article_ids == std::vector<std::string>{"a", "b"});
    CHECK(windows[1].article_ids == std::vector<std::string>{"c"});
    CHECK(windows[0].end_utc - windows[0].start_utc == 5 * kSecondsPerDay);
}

TEST_CASE("degenerate span: all articles at one instant") {
    std::vector<Article> arts;
    for (int i = 0; i < 4; ++i)
        arts.push_back(art("a" + std::to_string(i), "s", "x", 1000));
    const Corpus c = make_corpus(std::move(arts));
    const auto windows = window_partition(c, 5 * kSecondsPerDay);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].article_ids.size() == 4);
}

TEST_CASE("article exactly on a window boundary joins the next window") {
    std::vector<Article> arts;
    arts.push_back(art("a", "s", "x", 0));
    arts.push_back(art("b", "s", "x", 5 * kSecondsPerDay));
    const Corpus c = make_corpus(std::move(arts));
    const auto windows = window_partition(c, 5 * kSecondsPerDay);
    REQUIRE(windows.size() == 2);
    CHECK(windows[0].article_ids == std::vector<std::string>{"a"});
    CHECK(windows[1].article_ids == std::vector<std::string>{"b"});
}

TEST_CASE("window memberships form a partition of any corpus") {
    SynthConfig cfg;
    cfg.n_distinct = 200;
    cfg.n_verbatim = 20;
    cfg.n_partial = 5;
    const SynthResult synth = generate_synthetic_corpus(cfg);
    const auto windows = window_partition(synth.corpus, 5 * kSecondsPerDay);
    std::set<std::string> seen;
    for (const TimeWindow& w : windows)
        for (const std::string& id : w.article_ids) CHECK(seen.insert(id).second);
    CHECK(seen.size() == synth.corpus.articles.size());
}

TEST_CASE("empty corpus is an error") {
    Corpus c;
    CHECK_THROWS_AS(window_partition(c, 5 * kSecondsPerDay), CorpusError);
}
