#ifndef CSN_CORPUS_HPP
#define CSN_CORPUS_HPP

#include <cstdint>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "csn/text.hpp"

namespace csn {

class CorpusError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// One timestamped document from one source. body_norm is the canonical
// normalized body used by both similarity engines.
struct Article {
    std::string article_id;
    std::string source_id;
    std::string title;
    std::string body;
    std::int64_t published_utc = 0;  // epoch seconds, UTC
    NormalizedText body_norm;
};

struct Corpus {
    std::vector<Article> articles;              // sorted by article_id
    std::set<std::string> sources;
    std::int64_t span_min = 0;
    std::int64_t span_max = 0;
    std::unordered_map<std::string, std::size_t> index;  // article_id -> position

    const Article& article(const std::string& id) const;
    bool empty() const { return articles.empty(); }
};

struct TimeWindow {
    std::size_t index = 0;
    std::int64_t start_utc = 0;
    std::int64_t end_utc = 0;  // half-open [start, end)
    std::vector<std::string> article_ids;
};

struct LoadReport {
    std::size_t loaded = 0;
    std::size_t rejected = 0;
};

// Parses "YYYY-MM-DDThh:mm:ss" with optional trailing "Z" to epoch seconds.
// Returns false on malformed input.
bool parse_iso8601_utc(const std::string& s, std::int64_t& out);
std::string format_iso8601_utc(std::int64_t t);

// Loads a JSON-lines corpus file. Each line is an object with fields
// article_id, source_id, title, body, published_utc (ISO-8601). Records that
// fail validation are reported to `diagnostics` one line each, never silently
// dropped. Throws CorpusError if the file cannot be read.
Corpus load_corpus(const std::string& path, std::ostream& diagnostics,
                   LoadReport* report = nullptr);

// Builds the corpus from already-parsed articles (used by the synthetic
// generator and tests). Enforces the same invariants as load_corpus.
Corpus make_corpus(std::vector<Article> articles);

// Tumbling windows of `length_seconds`, anchored at the corpus minimum
// timestamp, half-open intervals. Throws CorpusError on an empty corpus or
// non-positive length.
std::vector<TimeWindow> window_partition(const Corpus& corpus,
                                         std::int64_t length_seconds);

constexpr std::int64_t kSecondsPerDay = 86400;

}  // namespace csn

#endif
