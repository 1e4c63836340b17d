#include "csn/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace csn {

namespace {

constexpr std::int64_t kWindowSeconds = 5 * kSecondsPerDay;
constexpr std::int64_t kBaseTime = 1577836800;  // 2020-01-01T00:00:00Z

std::string make_id(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%05zu", prefix, i);
    return buf;
}

class WordPool {
  public:
    explicit WordPool(std::mt19937& rng) {
        words_.reserve(kPoolSize);
        std::uniform_int_distribution<int> len(3, 9);
        std::uniform_int_distribution<int> letter(0, 25);
        for (std::size_t i = 0; i < kPoolSize; ++i) {
            std::string w(static_cast<std::size_t>(len(rng)), 'a');
            for (char& c : w) c = static_cast<char>('a' + letter(rng));
            words_.push_back(std::move(w));
        }
    }

    std::string body(std::mt19937& rng, std::size_t n_words) const {
        std::uniform_int_distribution<std::size_t> pick(0, kPoolSize - 1);
        std::string out;
        for (std::size_t i = 0; i < n_words; ++i) {
            if (i) out.push_back(' ');
            out += words_[pick(rng)];
        }
        return out;
    }

    const std::string& word(std::mt19937& rng) const {
        std::uniform_int_distribution<std::size_t> pick(0, kPoolSize - 1);
        return words_[pick(rng)];
    }

  private:
    static constexpr std::size_t kPoolSize = 5000;
    std::vector<std::string> words_;
};

}  // namespace

SynthResult generate_synthetic_corpus(const SynthConfig& cfg) {
    std::mt19937 rng(cfg.seed);
    WordPool pool(rng);
    SynthResult result;
    std::vector<Article> articles;

    const std::size_t n_windows =
        std::max<std::size_t>(1, (cfg.n_distinct + cfg.n_verbatim) / 50);

    auto community_of = [&](std::size_t src) {
        return src * cfg.n_communities / cfg.n_sources;
    };
    std::uniform_int_distribution<std::size_t> any_source(0, cfg.n_sources - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto sibling_source = [&](std::size_t src) {
        const std::size_t community = community_of(src);
        for (std::size_t attempt = 0; attempt < 1000; ++attempt) {
            const std::size_t s = any_source(rng);
            const bool same = community_of(s) == community;
            const bool want_same = unit(rng) >= cfg.cross_community_prob;
            if (s != src && same == want_same) return s;
        }
        return (src + 1) % cfg.n_sources;
    };

    // Distinct articles. The first is pinned to the window anchor so that
    // planted copies are guaranteed to land in the same window as their
    // originals.
    std::uniform_int_distribution<std::int64_t> window_idx(
        0, static_cast<std::int64_t>(n_windows) - 1);
    std::uniform_int_distribution<std::int64_t> early_offset(0, 2 * kSecondsPerDay);
    for (std::size_t i = 0; i < cfg.n_distinct; ++i) {
        Article a;
        a.article_id = make_id("art", i);
        a.source_id = make_id("src", any_source(rng));
        a.title = "story " + std::to_string(i);
        a.body = pool.body(rng, cfg.words_per_article);
        a.published_utc =
            i == 0 ? kBaseTime
                   : kBaseTime + window_idx(rng) * kWindowSeconds + early_offset(rng);
        articles.push_back(std::move(a));
    }

    // Verbatim copies: each copies a distinct original with a handful of word
    // substitutions, keeping cosine far above the 0.85 threshold.
    std::uniform_int_distribution<std::int64_t> lag(3600, 2 * kSecondsPerDay);
    std::uniform_int_distribution<int> n_edits(0, 3);
    for (std::size_t i = 0; i < cfg.n_verbatim; ++i) {
        const Article& orig = articles[i % cfg.n_distinct];
        Article copy;
        copy.article_id = make_id("art", cfg.n_distinct + i);
        const std::size_t orig_src = std::stoul(orig.source_id.substr(3));
        copy.source_id = make_id("src", sibling_source(orig_src));
        copy.title = "copied " + orig.title;

        std::vector<std::string> words = tokenize(normalize_text(orig.body).text);
        const int edits = n_edits(rng);
        std::uniform_int_distribution<std::size_t> at(0, words.size() - 1);
        for (int e = 0; e < edits; ++e) words[at(rng)] = pool.word(rng);
        std::string body;
        for (std::size_t w = 0; w < words.size(); ++w) {
            if (w) body.push_back(' ');
            body += words[w];
        }
        copy.body = std::move(body);

        const std::int64_t window_start =
            kBaseTime + (orig.published_utc - kBaseTime) / kWindowSeconds * kWindowSeconds;
        copy.published_utc = std::min(orig.published_utc + lag(rng),
                                      window_start + kWindowSeconds - 1);

        result.ledger.verbatim_pairs.emplace_back(orig.article_id, copy.article_id);
        ++result.ledger.expected_edges[{orig.source_id, copy.source_id}];
        articles.push_back(std::move(copy));
    }

    // Partial copies: a fresh article embedding a ~400-character span lifted
    // from a distinct article, with one word edited in the middle of the span.
    std::uniform_int_distribution<std::size_t> victim(0, cfg.n_distinct - 1);
    for (std::size_t i = 0; i < cfg.n_partial; ++i) {
        const Article& src_art = articles[victim(rng)];
        const std::vector<std::string> src_words =
            tokenize(normalize_text(src_art.body).text);

        // Take enough words for >= 400 normalized characters.
        std::size_t take = 0, chars = 0;
        while (take < src_words.size() && chars < 400)
            chars += src_words[take++].size() + 1;
        std::vector<std::string> span(src_words.begin(),
                                      src_words.begin() + static_cast<long>(take));
        span[span.size() / 2] = pool.word(rng);  // edit inside the span

        std::string body = pool.body(rng, cfg.words_per_article);
        for (const std::string& w : span) {
            body.push_back(' ');
            body += w;
        }
        body.push_back(' ');
        body += pool.body(rng, 40);

        Article a;
        a.article_id = make_id("prt", i);
        a.source_id = make_id("src", any_source(rng));
        a.title = "partial " + std::to_string(i);
        a.body = std::move(body);
        a.published_utc = kBaseTime + window_idx(rng) * kWindowSeconds + early_offset(rng);
        result.ledger.partial_pairs.emplace_back(
            std::min(src_art.article_id, a.article_id),
            std::max(src_art.article_id, a.article_id));
        articles.push_back(std::move(a));
    }

    for (const Article& a : articles) ++result.ledger.per_source_counts[a.source_id];
    std::sort(result.ledger.verbatim_pairs.begin(), result.ledger.verbatim_pairs.end());
    std::sort(result.ledger.partial_pairs.begin(), result.ledger.partial_pairs.end());
    result.corpus = make_corpus(std::move(articles));
    return result;
}

void write_corpus_jsonl(const Corpus& corpus, std::ostream& out) {
    for (const Article& a : corpus.articles) {
        nlohmann::json j{{"article_id", a.article_id},
                         {"source_id", a.source_id},
                         {"title", a.title},
                         {"body", a.body},
                         {"published_utc", format_iso8601_utc(a.published_utc)}};
        out << j.dump() << "\n";
    }
}

void write_ledger(const SynthLedger& ledger, std::ostream& out) {
    nlohmann::json j;
    for (const auto& [o, c] : ledger.verbatim_pairs)
        j["verbatim_pairs"].push_back({o, c});
    for (const auto& [a, b] : ledger.partial_pairs)
        j["partial_pairs"].push_back({a, b});
    j["per_source_counts"] = ledger.per_source_counts;
    for (const auto& [e, w] : ledger.expected_edges)
        j["expected_edges"].push_back({e.first, e.second, w});
    out << j.dump(2) << "\n";
}

SynthLedger read_ledger(std::istream& in) {
    nlohmann::json j;
    in >> j;
    SynthLedger ledger;
    for (const auto& p : j.value("verbatim_pairs", nlohmann::json::array()))
        ledger.verbatim_pairs.emplace_back(p[0].get<std::string>(),
                                           p[1].get<std::string>());
    for (const auto& p : j.value("partial_pairs", nlohmann::json::array()))
        ledger.partial_pairs.emplace_back(p[0].get<std::string>(),
                                          p[1].get<std::string>());
    if (j.contains("per_source_counts"))
        for (const auto& [k, v] : j["per_source_counts"].items())
            ledger.per_source_counts[k] = v.get<std::size_t>();
    for (const auto& e : j.value("expected_edges", nlohmann::json::array()))
        ledger.expected_edges[{e[0].get<std::string>(), e[1].get<std::string>()}] =
            e[2].get<std::uint64_t>();
    return ledger;
}

}  // namespace csn
