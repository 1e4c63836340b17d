#include "csn/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csn/corpus.hpp"
#include "csn/graph_io.hpp"
#include "csn/synth.hpp"

namespace csn {

namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class StageTimer {
  public:
    StageTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

std::string config_fingerprint(const PipelineConfig& c) {
    std::ostringstream ss;
    ss << c.window_days << "|" << c.cosine_threshold << "|" << c.min_lag_seconds
       << "|" << c.winnow.k << "|" << c.winnow.window << "|" << c.winnow.seg_min
       << "|" << c.winnow.pair_min << "|" << c.winnow.merge_gap << "|" << c.min_dq
       << "|" << c.centrality_orientation;
    return ss.str();
}

}  // namespace

std::string digest_bytes(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for digest: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return digest_bytes(ss.str());
}

void PipelineConfig::validate() const {
    if (corpus_path.empty())
        throw std::invalid_argument("config: corpus path is required");
    if (window_days <= 0.0)
        throw std::invalid_argument("config: window_days must be > 0");
    if (cosine_threshold <= 0.0 || cosine_threshold > 1.0)
        throw std::invalid_argument("config: cosine_threshold must be in (0, 1]");
    if (winnow.k < 1 || winnow.window < 1)
        throw std::invalid_argument("config: winnow k and window must be >= 1");
    if (min_lag_seconds < 0)
        throw std::invalid_argument("config: min_lag_seconds must be >= 0");
    if (min_dq < 0.0) throw std::invalid_argument("config: min_dq must be >= 0");
    if (centrality_orientation != "in" && centrality_orientation != "out")
        throw std::invalid_argument("config: centrality_orientation must be in|out");
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    PipelineConfig c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "corpus") c.corpus_path = value;
        else if (key == "ratings") c.ratings_path = value;
        else if (key == "output_dir") c.output_dir = value;
        else if (key == "window_days") c.window_days = std::stod(value);
        else if (key == "cosine_threshold") c.cosine_threshold = std::stod(value);
        else if (key == "min_lag_seconds") c.min_lag_seconds = std::stoll(value);
        else if (key == "k") c.winnow.k = std::stoul(value);
        else if (key == "window") c.winnow.window = std::stoul(value);
        else if (key == "seg_min") c.winnow.seg_min = std::stoul(value);
        else if (key == "pair_min") c.winnow.pair_min = std::stoul(value);
        else if (key == "merge_gap") c.winnow.merge_gap = std::stoul(value);
        else if (key == "min_dq") c.min_dq = std::stod(value);
        else if (key == "centrality_orientation") c.centrality_orientation = value;
        else
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown key '" + key + "'");
    }
    return c;
}

std::vector<CommunityLeaders> compute_leaders(const SharingNetwork& net,
                                              const Partition& partition,
                                              const CentralityResult& centrality) {
    std::map<std::uint32_t, std::vector<std::string>> members;
    for (const std::string& n : net.nodes)
        members[partition.assignment.at(n)].push_back(n);

    std::vector<CommunityLeaders> result;
    for (const auto& [community, nodes] : members) {
        CommunityLeaders cl;
        cl.community = community;
        cl.n_members = nodes.size();

        auto leader = [&](const std::string& label, auto value_of) {
            std::string best;
            double best_value = 0.0;
            bool tie = false;
            for (const std::string& n : nodes) {
                const double v = value_of(n);
                if (best.empty() || v > best_value) {
                    best = n;
                    best_value = v;
                    tie = false;
                } else if (v == best_value) {
                    tie = true;  // lexicographic winner already held
                }
            }
            cl.rows.emplace_back(label, best, best_value, tie);
        };

        leader("highest_eigenvector_centrality",
               [&](const std::string& n) { return centrality.scores.at(n); });
        auto edge_sum = [&](const std::string& n, bool outgoing, bool internal) {
            double sum = 0.0;
            for (const auto& [e, w] : net.edges) {
                const std::string& self = outgoing ? e.first : e.second;
                const std::string& other = outgoing ? e.second : e.first;
                if (self != n) continue;
                const bool other_internal = partition.assignment.at(other) == community;
                if (other_internal == internal) sum += static_cast<double>(w);
            }
            return sum;
        };
        leader("most_external_outgoing_edges",
               [&](const std::string& n) { return edge_sum(n, true, false); });
        leader("most_external_incoming_edges",
               [&](const std::string& n) { return edge_sum(n, false, false); });
        leader("most_internal_outgoing_edges",
               [&](const std::string& n) { return edge_sum(n, true, true); });
        leader("most_internal_incoming_edges",
               [&](const std::string& n) { return edge_sum(n, false, true); });
        result.push_back(std::move(cl));
    }
    return result;
}

namespace {

void write_profile_table(const ProfileTable& table, std::ostream& out) {
    out << "community";
    for (const std::string& c : table.columns) out << "\t" << c << "\t" << c << "_pct";
    out << "\n";
    for (const auto& [community, counts] : table.rows) {
        std::size_t total = 0;
        for (std::size_t v : counts) total += v;
        out << "C" << community;
        for (std::size_t v : counts) {
            char pct[16];
            std::snprintf(pct, sizeof(pct), "%.1f",
                          total ? 100.0 * static_cast<double>(v) / total : 0.0);
            out << "\t" << v << "\t" << pct << "%";
        }
        out << "\n";
    }
}

// One pipeline run with per-stage artifact writing and digest-keyed caching.
class PipelineRun {
  public:
    PipelineRun(const PipelineConfig& config, bool use_cache)
        : cfg_(config), use_cache_(use_cache) {
        manifest_.config = cfg_;
        fs::create_directories(art_dir());
        if (use_cache_) load_previous_manifest();
    }

    RunManifest run() {
        stage_ingest();
        stage_pairs();
        stage_network();
        stage_communities();
        stage_ratings();
        stage_winnow();
        stage_reports();
        write_manifest();
        return manifest_;
    }

  private:
    PipelineConfig cfg_;
    bool use_cache_;
    RunManifest manifest_;
    nlohmann::json previous_;

    Corpus corpus_;
    std::vector<TimeWindow> windows_;
    std::vector<VerbatimPair> pairs_;
    std::vector<AttributedCopy> copies_;
    std::vector<AttributedCopy> republications_;
    SharingNetwork net_;
    Partition partition_;
    CentralityResult centrality_;
    std::vector<SourceRating> ratings_;
    std::vector<PartialMatch> partial_;

    fs::path art_dir() const { return fs::path(cfg_.output_dir) / "artifacts"; }
    std::string art(const std::string& name) const {
        return (art_dir() / name).string();
    }

    void load_previous_manifest() {
        const fs::path p = fs::path(cfg_.output_dir) / "manifest.json";
        std::ifstream in(p);
        if (in) {
            previous_ = nlohmann::json::parse(in, nullptr, false);
            if (previous_.is_discarded()) previous_ = nlohmann::json();
        }
    }

    // A stage may be skipped when its recorded input key matches and all of
    // its recorded outputs are still on disk, unchanged.
    bool cache_hit(const std::string& stage, const std::string& input_key) {
        if (!use_cache_ || !previous_.contains("stages")) return false;
        for (const auto& s : previous_["stages"]) {
            if (s.value("name", "") != stage) continue;
            if (s.value("input_key", "") != input_key) return false;
            if (!s.contains("digests")) return false;
            for (const auto& [file, digest] : s["digests"].items()) {
                const std::string path = art(file);
                if (!fs::exists(path) || digest_file(path) != digest.get<std::string>())
                    return false;
            }
            return true;
        }
        return false;
    }

    StageRecord& record(const std::string& name, const std::string& input_key,
                        bool cached) {
        StageRecord r;
        r.name = name;
        r.cached = cached;
        manifest_.stages.push_back(std::move(r));
        stage_keys_.push_back(input_key);
        return manifest_.stages.back();
    }
    std::vector<std::string> stage_keys_;

    void note_output(StageRecord& r, const std::string& file) {
        r.digests[file] = digest_file(art(file));
    }

    template <typename Fn>
    void guarded(const std::string& stage, Fn&& fn) {
        try {
            fn();
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(stage, e.what());
        }
    }

    void stage_ingest() {
        std::string key;
        guarded("ingest", [&] {
            key = digest_file(cfg_.corpus_path) + "|" + config_fingerprint(cfg_);
        });
        const bool cached = cache_hit("ingest", key);
        StageTimer timer;
        StageRecord& r = record("ingest", key, cached);
        guarded("ingest", [&] {
            std::ofstream diag(art("rejections.txt"));
            LoadReport report;
            corpus_ = load_corpus(cfg_.corpus_path, diag, &report);
            diag.close();
            windows_ = window_partition(
                corpus_, static_cast<std::int64_t>(cfg_.window_days * kSecondsPerDay));
            r.inputs = report.loaded + report.rejected;
            r.outputs = corpus_.articles.size();
            note_output(r, "rejections.txt");
        });
        r.seconds = timer.seconds();
    }

    void stage_pairs() {
        const std::string key = stage_keys_[0];
        const bool cached = cache_hit("pairs", key);
        StageTimer timer;
        StageRecord& r = record("pairs", key, cached);
        guarded("pairs", [&] {
            if (cached) {
                read_pairs();
            } else {
                for (const TimeWindow& w : windows_) {
                    const TfidfModel model = build_tfidf(w, corpus_);
                    auto found = extract_pairs(model, cfg_.cosine_threshold);
                    pairs_.insert(pairs_.end(), found.begin(), found.end());
                }
                std::ofstream out(art("pairs.tsv"));
                out << "article_a\tarticle_b\tcosine\twindow_index\n";
                for (const VerbatimPair& p : pairs_)
                    out << p.article_a << "\t" << p.article_b << "\t"
                        << fmt_double(p.cosine) << "\t" << p.window_index << "\n";
            }
            r.inputs = corpus_.articles.size();
            r.outputs = pairs_.size();
            note_output(r, "pairs.tsv");
        });
        r.seconds = timer.seconds();
    }

    void read_pairs() {
        std::ifstream in(art("pairs.tsv"));
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            std::stringstream ss(line);
            VerbatimPair p;
            std::string cosine, window;
            std::getline(ss, p.article_a, '\t');
            std::getline(ss, p.article_b, '\t');
            std::getline(ss, cosine, '\t');
            std::getline(ss, window, '\t');
            p.cosine = std::stod(cosine);
            p.window_index = std::stoul(window);
            pairs_.push_back(std::move(p));
        }
    }

    void stage_network() {
        const std::string key =
            (manifest_.stages[1].digests.count("pairs.tsv")
                 ? manifest_.stages[1].digests.at("pairs.tsv")
                 : "") +
            "|" + config_fingerprint(cfg_);
        const bool cached = cache_hit("network", key);
        StageTimer timer;
        StageRecord& r = record("network", key, cached);
        guarded("network", [&] {
            const auto ordered = orient_pairs(pairs_, corpus_);
            copies_ = attribute_copies(ordered, corpus_, cfg_.min_lag_seconds);
            republications_.clear();
            net_ = build_network(copies_, &republications_);

            if (!cached) {
                auto dump = [&](const std::string& file,
                                const std::vector<AttributedCopy>& list) {
                    std::ofstream out(art(file));
                    out << "original_id\tcopy_id\tcosine\tlag_seconds\n";
                    for (const AttributedCopy& c : list)
                        out << c.original << "\t" << c.copy << "\t"
                            << fmt_double(c.cosine) << "\t" << c.lag_seconds << "\n";
                };
                dump("copies.tsv", copies_);
                dump("republications.tsv", republications_);
                std::ofstream el(art("network.tsv"));
                write_edge_list(net_, el);
                std::ofstream gx(art("network.gexf"));
                write_gexf(net_, gx);
                std::ofstream dot(art("network.dot"));
                write_dot(net_, dot);
            }
            r.inputs = pairs_.size();
            r.outputs = net_.edges.size();
            note_output(r, "copies.tsv");
            note_output(r, "republications.tsv");
            note_output(r, "network.tsv");
            note_output(r, "network.gexf");
            note_output(r, "network.dot");
        });
        r.seconds = timer.seconds();
    }

    void stage_communities() {
        const std::string key =
            manifest_.stages[2].digests.at("network.tsv") + "|" +
            config_fingerprint(cfg_);
        const bool cached = cache_hit("communities", key);
        StageTimer timer;
        StageRecord& r = record("communities", key, cached);
        guarded("communities", [&] {
            if (net_.edges.empty()) {
                // Degenerate corpus with no copies at all: empty reports.
                partition_ = Partition{};
                std::ofstream(art("partition.tsv")) << "source_id\tcommunity\n";
                std::ofstream(art("centrality.tsv")) << "source_id\tscore\n";
                std::ofstream(art("kcore.tsv")) << "community\tk\tmember\n";
            } else {
                partition_ = detect_communities(net_, cfg_.min_dq);
                centrality_ = eigenvector_centrality(
                    net_, cfg_.centrality_orientation == "in"
                              ? CentralityOrientation::In
                              : CentralityOrientation::Out);
                if (!cached) {
                    std::ofstream pt(art("partition.tsv"));
                    pt << "source_id\tcommunity\n";
                    for (const auto& [source, community] : partition_.assignment)
                        pt << source << "\tC" << community << "\n";

                    std::ofstream ct(art("centrality.tsv"));
                    ct << "source_id\tscore\n";
                    for (const auto& [source, score] : centrality_.scores)
                        ct << source << "\t" << fmt_double(score) << "\n";

                    std::ofstream kc(art("kcore.tsv"));
                    kc << "community\tk\tmember\n";
                    std::map<std::uint32_t, std::vector<std::string>> members;
                    for (const std::string& n : net_.nodes)
                        members[partition_.assignment.at(n)].push_back(n);
                    for (const auto& [community, nodes] : members) {
                        const KCoreResult core = k_core(net_, nodes);
                        for (const std::string& n : core.members)
                            kc << "C" << community << "\t" << core.k << "\t" << n
                               << "\n";
                    }
                }
                manifest_.modularity = partition_.modularity;
                manifest_.n_communities = partition_.n_communities;
            }
            if (!cached || net_.edges.empty()) {
                const CommunityGraph directed = community_graph(net_, partition_, false);
                const CommunityGraph both = community_graph(net_, partition_, true);
                std::ofstream m1(art("community_matrix.tsv"));
                write_community_matrix(directed, m1);
                std::ofstream m2(art("community_matrix_both.tsv"));
                write_community_matrix(both, m2);
                std::ofstream cd(art("community_graph.dot"));
                write_community_dot(directed, cd);
                std::ofstream cg(art("community_graph.gexf"));
                write_community_gexf(directed, cg);
            }
            r.inputs = net_.nodes.size();
            r.outputs = partition_.n_communities;
            note_output(r, "partition.tsv");
            note_output(r, "centrality.tsv");
            note_output(r, "kcore.tsv");
            note_output(r, "community_matrix.tsv");
            note_output(r, "community_matrix_both.tsv");
            note_output(r, "community_graph.dot");
            note_output(r, "community_graph.gexf");
        });
        r.seconds = timer.seconds();
    }

    void stage_ratings() {
        std::string key = config_fingerprint(cfg_) + "|" +
                          manifest_.stages[3].digests.at("partition.tsv");
        if (!cfg_.ratings_path.empty())
            guarded("ratings", [&] { key += "|" + digest_file(cfg_.ratings_path); });
        const bool cached = cache_hit("ratings", key);
        StageTimer timer;
        StageRecord& r = record("ratings", key, cached);
        guarded("ratings", [&] {
            if (!cfg_.ratings_path.empty()) {
                std::ofstream diag(art("ratings_rejections.txt"));
                ratings_ = load_ratings(cfg_.ratings_path, diag);
            } else {
                std::ofstream(art("ratings_rejections.txt"));
            }
            if (!cached) {
                const CommunityProfile profile =
                    community_profile(partition_, ratings_);
                std::ofstream cred(art("credibility.tsv"));
                write_profile_table(profile.credibility, cred);
                std::ofstream bias(art("bias.tsv"));
                write_profile_table(profile.bias, bias);
                std::ofstream country(art("country.tsv"));
                write_profile_table(profile.country, country);
            }
            r.inputs = ratings_.size();
            r.outputs = partition_.n_communities;
            note_output(r, "ratings_rejections.txt");
            note_output(r, "credibility.tsv");
            note_output(r, "bias.tsv");
            note_output(r, "country.tsv");
        });
        r.seconds = timer.seconds();
    }

    void stage_winnow() {
        const std::string key = stage_keys_[0];
        const bool cached = cache_hit("winnow", key);
        StageTimer timer;
        StageRecord& r = record("winnow", key, cached);
        guarded("winnow", [&] {
            if (!cached) {
                partial_ = find_partial_matches(corpus_, cfg_.winnow);
                std::ofstream out(art("partial_matches.tsv"));
                out << "article_a\tarticle_b\tn_segments\tcombined_length\tsegments\n";
                for (const PartialMatch& p : partial_) {
                    out << p.article_a << "\t" << p.article_b << "\t"
                        << p.segments.size() << "\t" << p.combined_length << "\t";
                    for (std::size_t i = 0; i < p.segments.size(); ++i) {
                        const OverlapSegment& s = p.segments[i];
                        if (i) out << ";";
                        out << s.begin_a << "-" << s.end_a << ":" << s.begin_b << "-"
                            << s.end_b;
                    }
                    out << "\n";
                }
            }
            r.inputs = corpus_.articles.size();
            r.outputs = partial_.size();
            note_output(r, "partial_matches.tsv");
        });
        r.seconds = timer.seconds();
    }

    void stage_reports() {
        const std::string key = manifest_.stages[3].digests.at("partition.tsv");
        const bool cached = cache_hit("report", key);
        StageTimer timer;
        StageRecord& r = record("report", key, cached);
        guarded("report", [&] {
            if (!cached) {
                std::ofstream out(art("leaders.tsv"));
                out << "community\tn_members\tmetric\tleader\tvalue\ttie\n";
                if (!net_.edges.empty()) {
                    const auto leaders =
                        compute_leaders(net_, partition_, centrality_);
                    for (const CommunityLeaders& cl : leaders)
                        for (const auto& [metric, who, value, tie] : cl.rows)
                            out << "C" << cl.community << "\t" << cl.n_members
                                << "\t" << metric << "\t" << who << "\t"
                                << fmt_double(value) << "\t" << (tie ? "tie" : "-")
                                << "\n";
                }
            }
            r.outputs = partition_.n_communities;
            note_output(r, "leaders.tsv");
        });
        r.seconds = timer.seconds();
    }

    void write_manifest() {
        nlohmann::json j;
        j["config"] = {{"corpus", cfg_.corpus_path},
                       {"ratings", cfg_.ratings_path},
                       {"output_dir", cfg_.output_dir},
                       {"window_days", cfg_.window_days},
                       {"cosine_threshold", cfg_.cosine_threshold},
                       {"min_lag_seconds", cfg_.min_lag_seconds},
                       {"k", cfg_.winnow.k},
                       {"window", cfg_.winnow.window},
                       {"seg_min", cfg_.winnow.seg_min},
                       {"pair_min", cfg_.winnow.pair_min},
                       {"merge_gap", cfg_.winnow.merge_gap},
                       {"min_dq", cfg_.min_dq},
                       {"centrality_orientation", cfg_.centrality_orientation}};
        j["modularity"] = manifest_.modularity;
        j["n_communities"] = manifest_.n_communities;
        for (std::size_t i = 0; i < manifest_.stages.size(); ++i) {
            const StageRecord& s = manifest_.stages[i];
            nlohmann::json sj{{"name", s.name},
                              {"inputs", s.inputs},
                              {"outputs", s.outputs},
                              {"seconds", s.seconds},
                              {"cached", s.cached},
                              {"input_key", stage_keys_[i]}};
            for (const auto& [file, digest] : s.digests) sj["digests"][file] = digest;
            j["stages"].push_back(std::move(sj));
        }
        std::ofstream out(fs::path(cfg_.output_dir) / "manifest.json");
        out << j.dump(2) << "\n";
    }
};

}  // namespace

RunManifest run_pipeline(const PipelineConfig& config, bool use_cache) {
    config.validate();
    return PipelineRun(config, use_cache).run();
}

}  // namespace csn
