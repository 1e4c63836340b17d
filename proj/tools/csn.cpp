#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "csn/community.hpp"
#include "csn/corpus.hpp"
#include "csn/graph_io.hpp"
#include "csn/network.hpp"
#include "csn/pipeline.hpp"
#include "csn/ratings.hpp"
#include "csn/synth.hpp"
#include "csn/tfidf.hpp"
#include "csn/winnow.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitStageFailure = 2;

csn::Partition read_partition(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open partition file: " + path);
    csn::Partition p;
    std::string line;
    std::getline(in, line);  // header
    std::uint32_t max_label = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string source, label;
        std::getline(ss, source, '\t');
        std::getline(ss, label, '\t');
        if (!label.empty() && label[0] == 'C') label.erase(0, 1);
        const auto c = static_cast<std::uint32_t>(std::stoul(label));
        p.assignment[source] = c;
        max_label = std::max(max_label, c);
    }
    p.n_communities = p.assignment.empty() ? 0 : max_label + 1;
    return p;
}

std::vector<csn::VerbatimPair> compute_pairs(const csn::Corpus& corpus,
                                             double window_days,
                                             double threshold) {
    std::vector<csn::VerbatimPair> pairs;
    const auto windows = csn::window_partition(
        corpus, static_cast<std::int64_t>(window_days * csn::kSecondsPerDay));
    for (const csn::TimeWindow& w : windows) {
        const csn::TfidfModel model = csn::build_tfidf(w, corpus);
        auto found = csn::extract_pairs(model, threshold);
        pairs.insert(pairs.end(), found.begin(), found.end());
    }
    return pairs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Content-sharing forensics: verbatim and partial republication "
                 "detection, attribution networks, communities and profiles"};
    app.require_subcommand(1);

    std::string corpus_path, ratings_path, out_path, config_path, format = "edgelist";
    std::string output_dir = "out";
    double window_days = 5.0, cosine_threshold = 0.85, min_dq = 1e-10;
    std::int64_t min_lag = 0;
    csn::WinnowParams wp;
    std::string orientation = "in";
    bool no_cache = false;

    auto add_corpus = [&](CLI::App* cmd) {
        cmd->add_option("corpus", corpus_path, "JSON-lines corpus file")->required();
    };
    auto add_window = [&](CLI::App* cmd) {
        cmd->add_option("--window-days", window_days, "time window length in days");
    };
    auto add_cosine = [&](CLI::App* cmd) {
        cmd->add_option("--cosine-threshold", cosine_threshold,
                        "verbatim cosine threshold");
    };
    auto add_winnow_flags = [&](CLI::App* cmd) {
        cmd->add_option("--k", wp.k, "k-gram length");
        cmd->add_option("--window", wp.window, "winnowing window in hashes");
        cmd->add_option("--seg-min", wp.seg_min, "minimum segment length (strict)");
        cmd->add_option("--pair-min", wp.pair_min, "minimum combined length");
        cmd->add_option("--merge-gap", wp.merge_gap, "segment merge gap");
    };

    auto* ingest = app.add_subcommand("ingest", "load and validate a corpus");
    add_corpus(ingest);
    add_window(ingest);

    auto* pairs_cmd = app.add_subcommand("pairs", "extract verbatim article pairs");
    add_corpus(pairs_cmd);
    add_window(pairs_cmd);
    add_cosine(pairs_cmd);
    pairs_cmd->add_option("-o,--out", out_path, "pair dump file (default stdout)");

    auto* network_cmd =
        app.add_subcommand("network", "build the directed sharing network");
    add_corpus(network_cmd);
    add_window(network_cmd);
    add_cosine(network_cmd);
    network_cmd->add_option("--min-lag", min_lag, "minimum copy lag in seconds");
    network_cmd->add_option("--format", format, "edgelist|gexf|dot");
    network_cmd->add_option("-o,--out", out_path, "output file (default stdout)");

    std::string network_file;
    auto* comm_cmd = app.add_subcommand("communities",
                                        "partition a network edge list");
    comm_cmd->add_option("network", network_file, "edge list file")->required();
    comm_cmd->add_option("--min-dq", min_dq, "minimum modularity gain per split");
    comm_cmd->add_option("--centrality-orientation", orientation, "in|out");
    comm_cmd->add_option("-o,--out", out_path, "partition file (default stdout)");

    auto* winnow_cmd =
        app.add_subcommand("winnow", "partial content-sharing detection");
    add_corpus(winnow_cmd);
    add_winnow_flags(winnow_cmd);
    winnow_cmd->add_option("-o,--out", out_path, "match dump file (default stdout)");

    std::string partition_file;
    auto* ratings_cmd =
        app.add_subcommand("ratings", "profile communities with source ratings");
    ratings_cmd->add_option("ratings", ratings_path, "ratings TSV file")->required();
    ratings_cmd->add_option("partition", partition_file, "partition TSV file")
        ->required();
    ratings_cmd->add_option("-o,--out-dir", output_dir, "output directory");

    std::string run_dir;
    auto* report_cmd =
        app.add_subcommand("report", "emit leader tables from pipeline artifacts");
    report_cmd->add_option("dir", run_dir, "pipeline output directory")->required();

    auto* run_cmd = app.add_subcommand("run", "run the full pipeline");
    run_cmd->add_option("corpus", corpus_path, "JSON-lines corpus file");
    run_cmd->add_option("--config", config_path, "key = value config file");
    run_cmd->add_option("--ratings", ratings_path, "ratings TSV file");
    run_cmd->add_option("--out-dir", output_dir, "output directory");
    add_window(run_cmd);
    add_cosine(run_cmd);
    add_winnow_flags(run_cmd);
    run_cmd->add_option("--min-lag", min_lag, "minimum copy lag in seconds");
    run_cmd->add_option("--min-dq", min_dq, "minimum modularity gain per split");
    run_cmd->add_option("--centrality-orientation", orientation, "in|out");
    run_cmd->add_flag("--no-cache", no_cache, "ignore cached stage artifacts");

    csn::SynthConfig synth_cfg;
    std::string ledger_path;
    auto* synth_cmd =
        app.add_subcommand("synth", "generate a synthetic test corpus");
    synth_cmd->add_option("-o,--out", out_path, "corpus output file")->required();
    synth_cmd->add_option("--ledger", ledger_path, "ground-truth ledger file");
    synth_cmd->add_option("--distinct", synth_cfg.n_distinct, "distinct articles");
    synth_cmd->add_option("--verbatim", synth_cfg.n_verbatim, "verbatim copies");
    synth_cmd->add_option("--partial", synth_cfg.n_partial, "partial copies");
    synth_cmd->add_option("--sources", synth_cfg.n_sources, "number of sources");
    synth_cmd->add_option("--communities", synth_cfg.n_communities,
                          "planted communities");
    synth_cmd->add_option("--seed", synth_cfg.seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    auto with_output = [&](auto fn) {
        if (out_path.empty()) {
            fn(std::cout);
        } else {
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot open output: " + out_path);
            fn(out);
        }
    };

    try {
        if (*ingest) {
            csn::LoadReport report;
            const csn::Corpus corpus =
                csn::load_corpus(corpus_path, std::cerr, &report);
            const auto windows = csn::window_partition(
                corpus,
                static_cast<std::int64_t>(window_days * csn::kSecondsPerDay));
            std::cout << "articles\t" << corpus.articles.size() << "\n"
                      << "sources\t" << corpus.sources.size() << "\n"
                      << "rejected\t" << report.rejected << "\n"
                      << "span\t" << csn::format_iso8601_utc(corpus.span_min) << " .. "
                      << csn::format_iso8601_utc(corpus.span_max) << "\n"
                      << "windows\t" << windows.size() << "\n";
        } else if (*pairs_cmd) {
            const csn::Corpus corpus = csn::load_corpus(corpus_path, std::cerr);
            const auto pairs = compute_pairs(corpus, window_days, cosine_threshold);
            with_output([&](std::ostream& out) {
                out << "article_a\tarticle_b\tcosine\twindow_index\n";
                for (const csn::VerbatimPair& p : pairs) {
                    char cos[40];
                    std::snprintf(cos, sizeof(cos), "%.17g", p.cosine);
                    out << p.article_a << "\t" << p.article_b << "\t" << cos << "\t"
                        << p.window_index << "\n";
                }
            });
        } else if (*network_cmd) {
            const csn::Corpus corpus = csn::load_corpus(corpus_path, std::cerr);
            const auto pairs = compute_pairs(corpus, window_days, cosine_threshold);
            const auto ordered = csn::orient_pairs(pairs, corpus);
            const auto copies = csn::attribute_copies(ordered, corpus, min_lag);
            const csn::SharingNetwork net = csn::build_network(copies);
            with_output([&](std::ostream& out) {
                csn::export_network(net, format, out);
            });
        } else if (*comm_cmd) {
            std::ifstream in(network_file);
            if (!in)
                throw std::runtime_error("cannot open network file: " + network_file);
            const csn::SharingNetwork net = csn::read_edge_list(in);
            const csn::Partition p = csn::detect_communities(net, min_dq);
            with_output([&](std::ostream& out) {
                out << "source_id\tcommunity\n";
                for (const auto& [source, community] : p.assignment)
                    out << source << "\tC" << community << "\n";
            });
            std::cerr << "communities\t" << p.n_communities << "\nmodularity\t"
                      << p.modularity << "\n";
        } else if (*winnow_cmd) {
            const csn::Corpus corpus = csn::load_corpus(corpus_path, std::cerr);
            const auto matches = csn::find_partial_matches(corpus, wp);
            with_output([&](std::ostream& out) {
                out << "article_a\tarticle_b\tn_segments\tcombined_length\tsegments\n";
                for (const csn::PartialMatch& m : matches) {
                    out << m.article_a << "\t" << m.article_b << "\t"
                        << m.segments.size() << "\t" << m.combined_length << "\t";
                    for (std::size_t i = 0; i < m.segments.size(); ++i) {
                        const csn::OverlapSegment& s = m.segments[i];
                        if (i) out << ";";
                        out << s.begin_a << "-" << s.end_a << ":" << s.begin_b << "-"
                            << s.end_b;
                    }
                    out << "\n";
                }
            });
        } else if (*ratings_cmd) {
            const auto ratings = csn::load_ratings(ratings_path, std::cerr);
            const csn::Partition p = read_partition(partition_file);
            const csn::CommunityProfile profile = csn::community_profile(p, ratings);
            fs::create_directories(output_dir);
            auto dump = [&](const csn::ProfileTable& t, const std::string& name) {
                std::ofstream out(fs::path(output_dir) / name);
                out << "community";
                for (const std::string& c : t.columns)
                    out << "\t" << c << "\t" << c << "_pct";
                out << "\n";
                for (const auto& [community, counts] : t.rows) {
                    std::size_t total = 0;
                    for (std::size_t v : counts) total += v;
                    out << "C" << community;
                    for (std::size_t v : counts) {
                        char pct[16];
                        std::snprintf(pct, sizeof(pct), "%.1f",
                                      total ? 100.0 * double(v) / double(total) : 0.0);
                        out << "\t" << v << "\t" << pct << "%";
                    }
                    out << "\n";
                }
            };
            dump(profile.credibility, "credibility.tsv");
            dump(profile.bias, "bias.tsv");
            dump(profile.country, "country.tsv");
        } else if (*report_cmd) {
            const fs::path art = fs::path(run_dir) / "artifacts";
            std::ifstream in(art / "network.tsv");
            if (!in)
                throw std::runtime_error("missing artifact: " +
                                         (art / "network.tsv").string());
            const csn::SharingNetwork net = csn::read_edge_list(in);
            if (net.edges.empty()) {
                std::cout << "empty network; no leaders to report\n";
                return kExitOk;
            }
            const csn::Partition p = read_partition((art / "partition.tsv").string());
            const auto centrality = csn::eigenvector_centrality(net);
            const auto leaders = csn::compute_leaders(net, p, centrality);
            std::cout << "community\tn_members\tmetric\tleader\tvalue\ttie\n";
            for (const csn::CommunityLeaders& cl : leaders)
                for (const auto& [metric, who, value, tie] : cl.rows)
                    std::cout << "C" << cl.community << "\t" << cl.n_members << "\t"
                              << metric << "\t" << who << "\t" << value << "\t"
                              << (tie ? "tie" : "-") << "\n";
        } else if (*run_cmd) {
            csn::PipelineConfig cfg;
            if (!config_path.empty()) cfg = csn::load_config(config_path);
            // Flags override the config file.
            if (!corpus_path.empty()) cfg.corpus_path = corpus_path;
            if (!ratings_path.empty()) cfg.ratings_path = ratings_path;
            if (run_cmd->count("--out-dir")) cfg.output_dir = output_dir;
            if (run_cmd->count("--window-days")) cfg.window_days = window_days;
            if (run_cmd->count("--cosine-threshold"))
                cfg.cosine_threshold = cosine_threshold;
            if (run_cmd->count("--min-lag")) cfg.min_lag_seconds = min_lag;
            if (run_cmd->count("--min-dq")) cfg.min_dq = min_dq;
            if (run_cmd->count("--centrality-orientation"))
                cfg.centrality_orientation = orientation;
            if (run_cmd->count("--k")) cfg.winnow.k = wp.k;
            if (run_cmd->count("--window")) cfg.winnow.window = wp.window;
            if (run_cmd->count("--seg-min")) cfg.winnow.seg_min = wp.seg_min;
            if (run_cmd->count("--pair-min")) cfg.winnow.pair_min = wp.pair_min;
            if (run_cmd->count("--merge-gap")) cfg.winnow.merge_gap = wp.merge_gap;

            const csn::RunManifest manifest = csn::run_pipeline(cfg, !no_cache);
            for (const csn::StageRecord& s : manifest.stages)
                std::cout << s.name << "\t" << s.inputs << " in, " << s.outputs
                          << " out, " << s.seconds << " s"
                          << (s.cached ? " (cached)" : "") << "\n";
            std::cout << "modularity\t" << manifest.modularity << "\n"
                      << "communities\t" << manifest.n_communities << "\n";
        } else if (*synth_cmd) {
            const csn::SynthResult synth = csn::generate_synthetic_corpus(synth_cfg);
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot open output: " + out_path);
            csn::write_corpus_jsonl(synth.corpus, out);
            if (!ledger_path.empty()) {
                std::ofstream lg(ledger_path);
                csn::write_ledger(synth.ledger, lg);
            }
            std::cout << "articles\t" << synth.corpus.articles.size() << "\n"
                      << "planted_verbatim\t" << synth.ledger.verbatim_pairs.size()
                      << "\n"
                      << "planted_partial\t" << synth.ledger.partial_pairs.size()
                      << "\n";
        }
    } catch (const csn::StageError& e) {
        std::cerr << "stage failure: " << e.what() << "\n";
        return kExitStageFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
