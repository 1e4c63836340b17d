#ifndef CSN_PIPELINE_HPP
#define CSN_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "csn/community.hpp"
#include "csn/network.hpp"
#include "csn/ratings.hpp"
#include "csn/tfidf.hpp"
#include "csn/winnow.hpp"

namespace csn {

struct PipelineConfig {
    std::string corpus_path;
    std::string ratings_path;  // optional
    std::string output_dir = "out";
    double window_days = 5.0;
    double cosine_threshold = 0.85;
    std::int64_t min_lag_seconds = 0;
    WinnowParams winnow;
    double min_dq = 1e-10;
    std::string centrality_orientation = "in";

    void validate() const;  // throws std::invalid_argument on bad ranges
};

struct StageRecord {
    std::string name;
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    double seconds = 0.0;
    bool cached = false;
    std::map<std::string, std::string> digests;  // output file -> digest
};

struct RunManifest {
    PipelineConfig config;
    std::vector<StageRecord> stages;
    double modularity = 0.0;
    std::uint32_t n_communities = 0;
};

class StageError : public std::runtime_error {
  public:
    StageError(const std::string& stage, const std::string& cause)
        : std::runtime_error(stage + ": " + cause), stage_(stage) {}
    const std::string& stage() const { return stage_; }

  private:
    std::string stage_;
};

// FNV-1a 64-bit digest, hex-encoded; keys the stage cache and the
// determinism checks.
std::string digest_bytes(const std::string& bytes);
std::string digest_file(const std::string& path);

// Runs corpus -> similarity -> network -> community -> ratings -> winnow and
// writes every stage artifact plus reports and manifest.json under
// config.output_dir. With `use_cache`, stages whose recorded input digests
// are unchanged are skipped. Stage failures raise StageError; artifacts
// written so far are left in place.
RunManifest run_pipeline(const PipelineConfig& config, bool use_cache = false);

// Reads a key = value config file; unknown keys are an error.
PipelineConfig load_config(const std::string& path);

// Per-community leader table: highest eigenvector centrality plus the four
// most internal/external incoming/outgoing edge-weight leaders. Ties break
// lexicographically and are flagged.
struct CommunityLeaders {
    std::uint32_t community = 0;
    std::size_t n_members = 0;
    // row label -> (leader source, value, tied)
    std::vector<std::tuple<std::string, std::string, double, bool>> rows;
};

std::vector<CommunityLeaders> compute_leaders(const SharingNetwork& net,
                                              const Partition& partition,
                                              const CentralityResult& centrality);

}  // namespace csn

#endif
