// io.hpp — Run configuration, CSV persistence, and the self-energy cache used
// for twist-angle continuation restarts.
#pragma once

#include <mutex>
#include <string>
#include <vector>

#include "fcs/action.hpp"
#include "fcs/analysis.hpp"

namespace fcs {

struct RunConfig {
    ModelParams model;
    int n_t = 192;
    std::vector<double> phis;
    std::vector<int> A_sizes;
    SolveOptions solver;
    double continuation_step = 0.05 * M_PI;
    double both_branches_from = 0.8 * M_PI;
    std::string out_dir = "out";
    bool cache = true;

    void validate() const;
};

// Strict JSON config: unknown keys are rejected at every level.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);
std::string config_echo(const RunConfig& cfg);  // canonical JSON echo for provenance

struct CsvRow {
    double zeta, V, mu;
    int L;
    double T;
    int n_t;
    double phi;
    int A_size;
    double reF_perN, imF_perN;
    std::string branch;  // FromBelow / FromAbove
    int iters;
    bool converged;
};

CsvRow make_row(const ModelParams& params, const ContourGrid& grid, const FcsResult& r);
void write_csv(const std::string& path, const std::vector<CsvRow>& rows,
               const std::string& header_comment = "");
std::vector<CsvRow> read_csv(const std::string& path);

// CsvRow -> FcsResult (enough structure for fits/classification).
std::vector<FcsResult> rows_to_results(const std::vector<CsvRow>& rows);

uint64_t fnv1a64(const std::string& bytes);
uint64_t cache_key(const ModelParams& params, const ContourGrid& grid, const TwistSpec& twist);

// File-backed self-energy cache. Little-endian payload of L x 6 tracks x n_t
// complex doubles under a 64-byte header: magic "FCSG", version, D, L, key,
// n_t. Writes go through a temp file + rename; reads are lock-free.
class FileSigmaCache final : public SigmaCache {
public:
    explicit FileSigmaCache(std::string dir);
    bool load(const ModelParams& params, const ContourGrid& grid, const TwistSpec& twist,
              std::vector<SelfEnergy>& out) override;
    void store(const ModelParams& params, const ContourGrid& grid, const TwistSpec& twist,
               const std::vector<SelfEnergy>& sigma) override;

private:
    std::string path_for(uint64_t key) const;
    std::string dir_;
    std::mutex write_mutex_;
};

}  // namespace fcs
