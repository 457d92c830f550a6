#include "fcs/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fcs {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
    model.validate();
    solver.validate();
    if (n_t < 16) throw ConfigError("RunConfig: n_t must be >= 16");
    for (double p : phis) {
        if (p <= -M_PI - 1e-12 || p > M_PI + 1e-12)
            throw ConfigError("RunConfig: phi values must lie in (-pi, pi]");
    }
    for (int a : A_sizes) {
        if (a < 0 || a > model.L) throw ConfigError("RunConfig: A_sizes must lie in [0, L]");
    }
    if (!(continuation_step > 0)) throw ConfigError("RunConfig: continuation_step must be > 0");
    if (!(both_branches_from > 0)) throw ConfigError("RunConfig: both_branches_from must be > 0");
    if (out_dir.empty()) throw ConfigError("RunConfig: output directory must be set");
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
    }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig cfg;
    reject_unknown(j, {"model", "grid", "sweep", "solver", "output"}, "top level");
    if (j.contains("model")) {
        const json& m = j["model"];
        reject_unknown(m, {"J", "V", "zeta", "mu", "L", "N", "periodic"}, "model");
        get_if(m, "J", cfg.model.J);
        get_if(m, "V", cfg.model.V);
        get_if(m, "zeta", cfg.model.zeta);
        get_if(m, "mu", cfg.model.mu);
        get_if(m, "L", cfg.model.L);
        get_if(m, "N", cfg.model.N);
        get_if(m, "periodic", cfg.model.periodic);
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        reject_unknown(g, {"T", "n_t"}, "grid");
        get_if(g, "T", cfg.model.T);
        get_if(g, "n_t", cfg.n_t);
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        reject_unknown(s, {"phis", "A_sizes", "continuation_step", "both_branches_from"}, "sweep");
        get_if(s, "phis", cfg.phis);
        get_if(s, "A_sizes", cfg.A_sizes);
        get_if(s, "continuation_step", cfg.continuation_step);
        get_if(s, "both_branches_from", cfg.both_branches_from);
    }
    if (j.contains("solver")) {
        const json& s = j["solver"];
        reject_unknown(s, {"damping", "tol", "max_iters", "init"}, "solver");
        get_if(s, "damping", cfg.solver.damping);
        get_if(s, "tol", cfg.solver.tol);
        get_if(s, "max_iters", cfg.solver.max_iters);
        if (s.contains("init")) {
            const std::string init = s.at("init").get<std::string>();
            if (init == "analytic") cfg.solver.init = InitKind::AnalyticSaddle;
            else if (init == "zero") cfg.solver.init = InitKind::Zero;
            else throw ConfigError("config: solver.init must be 'analytic' or 'zero'");
        }
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        reject_unknown(o, {"dir", "cache"}, "output");
        get_if(o, "dir", cfg.out_dir);
        get_if(o, "cache", cfg.cache);
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_echo(const RunConfig& cfg) {
    json j;
    j["model"] = {{"J", cfg.model.J},   {"V", cfg.model.V}, {"zeta", cfg.model.zeta},
                  {"mu", cfg.model.mu}, {"L", cfg.model.L}, {"N", cfg.model.N},
                  {"periodic", cfg.model.periodic}};
    j["grid"] = {{"T", cfg.model.T}, {"n_t", cfg.n_t}};
    j["sweep"] = {{"phis", cfg.phis},
                  {"A_sizes", cfg.A_sizes},
                  {"continuation_step", cfg.continuation_step},
                  {"both_branches_from", cfg.both_branches_from}};
    j["solver"] = {{"damping", cfg.solver.damping},
                   {"tol", cfg.solver.tol},
                   {"max_iters", cfg.solver.max_iters},
                   {"init", cfg.solver.init == InitKind::Zero ? "zero" : "analytic"}};
    j["output"] = {{"dir", cfg.out_dir}, {"cache", cfg.cache}};
    return j.dump(2);
}

CsvRow make_row(const ModelParams& params, const ContourGrid& grid, const FcsResult& r) {
    CsvRow row;
    row.zeta = params.zeta;
    row.V = params.V;
    row.mu = params.mu;
    row.L = params.L;
    row.T = grid.T;
    row.n_t = grid.n_t;
    row.phi = r.phi;
    row.A_size = r.A_size;
    row.reF_perN = r.f_per_N.real();
    row.imF_perN = r.f_per_N.imag();
    row.branch = r.branch == BranchTag::FromBelow ? "FromBelow" : "FromAbove";
    row.iters = r.meta.iterations;
    row.converged = r.converged;
    return row;
}

void write_csv(const std::string& path, const std::vector<CsvRow>& rows,
               const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw ConfigError("write_csv: cannot open '" + path + "'");
    if (!header_comment.empty()) {
        std::istringstream ss(header_comment);
        std::string line;
        while (std::getline(ss, line)) out << "# " << line << "\n";
    }
    out << "zeta,V,mu,L,T,n_t,phi,A_size,reF_perN,imF_perN,branch,iters,converged\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%d,%.17g,%d,%.17g,%d,%.17g,%.17g,%s,%d,%d\n", r.zeta, r.V,
                      r.mu, r.L, r.T, r.n_t, r.phi, r.A_size, r.reF_perN, r.imF_perN,
                      r.branch.c_str(), r.iters, r.converged ? 1 : 0);
        out << buf;
    }
}

std::vector<CsvRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("read_csv: cannot open '" + path + "'");
    std::vector<CsvRow> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("zeta,", 0) != 0) throw ConfigError("read_csv: unexpected header: " + line);
            header_seen = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (f.size() != 13) throw ConfigError("read_csv: expected 13 columns, got line: " + line);
        CsvRow r;
        r.zeta = std::stod(f[0]);
        r.V = std::stod(f[1]);
        r.mu = std::stod(f[2]);
        r.L = std::stoi(f[3]);
        r.T = std::stod(f[4]);
        r.n_t = std::stoi(f[5]);
        r.phi = std::stod(f[6]);
        r.A_size = std::stoi(f[7]);
        r.reF_perN = std::stod(f[8]);
        r.imF_perN = std::stod(f[9]);
        r.branch = f[10];
        r.iters = std::stoi(f[11]);
        r.converged = f[12] == "1" || f[12] == "true";
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<FcsResult> rows_to_results(const std::vector<CsvRow>& rows) {
    std::vector<FcsResult> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        FcsResult f;
        f.phi = r.phi;
        f.A_size = r.A_size;
        f.f_per_N = cplx{r.reF_perN, r.imF_perN};
        f.branch = r.branch == "FromAbove" ? BranchTag::FromAbove : BranchTag::FromBelow;
        f.converged = r.converged;
        f.meta.iterations = r.iters;
        out.push_back(std::move(f));
    }
    // re-mark primaries per (A, phi)
    for (auto& f : out) f.primary = true;
    for (auto& f : out) {
        for (const auto& g : out) {
            if (g.A_size == f.A_size && g.phi == f.phi && g.converged && f.converged &&
                g.f_per_N.real() < f.f_per_N.real()) {
                f.primary = false;
            }
        }
    }
    return out;
}

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t cache_key(const ModelParams& params, const ContourGrid& grid, const TwistSpec& twist) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "J=%.17g|V=%.17g|zeta=%.17g|mu=%.17g|L=%d|T=%.17g|per=%d|nt=%d|phi=%.17g|A=%d",
                  params.J, params.V, params.zeta, params.mu, params.L, params.T,
                  params.periodic ? 1 : 0, grid.n_t, twist.phi, twist.A_size);
    return fnv1a64(buf);
}

namespace {

constexpr char kMagic[4] = {'F', 'C', 'S', 'G'};
constexpr uint32_t kVersion = 1;

struct CacheHeader {
    char magic[4];
    uint32_t version;
    uint32_t D;
    uint32_t L;
    uint64_t key;
    uint32_t n_t;
    uint32_t reserved;
    char pad[32];
};
static_assert(sizeof(CacheHeader) == 64);

void put_tracks(std::ofstream& out, const Eigen::ArrayXcd& a) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double re = a(i).real(), im = a(i).imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
}

bool get_tracks(std::ifstream& in, Eigen::ArrayXcd& a, int n) {
    a.resize(n);
    for (int i = 0; i < n; ++i) {
        double re, im;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        if (!in) return false;
        a(i) = cplx{re, im};
    }
    return true;
}

}  // namespace

FileSigmaCache::FileSigmaCache(std::string dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
}

std::string FileSigmaCache::path_for(uint64_t key) const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "FCSG_%016" PRIx64 ".bin", key);
    return (fs::path(dir_) / buf).string();
}

bool FileSigmaCache::load(const ModelParams& params, const ContourGrid& grid,
                          const TwistSpec& twist, std::vector<SelfEnergy>& out) {
    const uint64_t key = cache_key(params, grid, twist);
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in) return false;
    CacheHeader h{};
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!in || std::memcmp(h.magic, kMagic, 4) != 0 || h.version != kVersion || h.key != key ||
        h.L != static_cast<uint32_t>(params.L) || h.n_t != static_cast<uint32_t>(grid.n_t) ||
        h.D != static_cast<uint32_t>(grid.points())) {
        return false;
    }
    std::vector<SelfEnergy> sig(params.L);
    for (auto& s : sig) {
        for (auto* track : {&s.uu_a, &s.uu_b, &s.dd_a, &s.dd_b, &s.ud, &s.du}) {
            if (!get_tracks(in, *track, grid.n_t)) return false;
        }
    }
    out = std::move(sig);
    return true;
}

void FileSigmaCache::store(const ModelParams& params, const ContourGrid& grid,
                           const TwistSpec& twist, const std::vector<SelfEnergy>& sigma) {
    const uint64_t key = cache_key(params, grid, twist);
    std::lock_guard<std::mutex> lock(write_mutex_);
    const std::string target = path_for(key);
    const std::string tmp = target + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) return;
        CacheHeader h{};
        std::memcpy(h.magic, kMagic, 4);
        h.version = kVersion;
        h.D = static_cast<uint32_t>(grid.points());
        h.L = static_cast<uint32_t>(params.L);
        h.key = key;
        h.n_t = static_cast<uint32_t>(grid.n_t);
        out.write(reinterpret_cast<const char*>(&h), sizeof(h));
        for (const auto& s : sigma) {
            for (const auto* track : {&s.uu_a, &s.uu_b, &s.dd_a, &s.dd_b, &s.ud, &s.du}) {
                put_tracks(out, *track);
            }
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
}

}  // namespace fcs
