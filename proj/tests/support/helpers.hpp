#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlwave/field.hpp"
#include "nlwave/grid.hpp"

namespace testutil {

// Uniform double in [0, 1) with explicit generator state so every test run
// is reproducible from its literal seed.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Smooth random real field: a few low modes with random coefficients. Decay
// keeps it resolvable on coarse grids.
inline nlwave::Field random_smooth_field(const nlwave::Grid& g, std::mt19937_64& rng,
                                         double amplitude, int max_mode = 6) {
    std::vector<double> vals(g.size(), 0.0);
    std::vector<double> c(static_cast<std::size_t>(max_mode) + 1);
    std::vector<double> s(static_cast<std::size_t>(max_mode) + 1);
    for (int k = 1; k <= max_mode; ++k) {
        const double w = 1.0 / (k * k);
        c[static_cast<std::size_t>(k)] = uniform(rng, -w, w);
        s[static_cast<std::size_t>(k)] = uniform(rng, -w, w);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto x = g.point(i);
        double acc = 0.0;
        for (int d = 0; d < g.dim(); ++d) {
            const double th = 2.0 * M_PI * x[static_cast<std::size_t>(d)] / g.length();
            for (int k = 1; k <= max_mode; ++k)
                acc += c[static_cast<std::size_t>(k)] * std::cos(k * th) +
                       s[static_cast<std::size_t>(k)] * std::sin(k * th);
        }
        vals[i] = amplitude * acc;
    }
    return nlwave::Field::from_physical(g, std::move(vals));
}

// Scratch directory that cleans itself up. Unique per instantiation.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        std::ostringstream name;
        name << "nlwave-test-" << tag << "-" << ::getpid() << "-" << counter++;
        path_ = std::filesystem::temp_directory_path() / name.str();
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Run an external command, capture combined stdout/stderr, return exit code.
// Returns -1 if the child did not exit normally.
struct CommandResult {
    int exit_code = -1;
    std::string output;
};

inline CommandResult run_command(const std::string& cmd) {
    CommandResult res;
    const std::string full = cmd + " 2>&1";
    FILE* pipe = ::popen(full.c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    std::size_t n;
    while ((n = ::fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, n);
    const int status = ::pclose(pipe);
    if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
    return res;
}

// Location of the command-line binary under test, passed in by the build.
inline std::string cli_path() {
    const char* p = std::getenv("NLWAVE_CLI");
    return p ? std::string(p) : std::string();
}

}  // namespace testutil
