#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

// Self-deleting temp file for loader/CLI tests.
struct TempFile {
    std::filesystem::path path;

    TempFile(const std::string& stem, const std::string& content) {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               (stem + "." + std::to_string(::getpid()) + "." +
                std::to_string(counter++) + ".tmp");
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
    std::string str() const { return path.string(); }
};

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& stem) {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               (stem + "." + std::to_string(::getpid()) + "." +
                std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
};

inline std::string require_env(const char* name) {
    const char* value = std::getenv(name);
    return value ? value : "";
}

inline std::string toy_corpus_path() { return require_env("TOY_CORPUS"); }
inline std::string verb_lexicon_path() { return require_env("VERB_LEXICON"); }
inline std::string factforge_bin() { return require_env("FACTFORGE_BIN"); }

// Small word pool for randomized text properties; quote- and
// abbreviation-free by construction.
inline std::vector<std::string> random_words(std::mt19937& rng, std::size_t n) {
    static const std::vector<std::string> pool = {
        "river",  "stone",  "garden", "mayor",  "bridge", "market", "lantern",
        "harbor", "meadow", "tower",  "copper", "vault",  "cedar",  "willow",
        "quarry", "beacon", "opened", "funded", "toured", "mapped"};
    std::vector<std::string> words;
    words.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        words.push_back(pool[rng() % pool.size()]);
    return words;
}
