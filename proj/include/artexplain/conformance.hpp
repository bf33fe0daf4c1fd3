#ifndef ARTEXPLAIN_CONFORMANCE_HPP
#define ARTEXPLAIN_CONFORMANCE_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "artexplain/corpus.hpp"

// Optional conformance check against the published dataset release.
// The release directory is expected to hold train.jsonl (conversation
// format) plus dev/test_seen/test_unseen.jsonl (flat instruction
// format). When the directory is absent the check is skipped.

namespace artexplain {

struct ConformanceCheck {
    std::string name;
    std::size_t expected = 0;
    std::size_t actual = 0;
    bool pass = false;
};

struct ConformanceResult {
    bool skipped = false;
    std::vector<ConformanceCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

struct TrainStats {
    std::size_t total = 0;
    std::size_t titled = 0;
    std::set<std::string> images;
};

inline TrainStats scan_train_release(const std::filesystem::path& path) {
    TrainStats st;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line);
        ++st.total;
        if (j.contains("title")) ++st.titled;
        for (const auto& turn : j.value("conversations", json::array())) {
            std::string v = turn.value("value", "");
            auto b = v.find("<img>");
            auto e = v.find("</img>");
            if (b != std::string::npos && e != std::string::npos && e > b)
                st.images.insert(v.substr(b + 5, e - b - 5));
        }
    }
    return st;
}

struct FlatStats {
    std::size_t total = 0;
    std::size_t titled = 0;
};

inline FlatStats scan_flat_release(const std::filesystem::path& path) {
    FlatStats st;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line);
        ++st.total;
        if (j.value("title_included", false)) ++st.titled;
    }
    return st;
}

}  // namespace detail

/// Compares the release's counts against the published figures: the
/// per-split instruction counts (titled variants), the per-split
/// totals, and the number of distinct train images.
inline ConformanceResult check_release_conformance(const std::string& release_dir) {
    namespace fs = std::filesystem;
    ConformanceResult result;
    fs::path dir(release_dir);
    if (!fs::exists(dir / "train.jsonl")) {
        result.skipped = true;
        return result;
    }

    auto train = detail::scan_train_release(dir / "train.jsonl");
    auto dev = detail::scan_flat_release(dir / "dev.jsonl");
    auto seen = detail::scan_flat_release(dir / "test_seen.jsonl");
    auto unseen = detail::scan_flat_release(dir / "test_unseen.jsonl");

    auto add = [&](const std::string& name, std::size_t expected, std::size_t actual) {
        result.checks.push_back({name, expected, actual, expected == actual});
    };
    add("train_images", 7704, train.images.size());
    add("train_instructions", 18613, train.titled);
    add("dev_instructions", 2677, dev.titled);
    add("test_seen_instructions", 2485, seen.titled);
    add("test_unseen_instructions", 2597, unseen.titled);
    add("train_total", 38362, train.total);
    add("dev_total", 5524, dev.total);
    add("test_total", 10454, seen.total + unseen.total);
    return result;
}

}  // namespace artexplain

#endif  // ARTEXPLAIN_CONFORMANCE_HPP
