// Command-line front end: dataset construction, scoring, title
// evaluation and run comparison.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "artexplain/conformance.hpp"
#include "artexplain/corpus.hpp"
#include "artexplain/dataset.hpp"
#include "artexplain/eval.hpp"
#include "artexplain/report.hpp"

namespace fs = std::filesystem;
using namespace artexplain;

namespace {

struct Config {
    std::uint64_t seed = 42;
    double holdout_fraction = 0.118;
    double partial_title_threshold = 0.5;
    unsigned jobs = std::thread::hardware_concurrency();
    std::string format = "csv";
};

// Flat key=value config file; CLI flags win over file values.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) out[key] = value;
    }
    return out;
}

void apply_config_file(const CLI::App& cmd, const std::string& path, Config& cfg) {
    auto kv = read_config_file(path);
    auto want = [&](const char* flag, const char* key) {
        return kv.count(key) && cmd.get_option(flag)->count() == 0;
    };
    if (want("--seed", "seed")) cfg.seed = std::stoull(kv["seed"]);
    if (want("--jobs", "jobs")) cfg.jobs = static_cast<unsigned>(std::stoul(kv["jobs"]));
    if (want("--format", "format")) cfg.format = kv["format"];
    if (want("--holdout-fraction", "holdout_fraction"))
        cfg.holdout_fraction = std::stod(kv["holdout_fraction"]);
    if (want("--partial-title-threshold", "partial_title_threshold"))
        cfg.partial_title_threshold = std::stod(kv["partial_title_threshold"]);
}

std::vector<ArticleRecord> load_dump(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dump: " + path);
    return parse_dump(in);
}

void add_common_flags(CLI::App* cmd, Config& cfg, std::string& config_path) {
    cmd->add_option("--seed", cfg.seed, "RNG seed for all seeded steps");
    cmd->add_option("--jobs", cfg.jobs, "Worker thread count (output is independent of it)");
    cmd->add_option("--format", cfg.format, "Report format: csv, md or json");
    cmd->add_option("--config", config_path, "Flat key=value config file; flags win");
    cmd->add_option("--holdout-fraction", cfg.holdout_fraction,
                    "Fraction of train sections held out as the seen test set");
    cmd->add_option("--partial-title-threshold", cfg.partial_title_threshold,
                    "LCS ratio needed for a partial title match");
}

int cmd_build(const std::string& dump_path, const std::string& out_dir, const Config& cfg) {
    auto articles = load_dump(dump_path);
    std::vector<ArticleRecord> filtered;
    for (const auto& a : articles) {
        ArticleRecord f = filter_sections(a);
        if (!f.sections.empty()) filtered.push_back(std::move(f));
    }
    auto ranks = rank_articles(filtered);
    SplitPlan plan = plan_split(filtered, ranks, cfg.seed, cfg.holdout_fraction);
    DatasetBuild build = build_dataset(filtered, plan, cfg.seed);

    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "train.jsonl", std::ios::binary);
        export_train_records(build.train, filtered, out);
    }
    auto write_flat = [&](const char* name, const std::vector<InstructionInstance>& v) {
        std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
        write_instructions(v, out);
    };
    write_flat("dev.jsonl", build.dev);
    write_flat("test_seen.jsonl", build.test_seen);
    write_flat("test_unseen.jsonl", build.test_unseen);
    {
        std::ofstream out(fs::path(out_dir) / "split_plan.json", std::ios::binary);
        out << split_plan_to_json(plan).dump(2) << "\n";
    }
    json report = build_report(build);
    {
        std::ofstream out(fs::path(out_dir) / "build_report.json", std::ios::binary);
        out << report.dump(2) << "\n";
    }
    std::cout << "split      instances  pairs  images\n";
    for (const char* split : {"train", "dev", "test_seen", "test_unseen"}) {
        const auto& s = report.at(split);
        std::cout << split << std::string(11 - std::string(split).size(), ' ')
                  << s.at("total_instances").get<std::size_t>() << "  "
                  << s.at("section_pairs").get<std::size_t>() << "  "
                  << s.at("images").get<std::size_t>() << "\n";
    }
    return 0;
}

int cmd_score(const std::vector<std::string>& instruction_paths, const std::string& gen_path,
              const std::string& dump_path, const std::string& out_path, const Config& cfg,
              const std::string& run_id, const std::string& model_name) {
    std::vector<InstructionInstance> instructions;
    for (const auto& p : instruction_paths) {
        std::ifstream in(p);
        if (!in) throw std::runtime_error("cannot open instructions: " + p);
        auto part = parse_instructions(in);
        instructions.insert(instructions.end(), part.begin(), part.end());
    }
    std::ifstream gin(gen_path);
    if (!gin) throw std::runtime_error("cannot open generations: " + gen_path);
    auto generations = parse_generations(gin);

    auto articles = load_dump(dump_path);
    std::map<std::string, EntityInventory> inventories;
    for (const auto& a : articles) inventories[a.id] = entity_inventory(a);

    EvalRun run = run_eval(instructions, generations, inventories, default_windows(), cfg.jobs);
    run.run_id = run_id;
    run.model_name = model_name;

    std::string report = emit_report(run, report_format_from_string(cfg.format));
    if (out_path.empty() || out_path == "-") {
        std::cout << report;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        out << report;
        // summary row: first aggregate group
        if (!run.aggregates.empty()) {
            const auto& [key, agg] = *run.aggregates.begin();
            std::cout << group_label(key) << ": bleu=" << agg.mean.bleu
                      << " ec_exact=" << agg.mean.ec_exact << " entity_f1=" << agg.mean.entity_f1
                      << " pairs=" << agg.count << "\n";
        }
    }
    return 0;
}

int cmd_titles(const std::string& answers_path, const std::string& dump_path,
               const std::string& out_path, const Config& cfg) {
    std::ifstream ain(answers_path);
    if (!ain) throw std::runtime_error("cannot open title answers: " + answers_path);
    auto answers = parse_title_answers(ain);
    auto articles = load_dump(dump_path);
    TitleEvalResult result = eval_titles(answers, articles, cfg.partial_title_threshold);

    json items = json::array();
    for (const auto& i : result.per_item)
        items.push_back({{"article_id", i.article_id},
                         {"generated_title", i.generated_title},
                         {"exact", i.exact},
                         {"partial", i.partial}});
    // the partial criterion is a toolkit choice; published partial
    // percentages are not comparable to it
    json out = {{"exact_pct", result.exact_pct},
                {"partial_pct", result.partial_pct},
                {"partial_threshold", cfg.partial_title_threshold},
                {"partial_comparable_to_published", false},
                {"per_item", items}};
    if (out_path.empty() || out_path == "-") {
        std::cout << out.dump(2) << "\n";
    } else {
        std::ofstream f(out_path, std::ios::binary);
        f << out.dump(2) << "\n";
        std::cout << "exact=" << result.exact_pct << "% partial=" << result.partial_pct << "%\n";
    }
    return 0;
}

int cmd_compare(const std::vector<std::string>& report_paths, const Config& cfg) {
    std::vector<EvalRun> runs;
    for (const auto& p : report_paths) {
        std::ifstream in(p);
        if (!in) throw std::runtime_error("cannot open run report: " + p);
        json j = json::parse(in);
        runs.push_back(eval_run_from_json(j));
    }
    std::cout << compare_runs(runs, report_format_from_string(
                                        cfg.format == "json" ? "md" : cfg.format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corpus construction and entity-aware evaluation for artwork explanations"};
    app.require_subcommand(1);

    Config cfg;
    std::string config_path;

    auto* build = app.add_subcommand("build", "Build instruction datasets from an article dump");
    std::string build_dump, build_out = "out";
    build->add_option("dump", build_dump, "Article dump (JSONL)")->required();
    build->add_option("--out", build_out, "Output directory");
    add_common_flags(build, cfg, config_path);

    auto* score = app.add_subcommand("score", "Score model generations against instructions");
    std::vector<std::string> score_instructions;
    std::string score_gens, score_dump, score_out, score_run_id = "run", score_model;
    score->add_option("--instructions", score_instructions, "Instruction file(s) (JSONL)")
        ->required();
    score->add_option("--generations", score_gens, "Model generations (JSONL)")->required();
    score->add_option("--dump", score_dump, "Article dump, source of entity inventories")
        ->required();
    score->add_option("--out", score_out, "Report output path (default: stdout)");
    score->add_option("--run-id", score_run_id, "Run identifier for the report");
    score->add_option("--model-name", score_model, "Model name for the report");
    add_common_flags(score, cfg, config_path);

    auto* titles = app.add_subcommand("titles", "Evaluate title-generation answers");
    std::string titles_answers, titles_dump, titles_out;
    titles->add_option("--answers", titles_answers, "Title answers (JSONL)")->required();
    titles->add_option("--dump", titles_dump, "Article dump")->required();
    titles->add_option("--out", titles_out, "Report output path (default: stdout)");
    add_common_flags(titles, cfg, config_path);

    auto* compare = app.add_subcommand("compare", "Compare two or more JSON run reports");
    std::vector<std::string> compare_reports;
    compare->add_option("reports", compare_reports, "JSON run reports")->expected(-2);
    add_common_flags(compare, cfg, config_path);

    auto* conform = app.add_subcommand("conformance",
                                       "Check a published dataset release against its counts");
    std::string conform_dir;
    conform->add_option("release_dir", conform_dir, "Release directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* active = app.get_subcommands().front();
        if (!config_path.empty()) apply_config_file(*active, config_path, cfg);

        if (active == build) return cmd_build(build_dump, build_out, cfg);
        if (active == score)
            return cmd_score(score_instructions, score_gens, score_dump, score_out, cfg,
                             score_run_id, score_model);
        if (active == titles) return cmd_titles(titles_answers, titles_dump, titles_out, cfg);
        if (active == compare) return cmd_compare(compare_reports, cfg);
        if (active == conform) {
            ConformanceResult r = check_release_conformance(conform_dir);
            if (r.skipped) {
                std::cout << "SKIP: release not present at " << conform_dir << "\n";
                return 0;
            }
            for (const auto& c : r.checks)
                std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.name << " expected "
                          << c.expected << " got " << c.actual << "\n";
            return r.all_pass() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
