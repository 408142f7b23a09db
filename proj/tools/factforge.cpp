#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "factforge/config.hpp"
#include "factforge/error.hpp"
#include "factforge/pipeline.hpp"

using namespace factforge;

int main(int argc, char** argv) {
    CLI::App app{"factforge: corrupt reference summaries with plausible infills, "
                 "build correction training data, and score correctors"};
    app.require_subcommand(1);
    app.fallthrough();  // options may follow the subcommand name

    std::string config_path, corpus, lexicon, out_dir;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    double positive_ratio = 0.0;
    std::string corrector, filter, infill;
    bool length_normalize = false, no_summ_ctxt = false, no_relev_pass = false;
    std::string load_report, save_model, load_model;
    bool dump_passages = false;

    auto* opt_config =
        app.add_option("-c,--config", config_path,
                       "JSON config file (fallback: $FACTFORGE_CONFIG)");
    auto* opt_corpus = app.add_option("--corpus", corpus, "corpus JSONL path");
    auto* opt_lexicon = app.add_option("--lexicon", lexicon, "verb lexicon path");
    auto* opt_out = app.add_option("-o,--out", out_dir, "artifact directory");
    auto* opt_seed = app.add_option("--seed", seed, "master RNG seed");
    auto* opt_jobs = app.add_option("-j,--jobs", jobs, "worker threads");
    auto* opt_ratio = app.add_option("--positive-ratio", positive_ratio,
                                     "fraction of emitted examples kept uncorrupted");
    auto* opt_corrector = app.add_option(
        "--corrector", corrector, "correction backend: baseline|identity|remote:<url>");
    auto* opt_filter = app.add_option(
        "--filter", filter, "factuality filter: none|remote:<url>");
    auto* opt_infill = app.add_option("--infill", infill,
                                      "infill backend: local|remote:<url>");
    auto* opt_lnorm = app.add_flag("--length-normalize", length_normalize,
                                   "divide infill scores by span length");
    auto* opt_nosumm = app.add_flag("--no-summ-ctxt", no_summ_ctxt,
                                    "drop the summary segment from corrector input");
    auto* opt_nopass =
        app.add_flag("--no-relev-pass", no_relev_pass,
                     "replace retrieved passages with the whole document");
    app.add_option("--load-report", load_report,
                   "also write the corpus load report to this path (ingest)");
    app.add_option("--save-model", save_model,
                   "write the infill model here instead of <out>/model.json");
    app.add_option("--load-model", load_model,
                   "read the infill model from here instead of <out>/model.json");
    app.add_flag("--dump-passages", dump_passages,
                 "write per-record passage debug rows (build-dataset)");

    app.add_subcommand("ingest", "load and validate the corpus");
    app.add_subcommand("train-infill", "count n-grams and export masked queries");
    app.add_subcommand("gen-adv", "generate corrupted/positive examples");
    app.add_subcommand("build-dataset", "serialize correction training records");
    app.add_subcommand("correct", "run a corrector over the corrupted summaries");
    app.add_subcommand("eval", "score corrected summaries and write reports");
    app.add_subcommand("pipeline", "run all stages in order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        PipelineConfig cfg;
        if (opt_config->count() > 0) {
            cfg = load_config(config_path);
        } else if (const char* env = std::getenv("FACTFORGE_CONFIG");
                   env && *env != '\0') {
            cfg = load_config(env);
        }

        if (opt_corpus->count()) cfg.corpus = corpus;
        if (opt_lexicon->count()) cfg.lexicon = lexicon;
        if (opt_out->count()) cfg.out_dir = out_dir;
        if (opt_seed->count()) cfg.seed = seed;
        if (opt_ratio->count()) cfg.positive_ratio = positive_ratio;
        if (opt_corrector->count()) cfg.corrector = corrector;
        if (opt_filter->count()) cfg.filter = filter;
        if (opt_infill->count()) cfg.infill = infill;
        if (opt_lnorm->count()) cfg.length_normalize = true;
        if (opt_nosumm->count()) cfg.use_summary_context = false;
        if (opt_nopass->count()) cfg.use_relevant_passages = false;
        validate_config(cfg);

        RunOptions opts;
        opts.jobs = opt_jobs->count() ? jobs : 1;
        opts.load_report_path = load_report;
        opts.save_model_path = save_model;
        opts.load_model_path = load_model;
        opts.dump_passages = dump_passages;

        // Resolved-config echo: any artifact can be reproduced from its log.
        std::cerr << "[config] resolved:\n" << cfg.to_json() << "\n";

        const std::string stage = app.get_subcommands().at(0)->get_name();
        if (stage == "ingest")
            run_ingest(cfg, opts);
        else if (stage == "train-infill")
            run_train_infill(cfg, opts);
        else if (stage == "gen-adv")
            run_gen_adv(cfg, opts);
        else if (stage == "build-dataset")
            run_build_dataset(cfg, opts);
        else if (stage == "correct")
            run_correct(cfg, opts);
        else if (stage == "eval")
            run_eval(cfg, opts);
        else
            run_pipeline(cfg, opts);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const FatalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
