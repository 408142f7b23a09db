#include "factforge/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "factforge/advgen.hpp"
#include "factforge/corpus.hpp"
#include "factforge/correct.hpp"
#include "factforge/error.hpp"
#include "factforge/evalrep.hpp"
#include "factforge/extract.hpp"
#include "factforge/infill.hpp"
#include "factforge/passage.hpp"
#include "factforge/remote.hpp"
#include "factforge/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace factforge {

StagePaths stage_paths(const std::string& out_dir) {
    auto at = [&](const char* name) { return (fs::path(out_dir) / name).string(); };
    StagePaths p;
    p.ingest_summary = at("ingest.summary.json");
    p.infill_train = at("infill.train.jsonl");
    p.train_summary = at("train.summary.json");
    p.model = at("model.json");
    p.adversarial = at("adversarial.jsonl");
    p.genstats = at("genadv.stats.json");
    p.dataset = at("dataset.jsonl");
    p.dataset_summary = at("dataset.summary.json");
    p.passage_dump = at("passages.debug.jsonl");
    p.corrected = at("corrected.jsonl");
    p.correct_summary = at("correct.summary.json");
    p.report_json = at("eval.report.json");
    p.report_tsv = at("eval.report.tsv");
    return p;
}

namespace {

// All artifacts go through a temp-file rename so a failing stage never
// leaves a half-written file at the real path.
void write_file(const std::string& path, const std::string& content) {
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FatalError("cannot write " + path);
        out << content;
        if (!out) throw FatalError("short write to " + path);
    }
    fs::rename(tmp, target);
}

std::vector<std::string> read_jsonl(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in)
        throw FatalError(std::string("missing ") + what + " at " + path +
                         " (run the producing stage first)");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

std::vector<CorpusEntry> load_entries(const PipelineConfig& cfg, LoadReport* report) {
    LoadReport local;
    auto entries =
        load_corpus(cfg.corpus, SummaryKind::Reference, report ? *report : local);
    if (entries.empty()) throw FatalError("corpus is empty: " + cfg.corpus);
    return entries;
}

std::unordered_map<std::string, const Document*> index_documents(
    const std::vector<CorpusEntry>& entries) {
    std::unordered_map<std::string, const Document*> map;
    for (const auto& entry : entries) map.emplace(entry.document.id, &entry.document);
    return map;
}

json sentences_to_json(const std::vector<Sentence>& sentences) {
    json arr = json::array();
    for (const auto& s : sentences) arr.push_back(s.tokens);
    return arr;
}

json correction_to_json(const CorrectionResult& result) {
    json j;
    j["doc_id"] = result.doc_id;
    j["filtered"] = result.filtered_out;
    j["sentences"] = sentences_to_json(result.corrected.sentences);
    json rows = json::array();
    for (const auto& s : result.per_sentence) {
        rows.push_back({{"original", s.original},
                        {"corrected", s.corrected},
                        {"changed", s.changed},
                        {"failed", s.failed},
                        {"corrector", s.corrector}});
    }
    j["per_sentence"] = std::move(rows);
    if (result.verdict)
        j["verdict"] = {{"factual", result.verdict->factual},
                        {"score", result.verdict->score}};
    return j;
}

CorrectionResult correction_from_json(const json& j) {
    CorrectionResult result;
    result.doc_id = j.at("doc_id").get<std::string>();
    result.filtered_out = j.at("filtered").get<bool>();
    result.corrected.doc_id = result.doc_id;
    result.corrected.kind = SummaryKind::Corrected;
    for (const auto& tokens : j.at("sentences")) {
        Sentence s;
        s.index = result.corrected.sentences.size();
        for (const auto& t : tokens) s.tokens.push_back(t.get<std::string>());
        s.raw = join_tokens(s.tokens);
        result.corrected.sentences.push_back(std::move(s));
    }
    for (const auto& row : j.at("per_sentence")) {
        SentenceCorrection s;
        for (const auto& t : row.at("original")) s.original.push_back(t.get<std::string>());
        for (const auto& t : row.at("corrected")) s.corrected.push_back(t.get<std::string>());
        s.changed = row.at("changed").get<bool>();
        s.failed = row.at("failed").get<bool>();
        s.corrector = row.at("corrector").get<std::string>();
        result.per_sentence.push_back(std::move(s));
    }
    if (j.contains("verdict")) {
        ClassifierVerdict v;
        v.factual = j["verdict"].at("factual").get<bool>();
        v.score = j["verdict"].at("score").get<double>();
        result.verdict = v;
    }
    return result;
}

NGramModel load_model_for(const PipelineConfig& cfg, const RunOptions& opts) {
    const std::string path = opts.load_model_path.empty()
                                 ? stage_paths(cfg.out_dir).model
                                 : opts.load_model_path;
    if (!fs::exists(path))
        throw FatalError("no infill model at " + path + "; run train-infill first");
    return NGramModel::load(path);
}

std::unique_ptr<Corrector> make_corrector(const PipelineConfig& cfg,
                                          const VerbLexicon& lexicon) {
    BackendSpec spec =
        parse_backend("corrector", cfg.corrector, {"baseline", "identity"});
    if (spec.kind == "baseline") {
        BaselineParams params;
        params.ngram_order = cfg.ngram_order;
        params.alpha = cfg.alpha;
        params.delta = cfg.delta;
        return std::make_unique<BaselineCorrector>(lexicon, params);
    }
    if (spec.kind == "identity") return std::make_unique<IdentityCorrector>();
    return std::make_unique<RemoteCorrector>(spec.url);
}

std::unique_ptr<FactualityClassifier> make_filter(const PipelineConfig& cfg) {
    BackendSpec spec = parse_backend("filter", cfg.filter, {"none"});
    if (spec.kind == "none") return nullptr;
    return std::make_unique<RemoteClassifier>(spec.url);
}

void log_stage(const std::string& stage, const std::string& message) {
    std::cerr << "[" << stage << "] " << message << "\n";
}

}  // namespace

void run_ingest(const PipelineConfig& cfg, const RunOptions& opts) {
    const StagePaths paths = stage_paths(cfg.out_dir);
    LoadReport report;
    auto entries = load_entries(cfg, &report);

    std::size_t doc_sentences = 0, summary_sentences = 0;
    for (const auto& entry : entries) {
        doc_sentences += entry.document.sentences.size();
        summary_sentences += entry.summary.sentences.size();
    }

    json j;
    j["schema"] = 1;
    j["documents"] = entries.size();
    j["document_sentences"] = doc_sentences;
    j["summary_sentences"] = summary_sentences;
    j["skipped"] = json::array();
    for (const auto& skip : report.skipped)
        j["skipped"].push_back({{"line", skip.line_number}, {"reason", skip.reason}});
    write_file(paths.ingest_summary, j.dump(2) + "\n");

    if (!opts.load_report_path.empty())
        write_file(opts.load_report_path, report.to_json() + "\n");

    log_stage("ingest", std::to_string(entries.size()) + " documents (" +
                            std::to_string(report.skipped.size()) +
                            " lines skipped) -> " + paths.ingest_summary);
}

void run_train_infill(const PipelineConfig& cfg, const RunOptions& opts) {
    const StagePaths paths = stage_paths(cfg.out_dir);
    auto entries = load_entries(cfg, nullptr);
    VerbLexicon lexicon = load_lexicon(cfg.lexicon);

    std::vector<Document> documents;
    documents.reserve(entries.size());
    for (const auto& entry : entries) documents.push_back(entry.document);

    NGramModel model = train_ngram(documents, cfg.ngram_order, cfg.alpha);
    const std::string model_path =
        opts.save_model_path.empty() ? paths.model : opts.save_model_path;
    if (fs::path(model_path).has_parent_path())
        fs::create_directories(fs::path(model_path).parent_path());
    model.save(model_path);

    // The masked-query set a span-infilling learner would train on; the
    // n-gram model itself only needs the raw counts above.
    std::string lines;
    std::size_t n_queries = 0;
    for (const auto& doc : documents) {
        for (const auto& query : build_infill_training(doc, lexicon, cfg.k_first)) {
            json j;
            j["doc_id"] = query.doc_id;
            j["sentence_index"] = query.sentence_index;
            j["role"] = role_name(query.role);
            j["masked_text"] = query.masked_text;
            j["gold_span"] = query.gold_span;
            j["context"] = query.context;
            lines += j.dump();
            lines += '\n';
            ++n_queries;
        }
    }
    write_file(paths.infill_train, lines);

    json j;
    j["schema"] = 1;
    j["documents"] = documents.size();
    j["masked_queries"] = n_queries;
    j["ngram_order"] = cfg.ngram_order;
    j["alpha"] = cfg.alpha;
    j["vocabulary"] = model.vocabulary_size();
    write_file(paths.train_summary, j.dump(2) + "\n");

    log_stage("train-infill", "model over " + std::to_string(model.vocabulary_size()) +
                                  " tokens -> " + model_path + ", " +
                                  std::to_string(n_queries) + " masked queries -> " +
                                  paths.infill_train);
}

void run_gen_adv(const PipelineConfig& cfg, const RunOptions& opts) {
    const StagePaths paths = stage_paths(cfg.out_dir);
    auto entries = load_entries(cfg, nullptr);
    VerbLexicon lexicon = load_lexicon(cfg.lexicon);

    GenConfig gen;
    gen.rank_lo = cfg.rank_lo;
    gen.rank_hi = cfg.rank_hi;
    gen.beam_size = cfg.beam_size;
    gen.positive_ratio = cfg.positive_ratio;
    gen.seed = cfg.seed;
    gen.max_span_len = cfg.max_span_len;
    gen.length_normalize = cfg.length_normalize;

    InfillOptions infill_opts;
    infill_opts.beam_size = cfg.beam_size;
    infill_opts.max_span_len = cfg.max_span_len;
    infill_opts.length_normalize = cfg.length_normalize;

    BackendSpec spec = parse_backend("infill", cfg.infill, {"local"});
    NGramModel model(cfg.ngram_order, cfg.alpha);
    InfillFn infill_fn;
    if (spec.kind == "local") {
        model = load_model_for(cfg, opts);
        infill_fn = memoized_ngram_infill(model, infill_opts);
    } else {
        infill_fn = remote_infill_fn(spec.url, cfg.beam_size);
    }

    GenStats stats;
    auto examples =
        generate_adversarial(entries, lexicon, infill_fn, gen, opts.jobs, stats);

    std::string lines;
    for (const auto& example : examples) {
        lines += example.to_json_line();
        lines += '\n';
    }
    write_file(paths.adversarial, lines);
    write_file(paths.genstats, stats.to_json() + "\n");

    log_stage("gen-adv", std::to_string(stats.negatives) + " negatives + " +
                             std::to_string(stats.positives) + " positives (" +
                             std::to_string(stats.skipped_masks) +
                             " masks skipped) -> " + paths.adversarial);
}

void run_build_dataset(const PipelineConfig& cfg, const RunOptions& opts) {
    const StagePaths paths = stage_paths(cfg.out_dir);
    auto entries = load_entries(cfg, nullptr);
    auto by_id = index_documents(entries);

    std::vector<AdversarialExample> examples;
    for (const auto& line : read_jsonl(paths.adversarial, "adversarial examples"))
        examples.push_back(AdversarialExample::from_json_line(line));

    std::vector<std::string> dataset_lines(examples.size());
    std::vector<std::string> passage_lines(examples.size());
    std::size_t max_input = 0, max_target = 0;
    std::mutex stats_mutex;

    parallel_for_index(examples.size(), opts.jobs, [&](std::size_t i) {
        const auto& example = examples[i];
        auto found = by_id.find(example.doc_id);
        if (found == by_id.end())
            throw FatalError("adversarial example references unknown document " +
                             example.doc_id);
        const Document& document = *found->second;

        Sentence corrupted;
        corrupted.index = example.sentence_index;
        corrupted.tokens = example.corrupted_sentence;
        corrupted.raw = join_tokens(corrupted.tokens);

        PassageSet passages =
            select_passages(corrupted, document, cfg.k_passages, cfg.window);
        CorrectionRecord record =
            serialize_training(example, passages, cfg.max_in, cfg.max_out);
        dataset_lines[i] = dataset_json_line(example, record);

        if (opts.dump_passages) {
            json j;
            j["doc_id"] = example.doc_id;
            j["sentence_index"] = example.sentence_index;
            j["label"] = example.label == ExampleLabel::Negative ? "neg" : "pos";
            json selected = json::array();
            for (const auto& [index, score] : passages.selected)
                selected.push_back({{"index", index}, {"score", score}});
            j["selected"] = std::move(selected);
            j["covered"] = passages.covered;
            j["text"] = join_tokens(passages.text);
            passage_lines[i] = j.dump();
        }

        std::lock_guard<std::mutex> lock(stats_mutex);
        max_input = std::max(max_input, split_tokens(record.input).size());
        max_target = std::max(max_target, split_tokens(record.target).size());
    });

    std::string lines;
    for (const auto& line : dataset_lines) {
        lines += line;
        lines += '\n';
    }
    write_file(paths.dataset, lines);

    if (opts.dump_passages) {
        std::string dump;
        for (const auto& line : passage_lines) {
            dump += line;
            dump += '\n';
        }
        write_file(paths.passage_dump, dump);
    }

    json j;
    j["schema"] = 1;
    j["records"] = examples.size();
    j["max_input_tokens"] = max_input;
    j["max_target_tokens"] = max_target;
    j["max_in"] = cfg.max_in;
    j["max_out"] = cfg.max_out;
    write_file(paths.dataset_summary, j.dump(2) + "\n");

    log_stage("build-dataset", std::to_string(examples.size()) + " records -> " +
                                   paths.dataset + " (longest input " +
                                   std::to_string(max_input) + " tokens)");
}

void run_correct(const PipelineConfig& cfg, const RunOptions& opts) {
    const StagePaths paths = stage_paths(cfg.out_dir);
    auto entries = load_entries(cfg, nullptr);
    auto by_id = index_documents(entries);
    VerbLexicon lexicon = load_lexicon(cfg.lexicon);

    std::vector<AdversarialExample> examples;
    for (const auto& line : read_jsonl(paths.adversarial, "adversarial examples"))
        examples.push_back(AdversarialExample::from_json_line(line));

    auto corrector = make_corrector(cfg, lexicon);
    auto filter = make_filter(cfg);

    CorrectOptions correct_opts;
    correct_opts.flags.use_summary_context = cfg.use_summary_context;
    correct_opts.flags.use_relevant_passages = cfg.use_relevant_passages;
    correct_opts.k_passages = cfg.k_passages;
    correct_opts.window = cfg.window;
    correct_opts.max_in = cfg.max_in;

    std::vector<CorrectionResult> results(examples.size());
    parallel_for_index(examples.size(), opts.jobs, [&](std::size_t i) {
        auto found = by_id.find(examples[i].doc_id);
        if (found == by_id.end())
            throw FatalError("adversarial example references unknown document " +
                             examples[i].doc_id);
        results[i] = correct_summary(examples[i].corrupted_summary, *found->second,
                                     *corrector, correct_opts, filter.get());
    });

    std::string lines;
    std::size_t changed = 0, filtered = 0, failed = 0;
    for (const auto& result : results) {
        lines += correction_to_json(result).dump();
        lines += '\n';
        bool any_changed = false, any_failed = false;
        for (const auto& s : result.per_sentence) {
            any_changed |= s.changed;
            any_failed |= s.failed;
        }
        if (any_changed) ++changed;
        if (any_failed) ++failed;
        if (result.filtered_out) ++filtered;
    }
    write_file(paths.corrected, lines);

    json j;
    j["schema"] = 1;
    j["summaries"] = results.size();
    j["changed"] = changed;
    j["filtered"] = filtered;
    j["failed"] = failed;
    j["corrector"] = corrector->name();
    j["filter"] = filter ? filter->name() : "none";
    write_file(paths.correct_summary, j.dump(2) + "\n");

    log_stage("correct", std::to_string(results.size()) + " summaries, " +
                             std::to_string(changed) + " changed, " +
                             std::to_string(filtered) + " filtered -> " +
                             paths.corrected);
}

void run_eval(const PipelineConfig& cfg, const RunOptions& opts) {
    const StagePaths paths = stage_paths(cfg.out_dir);
    auto entries = load_entries(cfg, nullptr);

    std::vector<AdversarialExample> examples;
    for (const auto& line : read_jsonl(paths.adversarial, "adversarial examples"))
        examples.push_back(AdversarialExample::from_json_line(line));

    std::vector<CorrectionResult> results;
    for (const auto& line : read_jsonl(paths.corrected, "corrected summaries"))
        results.push_back(correction_from_json(json::parse(line)));

    std::vector<SummaryUnit> references;
    references.reserve(examples.size());
    for (const auto& example : examples) references.push_back(example.original_summary);

    std::vector<Document> documents;
    documents.reserve(entries.size());
    for (const auto& entry : entries) documents.push_back(entry.document);

    auto filter = make_filter(cfg);
    EvalReport report =
        evaluate(results, references, documents, filter.get(), opts.jobs);

    RestorationStats stats = restoration_stats(results, examples);
    report.restoration_rate = stats.restoration_rate();
    report.false_edit_rate = stats.false_edit_rate();

    write_file(paths.report_json, report.to_json() + "\n");
    write_file(paths.report_tsv, report.to_tsv());

    std::ostringstream line;
    line << report.n_summaries << " summaries, rougeL " << report.rougeL
         << ", restoration " << *report.restoration_rate << ", false edits "
         << *report.false_edit_rate << " -> " << paths.report_json;
    log_stage("eval", line.str());
}

void run_pipeline(const PipelineConfig& cfg, const RunOptions& opts) {
    run_ingest(cfg, opts);
    run_train_infill(cfg, opts);
    run_gen_adv(cfg, opts);
    run_build_dataset(cfg, opts);
    run_correct(cfg, opts);
    run_eval(cfg, opts);
}

}  // namespace factforge
