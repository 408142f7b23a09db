#pragma once

#include <string>

#include "factforge/config.hpp"

namespace factforge {

// Artifact locations, all derived from out_dir so one knob moves everything.
struct StagePaths {
    std::string ingest_summary;
    std::string infill_train;
    std::string train_summary;
    std::string model;
    std::string adversarial;
    std::string genstats;
    std::string dataset;
    std::string dataset_summary;
    std::string passage_dump;
    std::string corrected;
    std::string correct_summary;
    std::string report_json;
    std::string report_tsv;
};

StagePaths stage_paths(const std::string& out_dir);

// Per-invocation switches that are not part of the persisted config.
struct RunOptions {
    unsigned jobs = 1;
    std::string load_report_path;  // ingest: also write the raw load report here
    std::string save_model_path;   // train-infill: override model output
    std::string load_model_path;   // gen-adv: override model input
    bool dump_passages = false;    // build-dataset: write passage debug rows
};

// Stage drivers. Each reads its inputs from disk, writes its artifacts under
// cfg.out_dir, and logs a one-line summary to stderr. Artifacts contain no
// volatile fields (timestamps, worker counts, absolute paths), so fixed
// inputs give byte-identical outputs at any --jobs value.
void run_ingest(const PipelineConfig& cfg, const RunOptions& opts);
void run_train_infill(const PipelineConfig& cfg, const RunOptions& opts);
void run_gen_adv(const PipelineConfig& cfg, const RunOptions& opts);
void run_build_dataset(const PipelineConfig& cfg, const RunOptions& opts);
void run_correct(const PipelineConfig& cfg, const RunOptions& opts);
void run_eval(const PipelineConfig& cfg, const RunOptions& opts);

// All six stages in order.
void run_pipeline(const PipelineConfig& cfg, const RunOptions& opts);

}  // namespace factforge
