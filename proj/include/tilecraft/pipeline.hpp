// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tilecraft/constraint.hpp"
#include "tilecraft/imaging.hpp"
#include "tilecraft/metrics.hpp"
#include "tilecraft/sampler.hpp"

namespace tilecraft {

/// Process exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitSpec = 1, kExitRuntime = 2 };

struct RunConfig {
    std::filesystem::path spec_path;
    std::uint64_t seed = 0;
    int steps = 50;
    SamplerKind sampler = SamplerKind::Deterministic;
    std::optional<int> w_override;
    int similarity_width = kSimilarityWidth;
    bool tiling = true;
    bool similarity = true;
    double strength = 0.8;
    Codec codec;
    std::string denoiser = "gaussian"; ///< gaussian | constant | remote
    std::string endpoint;
    double prior_smoothness = GaussianTexturePrior{}.smoothness;
    double prior_amplitude = GaussianTexturePrior{}.amplitude;
    std::filesystem::path out_dir = "out";
    int rows = 1;
    int cols = 2;
    int offset_k = kDefaultScoreOffset;
};

/// Flat key=value text, one entry per line, stable key order.
std::string manifest_text(const RunConfig& config);
RunConfig parse_manifest(const std::string& text);
RunConfig load_manifest(const std::filesystem::path& path);

/// A failure attributed to one pipeline stage ("spec", "denoise", "layout", ...).
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, int exit_code, const std::string& message)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), exit_code_(exit_code) {}

    const std::string& stage() const { return stage_; }
    int exit_code() const { return exit_code_; }

private:
    std::string stage_;
    int exit_code_;
};

/// Parse and validate a spec file, applying an optional global w override.
/// Throws StageError("spec", kExitSpec, ...) with every diagnostic in the message.
ValidatedSpec load_spec(const std::filesystem::path& path, std::optional<int> w_override = {});

/// Every unordered pair (a, b) a constraint lets touch, in constraint order.
std::vector<std::pair<SideRef, SideRef>> licensed_pairs(const ConstraintSpec& spec);

/// Tiling score of side `a` of one image against side `b` of another, after rotating
/// them so the two sides meet on a shared seam.
ScoreReport score_adjacency(std::span<const PixelImage> images, const SideRef& a, const SideRef& b,
                            int offset = kDefaultScoreOffset);

struct GenerateResult {
    std::vector<PixelImage> images;
    Layout layout;
    PixelImage sheet;
    std::vector<ScoreReport> scores;
    std::vector<std::string> score_pairs;
    double mean_ts = 0.0;
    double mean_seam_ratio = 0.0;
};

/// In-memory generate: sample, decode and crop, lay out, assemble, score.
GenerateResult run_generate(const ValidatedSpec& spec, const RunConfig& config,
                            const std::filesystem::path& spec_dir = {});

/// CSV: spec,pair,axis,k,ts_conn,ts_minus,ts_plus,ts_mean
std::string score_csv(const std::string& spec_id, const GenerateResult& result);

int cmd_validate(const std::filesystem::path& spec_path, std::ostream& out, std::ostream& err);

/// Writes <id>.png per image, sheet.png, sheet.layout.txt, scores.csv and manifest.txt
/// into config.out_dir.
int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// One cmd_generate per w into out_dir/w<w>/, plus out_dir/sweep.csv (w,mean_ts,seam_ratio).
int cmd_sweep_w(const RunConfig& config, const std::vector<int>& windows, std::ostream& out,
                std::ostream& err);

/// Score two image files; prints the CSV header and one row.
int cmd_score(const std::filesystem::path& first, const std::filesystem::path& second, Axis axis,
              int offset, std::ostream& out, std::ostream& err);

} // namespace tilecraft
