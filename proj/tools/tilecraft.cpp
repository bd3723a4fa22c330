// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

// tilecraft: validate / generate / sweep-w / score

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tilecraft/pipeline.hpp"

using namespace tilecraft;

namespace {

// Flags shared by generate and sweep-w.
struct GenerateFlags {
    std::string manifest;
    std::string spec;
    std::uint64_t seed = 0;
    int steps = 50;
    int w = -1;
    std::string sampler = "ddim";
    double strength = 0.8;
    int sim_width = kSimilarityWidth;
    bool no_tiling = false;
    bool no_similarity = false;
    std::string codec = "identity";
    std::string denoiser = "gaussian";
    std::string endpoint;
    double smoothness = GaussianTexturePrior{}.smoothness;
    double amplitude = GaussianTexturePrior{}.amplitude;
    std::string out = "out";
    int rows = 1;
    int cols = 2;
    int offset_k = kDefaultScoreOffset;
};

void add_generate_flags(CLI::App* app, GenerateFlags& f) {
    app->add_option("--manifest", f.manifest, "Re-run from a manifest.txt; other flags override it");
    app->add_option("--spec", f.spec, "Constraint spec (.tilespec)");
    app->add_option("--seed", f.seed, "Master seed");
    app->add_option("--steps", f.steps, "Denoising steps T")->check(CLI::PositiveNumber);
    app->add_option("--w", f.w, "Override every constraint's context window");
    app->add_option("--sampler", f.sampler, "ddim | ancestral");
    app->add_option("--strength", f.strength, "img2img strength")->check(CLI::Range(0.0, 1.0));
    app->add_option("--sim-width", f.sim_width, "Similarity band width");
    app->add_flag("--no-tiling", f.no_tiling, "Disable the tiling constraint");
    app->add_flag("--no-similarity", f.no_similarity, "Disable the similarity constraint");
    app->add_option("--codec", f.codec, "identity | upsampleN");
    app->add_option("--denoiser", f.denoiser, "gaussian | constant | remote");
    app->add_option("--endpoint", f.endpoint, "Remote denoiser URL (default $TILECRAFT_ENDPOINT)");
    app->add_option("--prior-smoothness", f.smoothness, "Gaussian prior spectral decay");
    app->add_option("--prior-amplitude", f.amplitude, "Gaussian prior amplitude");
    app->add_option("--out", f.out, "Output directory");
    app->add_option("--rows", f.rows, "Sheet rows")->check(CLI::PositiveNumber);
    app->add_option("--cols", f.cols, "Sheet columns")->check(CLI::PositiveNumber);
    app->add_option("--offset-k", f.offset_k, "Tiling score offset")->check(CLI::PositiveNumber);
}

// Builds the run config: manifest first, then any flag given on the command line.
RunConfig to_config(CLI::App* app, const GenerateFlags& f) {
    RunConfig c;
    if (!f.manifest.empty()) {
        c = load_manifest(f.manifest);
    }
    auto given = [&](const char* name) { return app->count(name) > 0; };
    if (f.manifest.empty() || given("--spec")) c.spec_path = f.spec;
    if (f.manifest.empty() || given("--seed")) c.seed = f.seed;
    if (f.manifest.empty() || given("--steps")) c.steps = f.steps;
    if (given("--w")) c.w_override = f.w;
    if (f.manifest.empty() || given("--sampler")) {
        auto kind = sampler_kind_from_string(f.sampler);
        if (!kind) throw StageError("config", kExitSpec, "unknown sampler '" + f.sampler + "'");
        c.sampler = *kind;
    }
    if (f.manifest.empty() || given("--strength")) c.strength = f.strength;
    if (f.manifest.empty() || given("--sim-width")) c.similarity_width = f.sim_width;
    if (given("--no-tiling")) c.tiling = false;
    if (given("--no-similarity")) c.similarity = false;
    if (f.manifest.empty() || given("--codec")) {
        auto codec = codec_from_string(f.codec);
        if (!codec) throw StageError("config", kExitSpec, "unknown codec '" + f.codec + "'");
        c.codec = *codec;
    }
    if (f.manifest.empty() || given("--denoiser")) c.denoiser = f.denoiser;
    if (given("--endpoint")) {
        c.endpoint = f.endpoint;
    } else if (c.endpoint.empty()) {
        if (const char* env = std::getenv("TILECRAFT_ENDPOINT")) c.endpoint = env;
    }
    if (f.manifest.empty() || given("--prior-smoothness")) c.prior_smoothness = f.smoothness;
    if (f.manifest.empty() || given("--prior-amplitude")) c.prior_amplitude = f.amplitude;
    if (f.manifest.empty() || given("--out")) c.out_dir = f.out;
    if (f.manifest.empty() || given("--rows")) c.rows = f.rows;
    if (f.manifest.empty() || given("--cols")) c.cols = f.cols;
    if (f.manifest.empty() || given("--offset-k")) c.offset_k = f.offset_k;
    if (c.spec_path.empty()) throw StageError("config", kExitSpec, "--spec is required");
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tilecraft: constrained diffusion for tileable image sets"};
    app.require_subcommand(1);

    std::string validate_spec;
    auto* validate = app.add_subcommand("validate", "Parse and validate a spec");
    validate->add_option("--spec,spec", validate_spec, "Constraint spec")->required();

    GenerateFlags gen;
    auto* generate = app.add_subcommand("generate", "Sample, lay out and score an image set");
    add_generate_flags(generate, gen);

    GenerateFlags sweep;
    std::vector<int> w_list{0, 8, 16, 32};
    auto* sweep_w = app.add_subcommand("sweep-w", "Generate once per context window");
    add_generate_flags(sweep_w, sweep);
    sweep_w->add_option("--w-list", w_list, "Context windows to sweep")->delimiter(',');

    std::string first, second, axis_name = "x";
    int score_k = kDefaultScoreOffset;
    auto* score = app.add_subcommand("score", "Tiling score of two images");
    score->add_option("first", first, "Image placed left of / above the seam")->required();
    score->add_option("second", second, "Image placed right of / below the seam")->required();
    score->add_option("--axis", axis_name, "x | y");
    score->add_option("--offset-k", score_k, "Score offset")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitSpec;
    }

    try {
        if (*validate) {
            return cmd_validate(validate_spec, std::cout, std::cerr);
        }
        if (*generate) {
            return cmd_generate(to_config(generate, gen), std::cout, std::cerr);
        }
        if (*sweep_w) {
            return cmd_sweep_w(to_config(sweep_w, sweep), w_list, std::cout, std::cerr);
        }
        if (*score) {
            const auto axis = axis_from_string(axis_name);
            if (!axis) {
                std::cerr << "error: unknown axis '" << axis_name << "'\n";
                return kExitSpec;
            }
            return cmd_score(first, second, *axis, score_k, std::cout, std::cerr);
        }
    } catch (const StageError& e) {
        std::cerr << "error in stage '" << e.stage() << "': " << e.what() << "\n";
        return e.exit_code();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSpec;
    }
    return kExitOk;
}
