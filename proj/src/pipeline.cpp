// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/pipeline.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "tilecraft/tilespec.hpp"
#include "tilecraft/wire.hpp"

namespace tilecraft {

namespace {

std::string format_double(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

// Shortest text that reads back to the same double.
std::string exact_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StageError("spec", kExitSpec, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    out << text;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
        std::size_t used = 0;
        try {
            value = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != text.size() || text.empty()) {
            throw Error(ErrorCode::InvalidArgument, "manifest key '" + key + "' is not a number");
        }
    } else {
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw Error(ErrorCode::InvalidArgument, "manifest key '" + key + "' is not an integer");
        }
    }
    return value;
}

std::unique_ptr<Denoiser> make_denoiser(const RunConfig& config) {
    if (config.denoiser == "gaussian") {
        GaussianTexturePrior prior;
        prior.smoothness = config.prior_smoothness;
        prior.amplitude = config.prior_amplitude;
        return std::make_unique<GaussianDenoiser>(prior);
    }
    if (config.denoiser == "constant") {
        return std::make_unique<ConstantPriorDenoiser>();
    }
    if (config.denoiser == "remote") {
        if (config.endpoint.empty()) {
            throw StageError("config", kExitSpec, "remote denoiser needs --endpoint or TILECRAFT_ENDPOINT");
        }
        return std::make_unique<wire::RemoteDenoiser>(config.endpoint);
    }
    throw StageError("config", kExitSpec, "unknown denoiser '" + config.denoiser + "'");
}

void check_config(const RunConfig& config) {
    auto bad = [](const std::string& what) { throw StageError("config", kExitSpec, what); };
    if (config.steps < 1) bad("--steps must be >= 1");
    if (config.rows < 1 || config.cols < 1) bad("--rows and --cols must be >= 1");
    if (config.offset_k < 1) bad("--offset-k must be >= 1");
    if (config.similarity_width < 0) bad("similarity width must be >= 0");
    if (!(config.strength >= 0.0 && config.strength <= 1.0)) bad("strength must lie in [0, 1]");
    if (config.codec.scale() < 1) bad("codec scale must be >= 1");
}

} // namespace

std::string manifest_text(const RunConfig& c) {
    std::ostringstream out;
    out << "spec=" << c.spec_path.generic_string() << "\n";
    out << "seed=" << c.seed << "\n";
    out << "steps=" << c.steps << "\n";
    out << "sampler=" << to_string(c.sampler) << "\n";
    out << "w=" << (c.w_override ? std::to_string(*c.w_override) : std::string("spec")) << "\n";
    out << "similarity_width=" << c.similarity_width << "\n";
    out << "tiling=" << (c.tiling ? 1 : 0) << "\n";
    out << "similarity=" << (c.similarity ? 1 : 0) << "\n";
    out << "strength=" << exact_double(c.strength) << "\n";
    out << "codec=" << codec_name(c.codec) << "\n";
    out << "denoiser=" << c.denoiser << "\n";
    out << "endpoint=" << c.endpoint << "\n";
    out << "prior_smoothness=" << exact_double(c.prior_smoothness) << "\n";
    out << "prior_amplitude=" << exact_double(c.prior_amplitude) << "\n";
    out << "out=" << c.out_dir.generic_string() << "\n";
    out << "rows=" << c.rows << "\n";
    out << "cols=" << c.cols << "\n";
    out << "offset_k=" << c.offset_k << "\n";
    return out.str();
}

RunConfig parse_manifest(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "manifest line without '=': " + line);
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    RunConfig c;
    for (const auto& [key, value] : kv) {
        if (key == "spec") c.spec_path = value;
        else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "steps") c.steps = parse_number<int>(key, value);
        else if (key == "sampler") {
            auto kind = sampler_kind_from_string(value);
            if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown sampler '" + value + "'");
            c.sampler = *kind;
        } else if (key == "w") {
            if (value != "spec") c.w_override = parse_number<int>(key, value);
        } else if (key == "similarity_width") c.similarity_width = parse_number<int>(key, value);
        else if (key == "tiling") c.tiling = parse_number<int>(key, value) != 0;
        else if (key == "similarity") c.similarity = parse_number<int>(key, value) != 0;
        else if (key == "strength") c.strength = parse_number<double>(key, value);
        else if (key == "codec") {
            auto codec = codec_from_string(value);
            if (!codec) throw Error(ErrorCode::InvalidArgument, "unknown codec '" + value + "'");
            c.codec = *codec;
        } else if (key == "denoiser") c.denoiser = value;
        else if (key == "endpoint") c.endpoint = value;
        else if (key == "prior_smoothness") c.prior_smoothness = parse_number<double>(key, value);
        else if (key == "prior_amplitude") c.prior_amplitude = parse_number<double>(key, value);
        else if (key == "out") c.out_dir = value;
        else if (key == "rows") c.rows = parse_number<int>(key, value);
        else if (key == "cols") c.cols = parse_number<int>(key, value);
        else if (key == "offset_k") c.offset_k = parse_number<int>(key, value);
        else throw Error(ErrorCode::InvalidArgument, "unknown manifest key '" + key + "'");
    }
    return c;
}

RunConfig load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open manifest " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str());
}

ValidatedSpec load_spec(const std::filesystem::path& path, std::optional<int> w_override) {
    const std::string text = read_text(path);
    const std::string name = path.generic_string();
    auto parsed = tilespec::parse(text);
    if (!parsed.ok()) {
        std::string message;
        for (const auto& e : parsed.errors) {
            message += "\n  " + tilespec::format_error(name, e);
        }
        throw StageError("spec", kExitSpec, std::to_string(parsed.errors.size()) + " error(s)" + message);
    }
    ConstraintSpec spec = std::move(*parsed.spec);
    if (w_override) {
        for (auto& c : spec.constraints) {
            c.context_window = *w_override;
            c.window_span.reset();
        }
    }
    LatentDims dims;
    try {
        dims = tilespec::latent_dims_from_settings(spec);
    } catch (const Error& e) {
        throw StageError("spec", kExitSpec, e.what());
    }
    auto result = validate(spec, dims);
    if (!result.ok()) {
        std::string message;
        for (const auto& v : result.violations) {
            message += "\n  " + name;
            if (v.span) {
                message += ":" + std::to_string(v.span->line) + ":" + std::to_string(v.span->column);
            }
            message += ": " + std::string(to_string(v.kind)) + ": " + v.message;
        }
        throw StageError("spec", kExitSpec,
                         std::to_string(result.violations.size()) + " violation(s)" + message);
    }
    return std::move(*result.value);
}

std::vector<std::pair<SideRef, SideRef>> licensed_pairs(const ConstraintSpec& spec) {
    std::vector<std::pair<SideRef, SideRef>> out;
    std::set<std::pair<SideRef, SideRef>> seen;
    for (const auto& c : spec.constraints) {
        for (const auto& a : c.set_a) {
            for (const auto& b : c.set_b) {
                const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
                if (seen.insert(key).second) {
                    out.emplace_back(a, b);
                }
            }
        }
    }
    return out;
}

ScoreReport score_adjacency(std::span<const PixelImage> images, const SideRef& a, const SideRef& b,
                            int offset) {
    if (a.image >= images.size() || b.image >= images.size()) {
        throw Error(ErrorCode::DimMismatch, "adjacency refers to a missing image");
    }
    const PixelImage& ia = images[a.image];
    const PixelImage& ib = images[b.image];
    if (a.side == Side::Right && b.side == Side::Left) return tiling_score(ia, ib, Axis::X, offset);
    if (a.side == Side::Left && b.side == Side::Right) return tiling_score(ib, ia, Axis::X, offset);
    if (a.side == Side::Bottom && b.side == Side::Top) return tiling_score(ia, ib, Axis::Y, offset);
    if (a.side == Side::Top && b.side == Side::Bottom) return tiling_score(ib, ia, Axis::Y, offset);
    // Rotate so `a` faces right and `b` faces left, then score across X.
    const PixelImage ra =
        rotate_clockwise(ia, clockwise_index(Side::Right) - clockwise_index(a.side));
    const PixelImage rb =
        rotate_clockwise(ib, clockwise_index(Side::Left) - clockwise_index(b.side));
    return tiling_score(ra, rb, Axis::X, offset);
}

GenerateResult run_generate(const ValidatedSpec& spec, const RunConfig& config,
                            const std::filesystem::path& spec_dir) {
    check_config(config);
    std::unique_ptr<Denoiser> denoiser = make_denoiser(config);

    SamplerParams params;
    params.steps = config.steps;
    params.sampler = config.sampler;
    params.seed = config.seed;
    params.strength = config.strength;
    params.constraints.tiling = config.tiling;
    params.constraints.similarity = config.similarity;
    params.constraints.similarity_width = config.similarity_width;

    std::optional<std::vector<LatentGrid>> init;
    const auto& images = spec.spec.images;
    const auto with_init = std::count_if(images.begin(), images.end(),
                                         [](const ImageSlot& s) { return s.init_path.has_value(); });
    if (with_init > 0) {
        if (static_cast<std::size_t>(with_init) != images.size()) {
            throw StageError("spec", kExitSpec, "img2img needs an init image for every image slot");
        }
        init.emplace();
        try {
            for (const auto& slot : images) {
                std::filesystem::path p = *slot.init_path;
                if (p.is_relative() && !spec_dir.empty()) {
                    p = spec_dir / p;
                }
                LatentGrid z0 = encode(read_image(p), spec.dims.depth, config.codec);
                if (z0.height != spec.dims.height || z0.width != spec.dims.width) {
                    throw Error(ErrorCode::DimMismatch, "init image " + p.string() +
                                                            " does not match the latent size");
                }
                init->push_back(std::move(z0));
            }
        } catch (const Error& e) {
            throw StageError("init", kExitRuntime, e.what());
        }
    }

    std::vector<LatentCanvas> canvases;
    try {
        canvases = sample(spec, *denoiser, params, init);
    } catch (const DenoiserFailure& e) {
        throw StageError("denoise", kExitRuntime, e.what());
    } catch (const Error& e) {
        throw StageError(e.code() == ErrorCode::ConstraintFailure ? "constrain" : "sample",
                         kExitRuntime, e.what());
    }

    GenerateResult result;
    for (const auto& canvas : canvases) {
        result.images.push_back(decode_and_crop(canvas, config.codec));
    }
    try {
        result.layout = solve_layout(spec, config.rows, config.cols, config.seed);
        result.sheet = assemble(result.images, result.layout);
    } catch (const Error& e) {
        throw StageError("layout", kExitRuntime, e.what());
    }

    try {
        double total = 0.0;
        for (const auto& [a, b] : licensed_pairs(spec.spec)) {
            result.scores.push_back(score_adjacency(result.images, a, b, config.offset_k));
            result.score_pairs.push_back(format_side_ref(spec.spec, a) + "|" +
                                         format_side_ref(spec.spec, b));
            total += result.scores.back().mean;
        }
        result.mean_ts = result.scores.empty() ? 0.0 : total / static_cast<double>(result.scores.size());

        const PixelImage& tile = result.images.front();
        const auto stats = seam_profile(result.sheet, layout_seams(result.layout, tile.height, tile.width));
        double ratio = 0.0;
        for (const auto& s : stats) {
            ratio += s.ratio;
        }
        result.mean_seam_ratio = stats.empty() ? 0.0 : ratio / static_cast<double>(stats.size());
    } catch (const Error& e) {
        throw StageError("score", kExitRuntime, e.what());
    }
    return result;
}

std::string score_csv(const std::string& spec_id, const GenerateResult& result) {
    std::ostringstream out;
    out << "spec,pair,axis,k,ts_conn,ts_minus,ts_plus,ts_mean\n";
    for (std::size_t i = 0; i < result.scores.size(); ++i) {
        const ScoreReport& r = result.scores[i];
        out << spec_id << "," << result.score_pairs[i] << "," << to_string(r.axis) << "," << r.offset
            << "," << format_double(r.at_connection, "%.6f") << ","
            << format_double(r.minus_offset, "%.6f") << "," << format_double(r.plus_offset, "%.6f")
            << "," << format_double(r.mean, "%.6f") << "\n";
    }
    return out.str();
}

int cmd_validate(const std::filesystem::path& spec_path, std::ostream& out, std::ostream& err) {
    try {
        const ValidatedSpec spec = load_spec(spec_path);
        out << "spec " << spec_path.generic_string() << ": valid, " << spec.spec.images.size()
            << " image(s), latent " << spec.dims.height << "x" << spec.dims.width << "x"
            << spec.dims.depth << "\n";
        for (std::size_t i = 0; i < spec.spec.constraints.size(); ++i) {
            const auto& c = spec.spec.constraints[i];
            out << "  constraint " << c.id << ": " << to_string(spec.kinds[i]) << " w=" << c.context_window
                << " |A|=" << c.set_a.size() << " |B|=" << c.set_b.size() << "\n";
        }
        for (std::size_t i = 0; i < spec.spec.images.size(); ++i) {
            const Pads& p = spec.padding.pads[i];
            out << "  pads " << spec.spec.images[i].id << ": L=" << p.left << " R=" << p.right
                << " T=" << p.top << " B=" << p.bottom << "\n";
        }
        return kExitOk;
    } catch (const StageError& e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    }
}

namespace {

GenerateResult generate_to_disk(const RunConfig& config, std::ostream& out) {
    const ValidatedSpec spec = load_spec(config.spec_path, config.w_override);
    GenerateResult result = run_generate(spec, config, config.spec_path.parent_path());

    try {
        std::filesystem::create_directories(config.out_dir);
        for (std::size_t i = 0; i < result.images.size(); ++i) {
            write_image(config.out_dir / (spec.spec.images[i].id + ".png"), result.images[i]);
        }
        write_image(config.out_dir / "sheet.png", result.sheet);
        write_text(config.out_dir / "sheet.layout.txt", layout_text(spec.spec, result.layout));
        write_text(config.out_dir / "scores.csv",
                   score_csv(config.spec_path.stem().string(), result));
        write_text(config.out_dir / "manifest.txt", manifest_text(config));
    } catch (const std::exception& e) {
        throw StageError("write", kExitRuntime, e.what());
    }
    out << "wrote " << result.images.size() << " image(s), sheet " << result.layout.rows << "x"
        << result.layout.cols << ", mean TS " << format_double(result.mean_ts, "%.6f")
        << ", seam ratio " << format_double(result.mean_seam_ratio, "%.4f") << " to "
        << config.out_dir.generic_string() << "\n";
    return result;
}

} // namespace

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        generate_to_disk(config, out);
        return kExitOk;
    } catch (const StageError& e) {
        err << "error in stage '" << e.stage() << "': " << e.what() << "\n";
        return e.exit_code();
    }
}

int cmd_sweep_w(const RunConfig& config, const std::vector<int>& windows, std::ostream& out,
                std::ostream& err) {
    if (windows.empty()) {
        err << "error: the sweep needs at least one w\n";
        return kExitSpec;
    }
    std::ostringstream summary;
    summary << "w,mean_ts,seam_ratio\n";
    try {
        for (int w : windows) {
            RunConfig run = config;
            run.w_override = w;
            run.out_dir = config.out_dir / ("w" + std::to_string(w));
            const GenerateResult r = generate_to_disk(run, out);
            summary << w << "," << format_double(r.mean_ts, "%.6f") << ","
                    << format_double(r.mean_seam_ratio, "%.6f") << "\n";
        }
        write_text(config.out_dir / "sweep.csv", summary.str());
    } catch (const StageError& e) {
        err << "error in stage '" << e.stage() << "': " << e.what() << "\n";
        return e.exit_code();
    } catch (const Error& e) {
        err << "error in stage 'write': " << e.what() << "\n";
        return kExitRuntime;
    }
    out << summary.str();
    return kExitOk;
}

int cmd_score(const std::filesystem::path& first, const std::filesystem::path& second, Axis axis,
              int offset, std::ostream& out, std::ostream& err) {
    try {
        const PixelImage a = read_image(first);
        const PixelImage b = read_image(second);
        const ScoreReport r = tiling_score(a, b, axis, offset);
        out << "spec,pair,axis,k,ts_conn,ts_minus,ts_plus,ts_mean\n";
        out << "-," << first.filename().string() << "|" << second.filename().string() << ","
            << to_string(axis) << "," << offset << "," << format_double(r.at_connection, "%.6f")
            << "," << format_double(r.minus_offset, "%.6f") << ","
            << format_double(r.plus_offset, "%.6f") << "," << format_double(r.mean, "%.6f") << "\n";
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::Io || e.code() == ErrorCode::UnsupportedFormat ||
                       e.code() == ErrorCode::CorruptFile
                   ? kExitRuntime
                   : kExitSpec;
    }
}

} // namespace tilecraft
