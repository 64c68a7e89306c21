#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsprune/camera.hpp"
#include "gsprune/errors.hpp"
#include "gsprune/image_io.hpp"
#include "gsprune/metrics.hpp"
#include "gsprune/ply_io.hpp"
#include "gsprune/pruner.hpp"
#include "gsprune/rasterizer.hpp"
#include "gsprune/spectral_filter.hpp"
#include "gsprune/synth.hpp"

namespace {

using nlohmann::json;

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw gsprune::io_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw gsprune::io_error("failed writing '" + path + "'");
}

std::pair<int, int> parse_size(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= s.size())
        throw gsprune::config_error("size must look like 640x480, got '" + s + "'");
    try {
        const int w = std::stoi(s.substr(0, x));
        const int h = std::stoi(s.substr(x + 1));
        if (w <= 0 || h <= 0) throw gsprune::config_error("size must be positive");
        return {w, h};
    } catch (const std::logic_error&) {
        throw gsprune::config_error("size must look like 640x480, got '" + s + "'");
    }
}

std::vector<double> parse_csv_doubles(const std::string& s, std::size_t count,
                                      const std::string& what) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            vals.push_back(std::stod(tok));
        } catch (const std::logic_error&) {
            throw gsprune::config_error(what + ": cannot parse '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (vals.size() != count)
        throw gsprune::config_error(what + ": expected " + std::to_string(count) + " values");
    return vals;
}

json timings_json(const gsprune::PruneTimings& t) {
    return {{"graph_ms", t.graph_ms},
            {"filter_ms", t.filter_ms},
            {"select_ms", t.select_ms},
            {"compact_ms", t.compact_ms}};
}

json report_json(const gsprune::PruneReport& r) {
    return {{"mode", r.mode},
            {"k", r.keep_ratio},
            {"gamma", r.gamma},
            {"tau", r.tau},
            {"sigma", r.sigma},
            {"before_count", r.before_count},
            {"after_count", r.after_count},
            {"peak_count", r.peak_count},
            {"per_step_counts", r.per_step_counts},
            {"bytes_before", r.bytes_before},
            {"bytes_after", r.bytes_after},
            {"timings", timings_json(r.timings)}};
}

struct GraphFlags {
    double tau = 0.0;
    double sigma = 0.0;
    bool squared = false;
    std::uint64_t max_edges = 200'000'000ULL;
    int threads = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tau", tau,
                        "Neighborhood radius (default: 10x the minimum nearest-neighbor distance)");
        cmd->add_option("--sigma", sigma,
                        "Kernel width (default: std-dev of the edge distances)");
        cmd->add_flag("--squared", squared, "Interpret tau as a bound on the squared distance");
        cmd->add_option("--max-edges", max_edges, "Abort if the edge count would exceed this");
        cmd->add_option("--threads", threads, "Worker threads (default: hardware concurrency)");
    }

    gsprune::GraphBuildConfig to_config() const {
        gsprune::GraphBuildConfig cfg;
        cfg.tau = tau;
        cfg.sigma = sigma;
        cfg.squared_threshold = squared;
        cfg.max_edges = max_edges;
        cfg.threads = threads;
        return cfg;
    }
};

void run_inspect(const std::string& input, const std::string& report_path) {
    const gsprune::GaussianField field = gsprune::load_ply(input);
    json j;
    j["path"] = input;
    j["count"] = field.size();
    j["sh_degree"] = field.sh_degree;
    j["payload_bytes"] = gsprune::payload_bytes(field);
    if (!field.empty()) {
        Eigen::Vector3f lo = field.primitives.front().center;
        Eigen::Vector3f hi = lo;
        double op_sum = 0.0;
        float op_min = 1.0f, op_max = 0.0f;
        for (const auto& p : field.primitives) {
            lo = lo.cwiseMin(p.center);
            hi = hi.cwiseMax(p.center);
            const float op = p.opacity();
            op_sum += op;
            op_min = std::min(op_min, op);
            op_max = std::max(op_max, op);
        }
        j["bbox"] = {{"min", {lo.x(), lo.y(), lo.z()}}, {"max", {hi.x(), hi.y(), hi.z()}}};
        j["opacity"] = {{"min", op_min},
                        {"max", op_max},
                        {"mean", op_sum / static_cast<double>(field.size())}};
    }
    std::cout << j.dump(2) << "\n";
    if (!report_path.empty()) write_json(j, report_path);
}

void run_synth(const std::string& output, const gsprune::SynthConfig& cfg) {
    const gsprune::GaussianField field = gsprune::synth_field(cfg);
    gsprune::save_ply(field, output);
    std::cout << "wrote " << field.size() << " primitives to " << output << "\n";
}

void run_graph(const std::string& input, const GraphFlags& flags, const std::string& out,
               const std::string& response_path, const std::string& selection_path,
               const std::string& kind_name, double k, double gamma) {
    const gsprune::GaussianField field = gsprune::load_ply(input);
    const gsprune::PrimitiveGraph graph = gsprune::build_graph(field, flags.to_config());
    std::cout << "graph: " << graph.n << " nodes, " << graph.edges.size()
              << " edges, tau " << graph.tau << ", sigma " << graph.sigma << ", spectral norm "
              << graph.spectral_norm << "\n";

    if (!out.empty()) {
        gsprune::save_graph_dump(graph, out);
        write_json({{"tau", graph.tau},
                    {"sigma", graph.sigma},
                    {"spectral_norm", graph.spectral_norm},
                    {"edge_count", graph.edges.size()}},
                   out + ".json");
    }

    const bool need_response = !response_path.empty() || !selection_path.empty();
    if (!need_response) return;

    gsprune::FilterKind kind;
    if (kind_name == "high") {
        kind = gsprune::FilterKind::high_pass;
    } else if (kind_name == "low") {
        kind = gsprune::FilterKind::low_pass;
    } else {
        throw gsprune::config_error("--kind must be 'high' or 'low', got '" + kind_name + "'");
    }
    const Eigen::VectorXd response = gsprune::response_magnitudes(
        graph, gsprune::centers_signal(field), kind, flags.threads);

    if (!response_path.empty()) {
        gsprune::save_response_dump(response, response_path);
        const auto s = gsprune::summarize_response(response);
        write_json({{"n", s.n},
                    {"kind", gsprune::filter_kind_name(kind)},
                    {"min", s.min},
                    {"max", s.max},
                    {"mean", s.mean}},
                   response_path + ".json");
    }
    if (!selection_path.empty()) {
        const auto sel = gsprune::band_limited_select(response, k, gamma);
        gsprune::save_selection_dump(sel.kept, selection_path);
        write_json({{"k", k},
                    {"gamma", gamma},
                    {"counts",
                     {{"kept", sel.kept.size()},
                      {"high_band", sel.high_band.size()},
                      {"low_band", sel.low_band.size()}}}},
                   selection_path + ".json");
    }
}

void run_prune(const std::vector<std::string>& paths, const std::string& mode, double k,
               double gamma, double per_step_keep, int interval, std::uint64_t cap,
               const GraphFlags& flags, const std::string& report_path) {
    if (paths.size() < 2)
        throw gsprune::config_error("prune needs at least an input and an output path");
    const std::string output = paths.back();

    gsprune::PruneConfig cfg;
    cfg.gamma = gamma;
    cfg.interval = interval;
    cfg.primitive_cap = cap;
    cfg.graph = flags.to_config();

    gsprune::PruneResult result;
    if (mode == "single") {
        if (paths.size() != 2)
            throw gsprune::config_error("single mode takes exactly one input and one output");
        cfg.keep_ratio = k;
        result = gsprune::prune_once(gsprune::load_ply(paths.front()), cfg);
    } else if (mode == "continuous") {
        cfg.keep_ratio = per_step_keep;
        std::vector<gsprune::GaussianField> snapshots;
        snapshots.reserve(paths.size() - 1);
        for (std::size_t i = 0; i + 1 < paths.size(); ++i)
            snapshots.push_back(gsprune::load_ply(paths[i]));
        result = gsprune::prune_schedule(snapshots, cfg);
    } else {
        throw gsprune::config_error("--mode must be 'single' or 'continuous', got '" + mode + "'");
    }

    gsprune::save_ply(result.field, output);
    std::cout << "kept " << result.report.after_count << " of " << result.report.before_count
              << " primitives -> " << output << "\n";
    if (!report_path.empty()) write_json(report_json(result.report), report_path);
}

void run_render(const std::string& input, const std::string& output,
                const std::string& camera_path, const std::string& size,
                const std::string& background, int threads, const std::string& report_path) {
    gsprune::CameraModel cam = gsprune::load_camera(camera_path);
    if (!size.empty()) {
        const auto [w, h] = parse_size(size);
        cam.width = w;
        cam.height = h;
    }
    gsprune::RenderConfig cfg;
    cfg.threads = threads;
    if (!background.empty()) {
        const auto bg = parse_csv_doubles(background, 3, "--background");
        cfg.background = Eigen::Vector3f(static_cast<float>(bg[0]), static_cast<float>(bg[1]),
                                         static_cast<float>(bg[2]));
    }
    const gsprune::GaussianField field = gsprune::load_ply(input);
    const auto t0 = std::chrono::steady_clock::now();
    const gsprune::RenderResult res = gsprune::render(field, cam, cfg);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    gsprune::save_image(res.image, output);
    std::cout << "rendered " << cam.width << "x" << cam.height << " (" << res.stats.fragments
              << " fragments) -> " << output << "\n";
    if (!report_path.empty())
        write_json({{"width", cam.width},
                    {"height", cam.height},
                    {"fragments", res.stats.fragments},
                    {"culled", res.stats.culled},
                    {"degenerate", res.stats.degenerate},
                    {"offscreen", res.stats.offscreen},
                    {"render_ms", ms}},
                   report_path);
}

void run_eval(const std::string& path_a, const std::string& path_b,
              const std::string& report_path) {
    const gsprune::ImageBuffer a = gsprune::load_image(path_a);
    const gsprune::ImageBuffer b = gsprune::load_image(path_b);
    const gsprune::PsnrResult p = gsprune::psnr(a, b);
    json j;
    j["mse"] = p.mse;
    if (p.infinite) {
        j["psnr"] = "inf";
    } else {
        j["psnr"] = p.db;
    }
    if (a.width >= 11 && a.height >= 11) {
        j["ssim"] = gsprune::ssim(a, b);
    } else {
        j["ssim"] = nullptr;  // images too small for the 11x11 window
    }
    std::cout << j.dump(2) << "\n";
    if (!report_path.empty()) write_json(j, report_path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral pruning toolkit for Gaussian splat fields"};
    app.require_subcommand(1);

    // --- inspect ---
    auto* inspect = app.add_subcommand("inspect", "Summarize a splat file");
    inspect->set_config("--config");
    std::string in_input, in_report;
    inspect->add_option("input", in_input, "Input .ply")->required();
    inspect->add_option("--report", in_report, "Also write the summary JSON here");
    inspect->callback([&] { run_inspect(in_input, in_report); });

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "Generate the two-population test scene");
    synth->set_config("--config");
    std::string sy_output, sy_center;
    gsprune::SynthConfig sy_cfg;
    synth->add_option("output", sy_output, "Output .ply")->required();
    synth->add_option("--plane", sy_cfg.plane_count, "Plane primitive count");
    synth->add_option("--cluster", sy_cfg.cluster_count, "Filament primitive count");
    synth->add_option("--extent", sy_cfg.plane_extent, "Plane half extent");
    synth->add_option("--plane-z", sy_cfg.plane_z, "Plane height");
    synth->add_option("--jitter", sy_cfg.plane_jitter, "Plane z jitter (fraction of spacing)");
    synth->add_option("--cluster-center", sy_center, "Filament sphere center as x,y,z");
    synth->add_option("--cluster-radius", sy_cfg.cluster_radius, "Filament sphere radius");
    synth->add_option("--spacing-ratio", sy_cfg.cluster_spacing_ratio,
                      "Filament spacing / plane spacing");
    synth->add_option("--seed", sy_cfg.seed, "Deterministic seed");
    synth->callback([&] {
        if (!sy_center.empty()) {
            const auto c = parse_csv_doubles(sy_center, 3, "--cluster-center");
            sy_cfg.cluster_center = Eigen::Vector3d(c[0], c[1], c[2]);
        }
        run_synth(sy_output, sy_cfg);
    });

    // --- graph ---
    auto* graph = app.add_subcommand("graph", "Build the affinity graph; dump graph/response/selection");
    graph->set_config("--config");
    std::string gr_input, gr_out, gr_response, gr_selection, gr_kind = "high";
    double gr_k = 0.10, gr_gamma = 0.5;
    GraphFlags gr_flags;
    graph->add_option("input", gr_input, "Input .ply")->required();
    gr_flags.attach(graph);
    graph->add_option("--out", gr_out, "Write the binary graph dump here (+ .json sidecar)");
    graph->add_option("--response", gr_response,
                      "Write the response dump here (+ .json sidecar)");
    graph->add_option("--kind", gr_kind, "Filter for --response/--selection: high or low");
    graph->add_option("--selection", gr_selection,
                      "Write the kept-index dump here (+ .json sidecar)");
    graph->add_option("--k", gr_k, "Keep ratio for --selection");
    graph->add_option("--gamma", gr_gamma, "High-band share for --selection");
    graph->callback([&] {
        run_graph(gr_input, gr_flags, gr_out, gr_response, gr_selection, gr_kind, gr_k, gr_gamma);
    });

    // --- prune ---
    auto* prune = app.add_subcommand("prune", "Prune a splat field (or a snapshot sequence)");
    prune->set_config("--config");
    std::vector<std::string> pr_paths;
    std::string pr_mode = "single", pr_report;
    double pr_k = 0.10, pr_gamma = 0.5, pr_per_step = 0.5;
    int pr_interval = 1;
    std::uint64_t pr_cap = 0;
    GraphFlags pr_flags;
    prune->add_option("paths", pr_paths, "Input .ply (single) or snapshots... (continuous), then output .ply")
        ->required()
        ->expected(-2);
    prune->add_option("--mode", pr_mode, "single or continuous");
    prune->add_option("--k", pr_k, "Keep ratio (single mode)");
    prune->add_option("--gamma", pr_gamma, "High-band share of the kept budget");
    prune->add_option("--per-step-keep", pr_per_step, "Keep ratio per prune step (continuous)");
    prune->add_option("--interval", pr_interval, "Prune every this many steps (continuous)");
    prune->add_option("--cap", pr_cap, "Hard cap on the kept primitive count (0 = none)");
    pr_flags.attach(prune);
    prune->add_option("--report", pr_report, "Write the prune report JSON here");
    prune->callback([&] {
        run_prune(pr_paths, pr_mode, pr_k, pr_gamma, pr_per_step, pr_interval, pr_cap, pr_flags,
                  pr_report);
    });

    // --- render ---
    auto* render = app.add_subcommand("render", "Rasterize a splat file to an image");
    render->set_config("--config");
    std::string re_input, re_output, re_camera, re_size, re_background, re_report;
    int re_threads = 0;
    render->add_option("input", re_input, "Input .ply")->required();
    render->add_option("output", re_output, "Output image (.png or raw float dump)")->required();
    render->add_option("--camera", re_camera, "Camera JSON")->required();
    render->add_option("--size", re_size, "Override image size, e.g. 256x256");
    render->add_option("--background", re_background, "Background color as r,g,b in [0,1]");
    render->add_option("--threads", re_threads, "Worker threads");
    render->add_option("--report", re_report, "Write render stats JSON here");
    render->callback([&] {
        run_render(re_input, re_output, re_camera, re_size, re_background, re_threads, re_report);
    });

    // --- eval ---
    auto* eval = app.add_subcommand("eval", "Compare two images (PSNR / SSIM)");
    eval->set_config("--config");
    std::string ev_a, ev_b, ev_report;
    eval->add_option("image_a", ev_a, "First image (.png or raw dump)")->required();
    eval->add_option("image_b", ev_b, "Second image")->required();
    eval->add_option("--report", ev_report, "Also write the metrics JSON here");
    eval->callback([&] { run_eval(ev_a, ev_b, ev_report); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : gsprune::exit_config;
    } catch (const gsprune::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gsprune::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gsprune::exit_failure;
    }
    return 0;
}
