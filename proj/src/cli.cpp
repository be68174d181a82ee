#include "vtrack/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "vtrack/eval.hpp"
#include "vtrack/io.hpp"
#include "vtrack/preprocess.hpp"
#include "vtrack/synthgen.hpp"
#include "vtrack/tracker.hpp"

namespace fs = std::filesystem;

namespace vtrack::cli {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
}

int to_int(const std::string& v) {
    std::size_t used = 0;
    const int i = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument(v);
}

std::vector<double> to_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item)));
    if (out.empty()) throw std::invalid_argument(v);
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, std::pair<const char*, Setter>>& setters() {
    static const std::map<std::string, std::pair<const char*, Setter>> table = {
        {"sigma", {"number", [](RunConfig& c, const std::string& v) { c.tracker.sigma = to_double(v); }}},
        {"n", {"integer", [](RunConfig& c, const std::string& v) { c.tracker.n_nearest = to_int(v); }}},
        {"rho", {"number", [](RunConfig& c, const std::string& v) { c.tracker.rho = to_double(v); }}},
        {"stride", {"integer", [](RunConfig& c, const std::string& v) { c.stride = to_int(v); }}},
        {"scales", {"comma-separated numbers", [](RunConfig& c, const std::string& v) { c.tracker.scales = to_list(v); }}},
        {"threshold", {"number or 'auto'", [](RunConfig& c, const std::string& v) {
             if (v == "auto") c.tracker.threshold.reset();
             else c.tracker.threshold = to_double(v);
         }}},
        {"min_threshold", {"number", [](RunConfig& c, const std::string& v) { c.tracker.min_threshold = to_double(v); }}},
        {"max_gap", {"number", [](RunConfig& c, const std::string& v) { c.tracker.max_gap = to_double(v); }}},
        {"max_paths", {"integer", [](RunConfig& c, const std::string& v) { c.tracker.max_paths = to_int(v); }}},
        {"snap_radius", {"number", [](RunConfig& c, const std::string& v) { c.tracker.snap_radius = to_double(v); }}},
        {"resample_spacing", {"number", [](RunConfig& c, const std::string& v) { c.tracker.resample_spacing = to_double(v); }}},
        {"max_match_cost", {"number", [](RunConfig& c, const std::string& v) { c.tracker.max_match_cost = to_double(v); }}},
        {"fusion", {"boolean", [](RunConfig& c, const std::string& v) { c.tracker.fusion = to_bool(v); }}},
        {"registration.levels", {"integer", [](RunConfig& c, const std::string& v) { c.tracker.registration.levels = to_int(v); }}},
        {"registration.block_size", {"integer", [](RunConfig& c, const std::string& v) { c.tracker.registration.block_size = to_int(v); }}},
        {"registration.search_radius", {"integer", [](RunConfig& c, const std::string& v) { c.tracker.registration.search_radius = to_int(v); }}},
        {"registration.smoothing_std", {"number", [](RunConfig& c, const std::string& v) { c.tracker.registration.smoothing_std = to_double(v); }}},
        {"registration.max_displacement", {"number", [](RunConfig& c, const std::string& v) { c.tracker.registration.max_displacement = to_double(v); }}},
        {"registration.min_ncc", {"number", [](RunConfig& c, const std::string& v) { c.tracker.registration.min_ncc = to_double(v); }}},
        {"daisy.radius", {"number", [](RunConfig& c, const std::string& v) { c.tracker.daisy.radius = to_double(v); }}},
        {"daisy.rings", {"integer", [](RunConfig& c, const std::string& v) { c.tracker.daisy.rings = to_int(v); }}},
        {"daisy.directions", {"integer", [](RunConfig& c, const std::string& v) { c.tracker.daisy.directions = to_int(v); }}},
        {"daisy.bins", {"integer", [](RunConfig& c, const std::string& v) { c.tracker.daisy.bins = to_int(v); }}},
        {"connection.w_skeleton", {"number", [](RunConfig& c, const std::string& v) { c.tracker.connection.w_skeleton = to_double(v); }}},
        {"connection.w_response", {"number", [](RunConfig& c, const std::string& v) { c.tracker.connection.w_response = to_double(v); }}},
        {"connection.w_orientation", {"number", [](RunConfig& c, const std::string& v) { c.tracker.connection.w_orientation = to_double(v); }}},
        {"connection.skeleton_blur_std", {"number", [](RunConfig& c, const std::string& v) { c.tracker.connection.skeleton_blur_std = to_double(v); }}},
        {"connection.orientation_radius", {"number", [](RunConfig& c, const std::string& v) { c.tracker.connection.orientation_radius = to_double(v); }}},
        {"connection.accept_probability", {"number", [](RunConfig& c, const std::string& v) { c.tracker.connection.accept_probability = to_double(v); }}},
    };
    return table;
}

void validate(const RunConfig& c) {
    c.tracker.validate();
    if (c.stride < 1) throw Error("stride must be >= 1");
}

std::string frame_name(int index, const char* ext) {
    std::ostringstream s;
    s << "frame" << std::setw(3) << std::setfill('0') << index << ext;
    return s.str();
}

std::string field_name(int key, int cur) {
    std::ostringstream s;
    s << "field" << std::setw(3) << std::setfill('0') << key << '_' << std::setw(3) << cur << ".dfield";
    return s.str();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) throw Error("cannot create output directory " + dir);
}

void require_file(const std::string& path, const char* what) {
    if (!fs::is_regular_file(path)) throw Error(std::string("missing ") + what + ": " + path);
}

std::vector<ImageFrame> read_frames(const std::string& dir) {
    const auto paths = io::list_frames(dir);
    if (paths.empty()) throw Error("no frames found in " + dir);
    std::vector<ImageFrame> frames;
    for (const auto& p : paths) {
        frames.push_back(io::read_pgm(p));
        if (frames.back().width() != frames.front().width() || frames.back().height() != frames.front().height())
            throw Error("frame size mismatch: " + p);
    }
    return frames;
}

std::string sequence_name(const std::string& dir) {
    fs::path p = fs::path(dir).lexically_normal();
    if (p.filename().empty()) p = p.parent_path();
    return p.filename().string();
}

/// Scores of every predicted annotation against the same-named ground truth file.
std::vector<eval::FrameScore> score_directory(const std::string& pred_dir, const std::string& gt_dir, double rho) {
    const auto preds = io::list_files(pred_dir, ".ann");
    if (preds.empty()) throw Error("no annotation files in " + pred_dir);
    if (!fs::is_directory(gt_dir)) throw Error("not a directory: " + gt_dir);
    std::vector<eval::FrameScore> scores;
    const std::string seq = sequence_name(gt_dir);
    for (const auto& p : preds) {
        const std::string gt_path = (fs::path(gt_dir) / fs::path(p).filename()).string();
        require_file(gt_path, "ground-truth annotation");
        const auto pred = io::read_annotation(p);
        const auto gt = io::read_annotation(gt_path);
        scores.push_back({seq, pred.frame_index, eval::metrics(eval::match_counts(pred, gt, rho))});
    }
    return scores;
}

/// Options shared by track and sweep.
struct TrackOptions {
    std::string config;
    std::string seq;
    std::string ann;
    std::string field_dir;
    std::string seg_dir;
    std::optional<double> sigma;
    std::optional<int> n;
    std::optional<int> stride;
    bool no_fusion = false;
};

void add_track_options(CLI::App* cmd, TrackOptions& o) {
    cmd->add_option("--config", o.config, "key = value config file");
    cmd->add_option("--seq", o.seq, "directory of frames")->required();
    cmd->add_option("--ann", o.ann, "annotation of the first frame")->required();
    cmd->add_option("--sigma", o.sigma, "tracking range radius (px)");
    cmd->add_option("--n", o.n, "nearest segments per branch endpoint");
    cmd->add_option("--stride", o.stride, "track every stride-th frame");
    cmd->add_flag("--no-fusion", o.no_fusion, "skip branch fusion");
    cmd->add_option("--field-dir", o.field_dir, "precomputed deformation fields");
    cmd->add_option("--seg-dir", o.seg_dir, "vessel masks (frameNNN.pgm, nonzero = vessel)");
}

RunConfig resolve_config(const TrackOptions& o) {
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (o.sigma) c.tracker.sigma = *o.sigma;
    if (o.n) c.tracker.n_nearest = *o.n;
    if (o.stride) c.stride = *o.stride;
    if (o.no_fusion) c.tracker.fusion = false;
    validate(c);
    return c;
}

struct TrackInputs {
    std::vector<ImageFrame> frames;
    VesselAnnotation initial;
    tracker::FieldProvider fields;
    tracker::MaskProvider masks;
};

TrackInputs load_track_inputs(const TrackOptions& o, const RunConfig& c) {
    require_file(o.ann, "annotation");
    if (!o.field_dir.empty() && !fs::is_directory(o.field_dir)) throw Error("not a directory: " + o.field_dir);
    TrackInputs in;
    in.frames = read_frames(o.seq);
    if (in.frames.size() < 2) throw Error("tracking needs at least two frames in " + o.seq);
    in.initial = io::read_annotation(o.ann);
    validate_annotation(in.initial, in.frames.front().width(), in.frames.front().height());
    if (!o.field_dir.empty()) {
        const int count = static_cast<int>(in.frames.size());
        for (int t = c.stride; t < count; t += c.stride)
            require_file((fs::path(o.field_dir) / field_name(t - c.stride, t)).string(), "deformation field");
        const std::string dir = o.field_dir;
        in.fields = [dir](int key, int cur) -> std::optional<preprocess::DeformationField> {
            return preprocess::read_field((fs::path(dir) / field_name(key, cur)).string());
        };
    }
    if (!o.seg_dir.empty()) {
        if (!fs::is_directory(o.seg_dir)) throw Error("not a directory: " + o.seg_dir);
        const int count = static_cast<int>(in.frames.size());
        for (int t = c.stride; t < count; t += c.stride)
            require_file((fs::path(o.seg_dir) / frame_name(t, ".pgm")).string(), "segmentation mask");
        const std::string dir = o.seg_dir;
        in.masks = [dir](int t) -> std::optional<BinaryMask> {
            const ImageFrame img = io::read_pgm((fs::path(dir) / frame_name(t, ".pgm")).string());
            BinaryMask m(img.width(), img.height(), 0);
            for (int y = 0; y < img.height(); ++y)
                for (int x = 0; x < img.width(); ++x) m(x, y) = img(x, y) > 0.0 ? 1 : 0;
            return m;
        };
    }
    return in;
}

int cmd_synth(const synthgen::SynthParams& p, const std::string& out_dir, std::ostream& out) {
    ensure_dir(out_dir);
    const auto tree = synthgen::gen_tree(p);
    const auto seq = synthgen::render_sequence(tree, p);
    std::ofstream manifest(fs::path(out_dir) / "manifest.txt");
    manifest << "# synthetic sequence\n";
    manifest << "# seed " << p.seed << "\n# size " << p.width << "x" << p.height << "\n# frames " << p.frame_count
             << "\n# frames_per_cycle " << p.frames_per_cycle << "\n# amplitude " << p.amplitude << "\n# noise_std "
             << p.noise_std << "\n# branches " << p.branch_count << "\n# depth " << p.depth << "\n# tube_width "
             << p.tube_width << "\n# contrast " << p.contrast << "\n";
    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
        const int i = static_cast<int>(t);
        io::write_pgm((fs::path(out_dir) / frame_name(i, ".pgm")).string(), seq.frames[t]);
        io::write_annotation((fs::path(out_dir) / frame_name(i, ".ann")).string(), seq.truth[t]);
        manifest << frame_name(i, ".pgm") << "\n";
    }
    out << "wrote " << seq.frames.size() << " frames to " << out_dir << "\n";
    return 0;
}

int cmd_track(const TrackOptions& o, const std::string& out_dir, std::ostream& out) {
    const RunConfig c = resolve_config(o);
    const TrackInputs in = load_track_inputs(o, c);
    ensure_dir(out_dir);
    const auto report = tracker::track_sequence(in.frames, in.initial, c.tracker, c.stride, in.fields, in.masks);
    for (const auto& f : report.frames)
        io::write_annotation((fs::path(out_dir) / frame_name(f.frame, ".ann")).string(), f.annotation);
    std::ofstream rep(fs::path(out_dir) / "report.txt");
    std::ostringstream settings;
    write_config(settings, c);
    std::istringstream lines(settings.str());
    for (std::string line; std::getline(lines, line);) rep << "# " << line << "\n";
    tracker::write_report(rep, report);
    std::ofstream tim(fs::path(out_dir) / "timings.txt");
    tracker::write_timings(tim, report);
    out << "tracked " << report.frames.size() << " frames, " << report.fallback_count() << " fallbacks\n";
    return 0;
}

int cmd_eval(const std::vector<std::string>& preds, const std::vector<std::string>& gts, double rho,
             const std::string& out_path, std::ostream& out) {
    if (preds.size() != gts.size()) throw Error("--pred and --gt must be given the same number of times");
    if (!(rho >= 0.0)) throw Error("rho must be >= 0");
    std::vector<eval::FrameScore> scores;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        auto s = score_directory(preds[i], gts[i], rho);
        scores.insert(scores.end(), s.begin(), s.end());
    }
    const auto summary = eval::aggregate(scores);
    if (out_path.empty()) {
        eval::write_table(out, scores, summary);
    } else {
        std::ofstream f(out_path);
        if (!f) throw Error("cannot write " + out_path);
        eval::write_table(f, scores, summary);
    }
    return 0;
}

int cmd_overlay(const std::string& seq, const std::string& pred, const std::string& gt, const std::string& out_dir,
                std::ostream& out) {
    const auto frames = read_frames(seq);
    const auto preds = io::list_files(pred, ".ann");
    if (!gt.empty() && !fs::is_directory(gt)) throw Error("not a directory: " + gt);
    ensure_dir(out_dir);
    int written = 0;
    for (const auto& p : preds) {
        const auto ann = io::read_annotation(p);
        if (ann.frame_index < 0 || ann.frame_index >= static_cast<int>(frames.size()))
            throw Error(p + ": frame index " + std::to_string(ann.frame_index) + " has no frame");
        io::RgbImage img(frames[static_cast<std::size_t>(ann.frame_index)]);
        if (!gt.empty()) {
            const std::string gp = (fs::path(gt) / fs::path(p).filename()).string();
            if (fs::is_regular_file(gp))
                for (const auto& b : io::read_annotation(gp).branches) img.draw(b, {0, 200, 0});
        }
        for (const auto& b : ann.branches) img.draw(b, {230, 20, 20});
        std::ostringstream name;
        name << "overlay" << std::setw(3) << std::setfill('0') << ann.frame_index << ".ppm";
        io::write_ppm((fs::path(out_dir) / name.str()).string(), img);
        ++written;
    }
    out << "wrote " << written << " overlays to " << out_dir << "\n";
    return 0;
}

int cmd_sweep(const TrackOptions& o, const std::string& param, const std::vector<double>& values, std::string gt,
              double rho, const std::string& out_path, std::ostream& out) {
    if (param != "n" && param != "sigma") throw Error("sweep parameter must be 'n' or 'sigma'");
    if (values.empty()) throw Error("sweep needs at least one value");
    const RunConfig base = resolve_config(o);
    const TrackInputs in = load_track_inputs(o, base);
    if (gt.empty()) gt = o.seq;
    if (!fs::is_directory(gt)) throw Error("not a directory: " + gt);

    std::ostringstream table;
    table << std::fixed << std::setprecision(4);
    table << param << ",prec,sens,f1,first_f1,middle_f1,last_f1,fallbacks\n";
    for (double v : values) {
        RunConfig c = base;
        if (param == "n") c.tracker.n_nearest = static_cast<int>(v);
        else c.tracker.sigma = v;
        validate(c);
        const auto report = tracker::track_sequence(in.frames, in.initial, c.tracker, c.stride, in.fields, in.masks);
        std::vector<eval::FrameScore> scores;
        for (const auto& f : report.frames) {
            const std::string gp = (fs::path(gt) / frame_name(f.frame, ".ann")).string();
            require_file(gp, "ground-truth annotation");
            scores.push_back({sequence_name(gt), f.frame, eval::metrics(eval::match_counts(f.annotation, io::read_annotation(gp), rho))});
        }
        const auto s = eval::aggregate(scores);
        table << (param == "n" ? std::to_string(c.tracker.n_nearest) : std::to_string(v)) << ',' << s.prec.mean << ','
              << s.sens.mean << ',' << s.f1.mean << ',' << s.first_f1 << ',' << s.middle_f1 << ',' << s.last_f1 << ','
              << report.fallback_count() << '\n';
    }
    if (out_path.empty()) {
        out << table.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw Error("cannot write " + out_path);
        f << table.str();
    }
    return 0;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source) {
    RunConfig c;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto where = source + ":" + std::to_string(number) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(where + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw Error(where + "unknown key '" + key + "'");
        try {
            it->second.second(c, value);
        } catch (const std::exception&) {
            throw Error(where + "'" + key + "' expects " + it->second.first + ", got '" + value + "'");
        }
    }
    try {
        validate(c);
    } catch (const Error& e) {
        throw Error(source + ": " + e.what());
    }
    return c;
}

void write_config(std::ostream& out, const RunConfig& c) {
    const auto& t = c.tracker;
    const auto flags = out.flags();
    const auto precision = out.precision(12);
    out << std::defaultfloat;
    out << "sigma = " << t.sigma << "\n"
        << "n = " << t.n_nearest << "\n"
        << "rho = " << t.rho << "\n"
        << "stride = " << c.stride << "\n"
        << "scales = ";
    for (std::size_t i = 0; i < t.scales.size(); ++i) out << (i ? "," : "") << t.scales[i];
    out << "\n";
    if (t.threshold) out << "threshold = " << *t.threshold << "\n";
    else out << "threshold = auto\n";
    out << "min_threshold = " << t.min_threshold << "\n"
        << "max_gap = " << t.max_gap << "\n"
        << "max_paths = " << t.max_paths << "\n"
        << "snap_radius = " << t.snap_radius << "\n"
        << "resample_spacing = " << t.resample_spacing << "\n"
        << "max_match_cost = " << t.max_match_cost << "\n"
        << "fusion = " << (t.fusion ? "true" : "false") << "\n"
        << "registration.levels = " << t.registration.levels << "\n"
        << "registration.block_size = " << t.registration.block_size << "\n"
        << "registration.search_radius = " << t.registration.search_radius << "\n"
        << "registration.smoothing_std = " << t.registration.smoothing_std << "\n"
        << "registration.max_displacement = " << t.registration.max_displacement << "\n"
        << "registration.min_ncc = " << t.registration.min_ncc << "\n"
        << "daisy.radius = " << t.daisy.radius << "\n"
        << "daisy.rings = " << t.daisy.rings << "\n"
        << "daisy.directions = " << t.daisy.directions << "\n"
        << "daisy.bins = " << t.daisy.bins << "\n"
        << "connection.w_skeleton = " << t.connection.w_skeleton << "\n"
        << "connection.w_response = " << t.connection.w_response << "\n"
        << "connection.w_orientation = " << t.connection.w_orientation << "\n"
        << "connection.skeleton_blur_std = " << t.connection.skeleton_blur_std << "\n"
        << "connection.orientation_radius = " << t.connection.orientation_radius << "\n"
        << "connection.accept_probability = " << t.connection.accept_probability << "\n";
    out.precision(precision);
    out.flags(flags);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path);
    return parse_config(in, path);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Vessel centerline tracking across angiography frames"};
    app.require_subcommand(1);

    synthgen::SynthParams sp;
    std::string out_dir;
    auto* synth = app.add_subcommand("synth", "write a synthetic sequence with ground truth");
    synth->add_option("--seed", sp.seed, "random seed");
    synth->add_option("--frames", sp.frame_count, "number of frames");
    synth->add_option("--width", sp.width);
    synth->add_option("--height", sp.height);
    synth->add_option("--noise", sp.noise_std, "additive noise std");
    synth->add_option("--amplitude", sp.amplitude, "peak motion (px)");
    synth->add_option("--period", sp.frames_per_cycle, "frames per motion cycle");
    synth->add_option("--branches", sp.branch_count);
    synth->add_option("--depth", sp.depth);
    synth->add_option("--tube-width", sp.tube_width);
    synth->add_option("--contrast", sp.contrast);
    synth->add_option("--out", out_dir, "output directory")->required();

    TrackOptions track_opts;
    auto* track = app.add_subcommand("track", "track the annotated branches through a sequence");
    add_track_options(track, track_opts);
    track->add_option("--out", out_dir, "output directory")->required();

    std::vector<std::string> preds, gts;
    double rho = 3.0;
    std::string out_file;
    auto* evalc = app.add_subcommand("eval", "score predicted annotations against ground truth");
    evalc->add_option("--pred", preds, "directory of predicted annotations (repeatable)")->required();
    evalc->add_option("--gt", gts, "directory of ground-truth annotations (repeatable)")->required();
    evalc->add_option("--rho", rho, "distance tolerance (px)");
    evalc->add_option("--out", out_file, "table file (default: stdout)");

    std::string seq_dir, pred_dir, gt_dir;
    auto* overlay = app.add_subcommand("render-overlay", "draw tracked (red) and ground-truth (green) centerlines");
    overlay->add_option("--seq", seq_dir, "directory of frames")->required();
    overlay->add_option("--pred", pred_dir, "directory of tracked annotations")->required();
    overlay->add_option("--gt", gt_dir, "directory of ground-truth annotations");
    overlay->add_option("--out", out_dir, "output directory")->required();

    TrackOptions sweep_opts;
    std::string param = "n";
    std::vector<double> values{1, 2, 3};
    double sweep_rho = 3.0;
    std::string sweep_gt;
    auto* sweep = app.add_subcommand("sweep", "track once per parameter value and tabulate the scores");
    add_track_options(sweep, sweep_opts);
    sweep->add_option("--param", param, "n or sigma");
    sweep->add_option("--values", values, "parameter values")->delimiter(',');
    sweep->add_option("--gt", sweep_gt, "ground-truth directory (default: --seq)");
    sweep->add_option("--rho", sweep_rho, "distance tolerance (px)");
    sweep->add_option("--out", out_file, "table file (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*synth) return cmd_synth(sp, out_dir, out);
        if (*track) return cmd_track(track_opts, out_dir, out);
        if (*evalc) return cmd_eval(preds, gts, rho, out_file, out);
        if (*overlay) return cmd_overlay(seq_dir, pred_dir, gt_dir, out_dir, out);
        if (*sweep) return cmd_sweep(sweep_opts, param, values, sweep_gt, sweep_rho, out_file, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace vtrack::cli
