#include "vtrack/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vtrack/error.hpp"

namespace fs = std::filesystem;

namespace vtrack::io {
namespace {

/// Next header token, skipping whitespace and comments.
std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int parse_dimension(const std::string& tok, const std::string& path) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size() || v <= 0) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw Error(path + ": bad PGM header value '" + tok + "'");
    }
}

}  // namespace

ImageFrame read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open image " + path);
    if (pnm_token(in) != "P5") throw Error(path + ": not a binary PGM (P5) file");
    const int w = parse_dimension(pnm_token(in), path);
    const int h = parse_dimension(pnm_token(in), path);
    const int maxval = parse_dimension(pnm_token(in), path);
    if (maxval > 65535) throw Error(path + ": PGM maxval above 65535");
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) throw Error(path + ": truncated PGM data");
    Grid<double> g(w, h);
    auto vals = g.values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const unsigned v = bytes == 1 ? raw[i] : (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
        vals[i] = std::min(1.0, static_cast<double>(v) / maxval);
    }
    return ImageFrame(std::move(g));
}

void write_pgm(const std::string& path, const ImageFrame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write image " + path);
    out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
    std::vector<unsigned char> raw;
    raw.reserve(frame.pixels().size());
    for (double v : frame.pixels().values()) raw.push_back(static_cast<unsigned char>(std::lround(v * 255.0)));
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

RgbImage::RgbImage(const ImageFrame& gray) : width(gray.width()), height(gray.height()) {
    pixels.reserve(gray.pixels().size());
    for (double v : gray.pixels().values()) {
        const auto g = static_cast<std::uint8_t>(std::lround(v * 255.0));
        pixels.push_back({g, g, g});
    }
}

void RgbImage::set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    pixels[static_cast<std::size_t>(y) * width + x] = c;
}

void RgbImage::draw(const Polyline& p, Rgb c) {
    if (p.size() == 1) {
        const auto [x, y] = bresenham(p.front(), p.front()).front();
        set(x, y, c);
    }
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        for (const auto& [x, y] : bresenham(p.points[i], p.points[i + 1])) set(x, y, c);
}

void write_ppm(const std::string& path, const RgbImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write image " + path);
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size() * 3));
}

VesselAnnotation read_annotation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open annotation " + path);
    VesselAnnotation ann;
    try {
        const auto j = nlohmann::json::parse(in);
        ann.frame_index = j.at("frame_index").get<int>();
        for (const auto& b : j.at("branches")) {
            Polyline p;
            for (const auto& pt : b) {
                if (!pt.is_array() || pt.size() != 2) throw Error("point is not an [x, y] pair");
                p.points.push_back({pt[0].get<double>(), pt[1].get<double>()});
            }
            ann.branches.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(path + ": malformed annotation (" + e.what() + ")");
    } catch (const Error& e) {
        throw Error(path + ": malformed annotation (" + e.what() + ")");
    }
    return ann;
}

std::string annotation_json(const VesselAnnotation& ann) {
    nlohmann::json j;
    j["frame_index"] = ann.frame_index;
    j["branches"] = nlohmann::json::array();
    for (const auto& b : ann.branches) {
        auto pts = nlohmann::json::array();
        for (const Point& p : b.points) pts.push_back({p.x, p.y});
        j["branches"].push_back(std::move(pts));
    }
    return j.dump() + "\n";
}

void write_annotation(const std::string& path, const VesselAnnotation& ann) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write annotation " + path);
    out << annotation_json(ann);
}

std::vector<std::string> list_files(const std::string& dir, const std::string& extension) {
    if (!fs::is_directory(dir)) throw Error("not a directory: " + dir);
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == extension) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    std::vector<std::string> paths;
    for (const auto& n : names) paths.push_back((fs::path(dir) / n).string());
    return paths;
}

std::vector<std::string> list_frames(const std::string& dir) {
    if (!fs::is_directory(dir)) throw Error("not a directory: " + dir);
    const fs::path manifest = fs::path(dir) / "manifest.txt";
    if (!fs::exists(manifest)) return list_files(dir, ".pgm");
    std::ifstream in(manifest);
    std::vector<std::string> paths;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::string name;
        if (!(words >> name)) continue;
        const fs::path p = fs::path(dir) / name;
        if (!fs::is_regular_file(p)) throw Error(manifest.string() + " lists a missing frame: " + name);
        paths.push_back(p.string());
    }
    return paths;
}

}  // namespace vtrack::io
