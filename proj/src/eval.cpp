#include "vtrack/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace vtrack::eval {

std::vector<Point> rasterize_points(const VesselAnnotation& ann) {
    std::vector<Point> pts;
    for (const auto& b : ann.branches) {
        if (b.empty()) continue;
        if (b.size() == 1) {
            pts.push_back(b.front());
            continue;
        }
        const auto r = resample_polyline(b, 1.0);
        pts.insert(pts.end(), r.points.begin(), r.points.end());
    }
    return pts;
}

MatchCounts match_points(const std::vector<Point>& pred, const std::vector<Point>& gt, double rho) {
    if (!(rho >= 0.0)) throw Error("rho must be >= 0");
    const double r2 = rho * rho;
    auto covered = [r2](const Point& p, const std::vector<Point>& set) {
        for (const Point& q : set) {
            const double dx = p.x - q.x, dy = p.y - q.y;
            if (dx * dx + dy * dy <= r2) return true;
        }
        return false;
    };
    MatchCounts c;
    for (const Point& p : pred) (covered(p, gt) ? c.tp : c.fp) += 1;
    for (const Point& g : gt)
        if (!covered(g, pred)) ++c.fn;
    return c;
}

MatchCounts match_counts(const VesselAnnotation& pred, const VesselAnnotation& gt, double rho) {
    return match_points(rasterize_points(pred), rasterize_points(gt), rho);
}

MetricTriple metrics(const MatchCounts& c) {
    MetricTriple m;
    const double tp = static_cast<double>(c.tp);
    if (c.tp + c.fp > 0) m.prec = tp / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0) m.sens = tp / static_cast<double>(c.tp + c.fn);
    if (m.prec + m.sens > 0.0) m.f1 = 2.0 * m.prec * m.sens / (m.prec + m.sens);
    return m;
}

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd r;
    if (values.empty()) return r;
    for (double v : values) r.mean += v;
    r.mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(var / static_cast<double>(values.size()));
    return r;
}

SequenceSummary aggregate(const std::vector<FrameScore>& scores) {
    if (scores.empty()) throw Error("nothing to aggregate");
    SequenceSummary s;
    std::vector<double> p, se, f;
    std::vector<std::string> order;
    std::vector<std::vector<double>> per_seq;
    for (const auto& sc : scores) {
        p.push_back(sc.m.prec);
        se.push_back(sc.m.sens);
        f.push_back(sc.m.f1);
        auto it = std::find(order.begin(), order.end(), sc.sequence);
        if (it == order.end()) {
            order.push_back(sc.sequence);
            per_seq.emplace_back();
            it = order.end() - 1;
        }
        per_seq[static_cast<std::size_t>(it - order.begin())].push_back(sc.m.f1);
    }
    s.prec = mean_std(p);
    s.sens = mean_std(se);
    s.f1 = mean_std(f);
    s.frames = scores.size();
    s.sequences = order.size();
    for (const auto& seq : per_seq) {
        s.first_f1 += seq.front();
        s.middle_f1 += seq[(seq.size() - 1) / 2];
        s.last_f1 += seq.back();
    }
    const double n = static_cast<double>(per_seq.size());
    s.first_f1 /= n;
    s.middle_f1 /= n;
    s.last_f1 /= n;
    return s;
}

void write_table(std::ostream& out, const std::vector<FrameScore>& scores, const SequenceSummary& summary) {
    out << std::fixed << std::setprecision(4);
    out << "sequence,frame,prec,sens,f1\n";
    for (const auto& s : scores) out << s.sequence << ',' << s.frame << ',' << s.m.prec << ',' << s.m.sens << ',' << s.m.f1 << '\n';
    out << "\n# summary (mean +- population std over " << summary.frames << " frames, " << summary.sequences
        << " sequences)\n";
    out << "metric,mean,std\n";
    out << "prec," << summary.prec.mean << ',' << summary.prec.std << '\n';
    out << "sens," << summary.sens.mean << ',' << summary.sens.std << '\n';
    out << "f1," << summary.f1.mean << ',' << summary.f1.std << '\n';
    out << "\n# tracking span (mean f1 over sequences)\n";
    out << "first,middle,last\n";
    out << summary.first_f1 << ',' << summary.middle_f1 << ',' << summary.last_f1 << '\n';
    out.unsetf(std::ios::floatfield);
}

}  // namespace vtrack::eval
