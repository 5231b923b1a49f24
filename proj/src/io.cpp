#include "nlf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlf {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << content;
}

std::string estimate_to_json(const Estimate& e, const std::string& field_id) {
  std::ostringstream os;
  os << "{\"field\":\"" << field_id << "\",\"family\":\"" << family_name(e.spec.family)
     << "\",\"p\":" << fmt_double(e.spec.p);
  if (e.spec.family == Family::BSVY) os << ",\"gamma\":" << fmt_double(e.spec.gamma);
  os << ",\"sweep_param\":" << fmt_double(e.spec.sweep);
  if (e.spec.family == Family::BBM) os << ",\"radial_cut\":" << fmt_double(e.spec.radial_cut);
  os << ",\"value\":" << fmt_double(e.value) << ",\"error\":" << fmt_double(e.error)
     << ",\"diverged\":" << (e.diverged ? "true" : "false")
     << ",\"tail_bound\":" << fmt_double(e.tail_bound)
     << ",\"n_evaluations\":" << e.n_evaluations << ",\"plan\":{\"engine\":\""
     << engine_name(e.plan.engine) << "\",\"outer_nodes\":" << e.plan.outer_nodes
     << ",\"radial_nodes\":" << e.plan.radial_nodes << ",\"samples\":" << e.plan.samples
     << ",\"strata\":" << e.plan.strata << ",\"seed\":" << e.plan.seed << "}}";
  return os.str();
}

std::string sweep_results_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "index,param,value,error,diverged,tail_bound,n_evaluations,seed\n";
  for (std::size_t i = 0; i < r.params.size() && i < r.estimates.size(); ++i) {
    const Estimate& e = r.estimates[i];
    os << i << ',' << fmt_double(r.params[i]) << ',' << fmt_double(e.value) << ','
       << fmt_double(e.error) << ',' << (e.diverged ? 1 : 0) << ',' << fmt_double(e.tail_bound)
       << ',' << e.n_evaluations << ',' << e.plan.seed << '\n';
  }
  return os.str();
}

namespace {

double log_clip(double v) { return std::log10(std::max(v, 1e-300)); }

}  // namespace

std::string series_plot_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                            const char* x_label, const char* y_label,
                            std::optional<double> target) {
  const int W = 640, H = 480, M = 60;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (xs.empty() || xs.size() != ys.size()) {
    os << "</svg>\n";
    return os.str();
  }
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = log_clip(std::abs(xs[i]));
    const double y = log_clip(std::abs(ys[i]));
    pts.emplace_back(x, y);
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  if (target) {
    const double ty = log_clip(std::abs(*target));
    y0 = std::min(y0, ty);
    y1 = std::max(y1, ty);
  }
  if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
  auto px = [&](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
  auto py = [&](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };

  os << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\"" << H - M
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 15
     << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  os << "<text x=\"18\" y=\"" << H / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " << H / 2
     << ")\">" << y_label << "</text>\n";

  if (target) {
    const double ty = py(log_clip(std::abs(*target)));
    os << "<line x1=\"" << M << "\" y1=\"" << ty << "\" x2=\"" << W - M << "\" y2=\"" << ty
       << "\" stroke=\"#c44\" stroke-dasharray=\"6 3\"/>\n";
  }
  os << "<polyline fill=\"none\" stroke=\"#226\" stroke-width=\"1.5\" points=\"";
  for (auto& pq : pts) os << px(pq.first) << ',' << py(pq.second) << ' ';
  os << "\"/>\n";
  for (auto& pq : pts)
    os << "<circle cx=\"" << px(pq.first) << "\" cy=\"" << py(pq.second)
       << "\" r=\"3\" fill=\"#226\"/>\n";
  os << "</svg>\n";
  return os.str();
}

std::string sweep_plot_svg(const SweepResult& r) {
  std::vector<double> ys;
  for (const auto& e : r.estimates) ys.push_back(e.value);
  return series_plot_svg(r.params, ys, "log10 sweep parameter", "log10 value",
                         r.reference_target);
}

}  // namespace nlf
