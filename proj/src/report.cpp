#include "modalid/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "modalid/config_io.hpp"
#include "modalid/error.hpp"
#include "modalid/text_io.hpp"

namespace modalid {

namespace {

std::string genome_header(std::size_t genes) {
  std::string h;
  const std::size_t half = genes / 2;
  for (std::size_t i = 0; i < half; ++i) h += ",cx" + std::to_string(i);
  for (std::size_t i = 0; i < half; ++i) h += ",cy" + std::to_string(i);
  return h;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Range {
  double lo;
  double hi;
};

Range padded_range(std::span<const double> values) {
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
    return {lo - (lo == 0.0 ? 0.0 : pad), hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

// Fixed-geometry SVG plot canvas.
class Chart {
 public:
  static constexpr double kWidth = 640.0;
  static constexpr double kHeight = 400.0;
  static constexpr double kLeft = 70.0;
  static constexpr double kRight = 20.0;
  static constexpr double kTop = 40.0;
  static constexpr double kBottom = 50.0;

  Chart(std::string title, std::string x_label, std::string y_label, Range x, Range y)
      : x_(x), y_(y) {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
         << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
         << "\">\n"
         << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
         << "\" fill=\"white\"/>\n"
         << "<text x=\"" << fixed(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    axes(x_label, y_label);
  }

  double px(double x) const {
    return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
  }

  void polyline(std::span<const double> xs, std::span<const double> ys, const std::string& color,
                const std::string& extra = "") {
    out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"" << extra
         << " points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out_ << (i ? " " : "") << fixed(px(xs[i])) << "," << fixed(py(ys[i]));
    }
    out_ << "\"/>\n";
  }

  void circle(double x, double y, const std::string& color, double r = 3.5) {
    out_ << "<circle cx=\"" << fixed(px(x)) << "\" cy=\"" << fixed(py(y)) << "\" r=\"" << fixed(r)
         << "\" fill=\"" << color << "\" fill-opacity=\"0.8\"/>\n";
  }

  void legend(double row, const std::string& color, const std::string& label) {
    const double y = kTop + 14.0 + 16.0 * row;
    out_ << "<rect x=\"" << fixed(kWidth - 170) << "\" y=\"" << fixed(y - 9) << "\" width=\"12\" "
         << "height=\"10\" fill=\"" << color << "\"/>\n"
         << "<text x=\"" << fixed(kWidth - 152) << "\" y=\"" << fixed(y) << "\" "
         << "font-family=\"sans-serif\" font-size=\"11\">" << label << "</text>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  void axes(const std::string& x_label, const std::string& y_label) {
    const double x0 = kLeft;
    const double x1 = kWidth - kRight;
    const double y0 = kHeight - kBottom;
    const double y1 = kTop;
    out_ << "<g stroke=\"black\" stroke-width=\"1\">\n"
         << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(y0) << "\" x2=\"" << fixed(x1)
         << "\" y2=\"" << fixed(y0) << "\"/>\n"
         << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(y0) << "\" x2=\"" << fixed(x0)
         << "\" y2=\"" << fixed(y1) << "\"/>\n"
         << "</g>\n";
    constexpr int kTicks = 5;
    for (int k = 0; k <= kTicks; ++k) {
      const double fx = x_.lo + (x_.hi - x_.lo) * k / kTicks;
      const double fy = y_.lo + (y_.hi - y_.lo) * k / kTicks;
      out_ << "<text x=\"" << fixed(px(fx)) << "\" y=\"" << fixed(y0 + 16)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
           << tick_label(fx) << "</text>\n"
           << "<text x=\"" << fixed(x0 - 6) << "\" y=\"" << fixed(py(fy) + 3)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
           << tick_label(fy) << "</text>\n";
    }
    out_ << "<text x=\"" << fixed((x0 + x1) / 2) << "\" y=\"" << fixed(kHeight - 12)
         << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
         << "</text>\n"
         << "<text x=\"16\" y=\"" << fixed((y0 + y1) / 2) << "\" text-anchor=\"middle\" "
         << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
         << fixed((y0 + y1) / 2) << ")\">" << y_label << "</text>\n";
  }

  Range x_;
  Range y_;
  std::ostringstream out_;
};

// Red for the first generation through blue for the last.
std::string generation_color(std::size_t gen, std::size_t count) {
  const double t = count > 1 ? static_cast<double>(gen) / static_cast<double>(count - 1) : 0.0;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x00%02x", static_cast<int>(std::lround(255.0 * (1.0 - t))),
                static_cast<int>(std::lround(255.0 * t)));
  return buf;
}

std::string series_chart(const std::string& title, const std::string& y_label,
                         std::span<const double> gens, std::span<const double> values,
                         bool trendline) {
  std::vector<double> all(values.begin(), values.end());
  LinearFit fit;
  std::vector<double> trend;
  if (trendline) {
    fit = ols_fit(gens, values);
    for (double g : gens) trend.push_back(fit.slope * g + fit.intercept);
    all.insert(all.end(), trend.begin(), trend.end());
  }
  Range xr = gens.size() > 1 ? Range{gens.front(), gens.back()} : Range{gens.front() - 1, gens.front() + 1};
  Chart chart(title, "generation", y_label, xr, padded_range(all));
  chart.polyline(gens, values, "#1f4e9c");
  for (std::size_t i = 0; i < gens.size(); ++i) chart.circle(gens[i], values[i], "#1f4e9c", 3.0);
  chart.legend(0, "#1f4e9c", y_label);
  if (trendline) {
    chart.polyline(gens, trend, "#d62728", " stroke-dasharray=\"6,4\"");
    chart.legend(1, "#d62728", "trend slope " + tick_label(fit.slope));
  }
  return chart.finish();
}

}  // namespace

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw Error(ErrorKind::LengthMismatch, "ols_fit needs equal, non-empty series");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  LinearFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

std::string generations_csv(const RunResult& result) {
  std::string out = "generation,mean_mse1,std_mse1,min_mse1,mean_mse2,std_mse2,min_mse2\n";
  for (const auto& g : result.history) {
    out += std::to_string(g.generation);
    for (double v : {g.mse1.mean, g.mse1.standard_deviation, g.mse1.minimum, g.mse2.mean,
                     g.mse2.standard_deviation, g.mse2.minimum}) {
      out += "," + format_double(v);
    }
    out += "\n";
  }
  return out;
}

std::string individuals_csv(const RunResult& result) {
  std::string out = "generation,index" + genome_header(result.config.genome_size()) + ",mse1,mse2,rank\n";
  for (const auto& ind : result.archive) {
    out += std::to_string(ind.generation) + "," + std::to_string(ind.index);
    for (double v : ind.genome) out += "," + format_double(v);
    out += "," + format_double(ind.fitness->mse1) + "," + format_double(ind.fitness->mse2) + "," +
           std::to_string(ind.rank) + "\n";
  }
  return out;
}

std::vector<std::filesystem::path> write_stats(const RunResult& result,
                                               const std::filesystem::path& out_dir) {
  const auto gen_path = out_dir / "generations.csv";
  const auto ind_path = out_dir / "individuals.csv";
  write_text_file(gen_path, generations_csv(result));
  write_text_file(ind_path, individuals_csv(result));
  return {gen_path, ind_path};
}

std::vector<std::filesystem::path> render_charts(const RunResult& result,
                                                 const std::filesystem::path& out_dir) {
  if (result.history.empty()) throw Error(ErrorKind::InvalidConfig, "run has no history");
  std::vector<double> gens;
  std::vector<double> mean1, mean2, std1, std2;
  for (const auto& g : result.history) {
    gens.push_back(static_cast<double>(g.generation));
    mean1.push_back(g.mse1.mean);
    mean2.push_back(g.mse2.mean);
    std1.push_back(g.mse1.standard_deviation);
    std2.push_back(g.mse2.standard_deviation);
  }

  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, const std::string& svg) {
    written.push_back(out_dir / name);
    write_text_file(written.back(), svg);
  };
  emit("std_mse1.svg", series_chart("Standard deviation of MSE1", "std MSE1", gens, std1, false));
  emit("std_mse2.svg", series_chart("Standard deviation of MSE2", "std MSE2", gens, std2, false));
  emit("mean_mse1.svg", series_chart("Mean MSE1 with trendline", "mean MSE1", gens, mean1, true));
  emit("mean_mse2.svg", series_chart("Mean MSE2 with trendline", "mean MSE2", gens, mean2, true));

  std::vector<double> xs, ys;
  for (const auto& ind : result.archive) {
    xs.push_back(ind.fitness->mse1);
    ys.push_back(ind.fitness->mse2);
  }
  const std::size_t count = result.history.size();
  Chart scatter("Fitness of all individuals by generation", "MSE1", "MSE2", padded_range(xs),
                padded_range(ys));
  for (const auto& ind : result.archive) {
    scatter.circle(ind.fitness->mse1, ind.fitness->mse2, generation_color(ind.generation, count));
  }
  scatter.legend(0, generation_color(0, count), "generation 0");
  scatter.legend(1, generation_color(count - 1, count), "generation " + std::to_string(count - 1));
  emit("scatter.svg", scatter.finish());
  return written;
}

std::string result_to_json(const RunResult& result) {
  using nlohmann::json;
  auto individual = [](const Individual& ind) {
    return json{{"generation", ind.generation}, {"index", ind.index},
                {"genome", ind.genome},         {"mse1", ind.fitness->mse1},
                {"mse2", ind.fitness->mse2}};
  };
  json history = json::array();
  for (const auto& g : result.history) {
    history.push_back({{"generation", g.generation},
                       {"mse1", {{"mean", g.mse1.mean}, {"std", g.mse1.standard_deviation}, {"min", g.mse1.minimum}}},
                       {"mse2", {{"mean", g.mse2.mean}, {"std", g.mse2.standard_deviation}, {"min", g.mse2.minimum}}},
                       {"best_genome", g.best_genome},
                       {"best_fitness", {g.best_fitness.mse1, g.best_fitness.mse2}}});
  }
  json front = json::array();
  for (const auto& ind : result.pareto_front) front.push_back(individual(ind));
  json doc = {{"config", json::parse(config_to_json(result.config))},
              {"history", history},
              {"pareto_front", front},
              {"best", individual(result.best)},
              {"archive_size", result.archive.size()}};
  return doc.dump(2) + "\n";
}

}  // namespace modalid
