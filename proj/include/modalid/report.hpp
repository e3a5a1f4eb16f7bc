#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "modalid/evolution.hpp"

namespace modalid {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. A single point (or
/// constant x) yields slope 0 through the mean.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

/// generation,mean_mse1,std_mse1,min_mse1,mean_mse2,std_mse2,min_mse2
std::string generations_csv(const RunResult& result);
/// generation,index,cx0..,cy0..,mse1,mse2,rank (one row per archive entry)
std::string individuals_csv(const RunResult& result);

/// Writes generations.csv and individuals.csv; returns the paths written.
std::vector<std::filesystem::path> write_stats(const RunResult& result,
                                               const std::filesystem::path& out_dir);

/// Writes std_mse1.svg, std_mse2.svg, mean_mse1.svg, mean_mse2.svg (with an
/// OLS trendline) and scatter.svg.
std::vector<std::filesystem::path> render_charts(const RunResult& result,
                                                 const std::filesystem::path& out_dir);

/// Config echo, history, Pareto front and best individual as JSON.
std::string result_to_json(const RunResult& result);

}  // namespace modalid
