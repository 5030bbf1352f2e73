#include "bi3d/bench.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace bi3d {

std::vector<BenchRow> bench_volume(const StereoPair& pair, const ClassifierConfig& cfg,
                                   const std::vector<int>& counts, int repeats,
                                   double d_max) {
  if (repeats < 1) throw Error("bench_volume: repeats must be >= 1");
  std::vector<BenchRow> rows;
  rows.reserve(counts.size());
  for (int count : counts) {
    if (count < 2) throw Error("bench_volume: plane counts must be >= 2");
    const PlaneSchedule schedule = uniform_schedule(0.0, d_max, count);
    // One untimed warm-up run per count settles caches and allocators.
    (void)build_volume(pair, schedule, cfg);
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < repeats; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      (void)build_volume(pair, schedule, cfg);
      const auto t1 = std::chrono::steady_clock::now();
      const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      sum += ms;
      sum_sq += ms * ms;
    }
    BenchRow row;
    row.plane_count = count;
    row.mean_ms = sum / repeats;
    const double var = std::max(0.0, sum_sq / repeats - row.mean_ms * row.mean_ms);
    row.std_ms = std::sqrt(var);
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "planes,mean_ms,std_ms\n";
  for (const auto& r : rows)
    out << r.plane_count << ',' << r.mean_ms << ',' << r.std_ms << '\n';
  return out.str();
}

double bench_linear_fit_r2(const std::vector<BenchRow>& rows) {
  if (rows.size() < 2) throw Error("bench_linear_fit_r2: needs at least two rows");
  const double n = static_cast<double>(rows.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    sx += r.plane_count;
    sy += r.mean_ms;
    sxx += static_cast<double>(r.plane_count) * r.plane_count;
    sxy += r.plane_count * r.mean_ms;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  const double mean_y = sy / n;
  double ss_res = 0, ss_tot = 0;
  for (const auto& r : rows) {
    const double fit = slope * r.plane_count + intercept;
    ss_res += (r.mean_ms - fit) * (r.mean_ms - fit);
    ss_tot += (r.mean_ms - mean_y) * (r.mean_ms - mean_y);
  }
  if (ss_tot == 0.0) return 1.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace bi3d
