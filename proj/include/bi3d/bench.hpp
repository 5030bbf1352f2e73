#pragma once

#include <string>

#include "bi3d/depthops.hpp"

namespace bi3d {

struct BenchRow {
  int plane_count = 0;
  double mean_ms = 0.0;
  double std_ms = 0.0;
};

/// Times build_volume on the given pair for each plane count (uniform
/// schedules over [0, d_max]), repeating each measurement. Used to check that
/// wall time grows linearly with the number of planes.
std::vector<BenchRow> bench_volume(const StereoPair& pair, const ClassifierConfig& cfg,
                                   const std::vector<int>& counts, int repeats,
                                   double d_max);

/// CSV with header "planes,mean_ms,std_ms".
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Coefficient of determination of the least-squares line through
/// (plane_count, mean_ms).
double bench_linear_fit_r2(const std::vector<BenchRow>& rows);

}  // namespace bi3d
