#pragma once

#include <string>
#include <vector>

#include "srgan/image.hpp"

namespace sr {

// Evaluation protocol: metrics on the y channel after cropping a border
// strip (4 pixels by default) from each side.

struct PsnrResult {
  double db = 0.0;
  bool infinite = false;  // identical inputs
};

PsnrResult psnr_y(const ImageF& ref, const ImageF& test, int border = 4);

// mean SSIM, 11x11 Gaussian window sigma 1.5, K1=0.01 K2=0.03, dynamic
// range 1.0
double ssim_y(const ImageF& ref, const ImageF& test, int border = 4);

struct MetricRow {
  std::string name;
  double psnr_db = 0.0;
  bool psnr_infinite = false;
  double ssim = 0.0;
};

struct MetricReport {
  std::string method;
  std::vector<MetricRow> rows;
  std::vector<std::string> missing;  // only populated with allow_missing
  double mean_psnr_db = 0.0;         // over finite entries
  double mean_ssim = 0.0;
  int infinite_count = 0;

  void finalize();
};

// Compares PNG files with matching names across two directories. A file
// present on only one side is a DataError unless allow_missing is set, in
// which case it is listed and excluded from the means.
MetricReport evaluate(const std::string& test_dir, const std::string& ref_dir,
                      int border = 4, bool allow_missing = false,
                      const std::string& method = "");

void write_report_csv(const MetricReport& rep, const std::string& path);
void write_report_json(const MetricReport& rep, const std::string& path);

}  // namespace sr
