#include "srgan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace sr {

namespace {

void check_metric_inputs(const ImageF& ref, const ImageF& test) {
  if (ref.height != test.height || ref.width != test.width ||
      ref.channels != test.channels)
    fail(ErrorCode::ShapeMismatch, "metric inputs differ in shape");
}

ImageF to_y_cropped(const ImageF& img, int border) {
  ImageF y = img.channels == 3 ? rgb_to_y(img) : img;
  return crop_border(y, border);
}

}  // namespace

PsnrResult psnr_y(const ImageF& ref, const ImageF& test, int border) {
  check_metric_inputs(ref, test);
  ImageF a = to_y_cropped(ref, border);
  ImageF b = to_y_cropped(test, border);
  double mse = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    double d = static_cast<double>(a.data[i]) - b.data[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.data.size());
  if (mse == 0.0) return {0.0, true};
  return {10.0 * std::log10(1.0 / mse), false};
}

double ssim_y(const ImageF& ref, const ImageF& test, int border) {
  check_metric_inputs(ref, test);
  ImageF a = to_y_cropped(ref, border);
  ImageF b = to_y_cropped(test, border);
  constexpr int kWin = 11;
  if (a.height < kWin || a.width < kWin)
    fail(ErrorCode::ImageTooSmall, "ssim needs at least 11x11 after cropping");

  // 11-tap Gaussian window, sigma 1.5
  double w[kWin];
  double wsum = 0.0;
  for (int i = 0; i < kWin; ++i) {
    double d = i - (kWin - 1) / 2.0;
    w[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    wsum += w[i];
  }
  for (double& v : w) v /= wsum;

  const int oh = a.height - kWin + 1, ow = a.width - kWin + 1;
  auto windowed = [&](const ImageF& x, const ImageF& y, int py, int px,
                      double& mx, double& my, double& sxx, double& syy,
                      double& sxy) {
    mx = my = sxx = syy = sxy = 0.0;
    for (int i = 0; i < kWin; ++i)
      for (int j = 0; j < kWin; ++j) {
        double ww = w[i] * w[j];
        double xv = x.at(py + i, px + j, 0);
        double yv = y.at(py + i, px + j, 0);
        mx += ww * xv;
        my += ww * yv;
        sxx += ww * xv * xv;
        syy += ww * yv * yv;
        sxy += ww * xv * yv;
      }
    sxx -= mx * mx;
    syy -= my * my;
    sxy -= mx * my;
  };

  constexpr double kC1 = 0.01 * 0.01;  // (K1 * L)^2, L = 1
  constexpr double kC2 = 0.03 * 0.03;
  double total = 0.0;
  for (int py = 0; py < oh; ++py)
    for (int px = 0; px < ow; ++px) {
      double mx, my, sxx, syy, sxy;
      windowed(a, b, py, px, mx, my, sxx, syy, sxy);
      double num = (2.0 * mx * my + kC1) * (2.0 * sxy + kC2);
      double den = (mx * mx + my * my + kC1) * (sxx + syy + kC2);
      total += num / den;
    }
  return total / (static_cast<double>(oh) * ow);
}

void MetricReport::finalize() {
  double psum = 0.0, ssum = 0.0;
  int finite = 0;
  infinite_count = 0;
  for (const auto& r : rows) {
    ssum += r.ssim;
    if (r.psnr_infinite) {
      ++infinite_count;
    } else {
      psum += r.psnr_db;
      ++finite;
    }
  }
  mean_psnr_db = finite > 0 ? psum / finite : 0.0;
  mean_ssim = rows.empty() ? 0.0 : ssum / static_cast<double>(rows.size());
}

MetricReport evaluate(const std::string& test_dir, const std::string& ref_dir,
                      int border, bool allow_missing,
                      const std::string& method) {
  auto list_pngs = [](const std::string& dir) {
    if (!fs::is_directory(dir))
      fail(ErrorCode::Data, "'" + dir + "' is not a directory");
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".png")
        names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
  };

  auto test_names = list_pngs(test_dir);
  auto ref_names = list_pngs(ref_dir);
  if (test_names.empty() && ref_names.empty())
    fail(ErrorCode::Data, "no PNG files to evaluate");

  MetricReport rep;
  rep.method = method;
  std::vector<std::string> both, only;
  std::set_intersection(test_names.begin(), test_names.end(),
                        ref_names.begin(), ref_names.end(),
                        std::back_inserter(both));
  std::set_symmetric_difference(test_names.begin(), test_names.end(),
                                ref_names.begin(), ref_names.end(),
                                std::back_inserter(only));
  if (!only.empty()) {
    if (!allow_missing)
      fail(ErrorCode::Data, "unmatched file '" + only.front() +
                                "' (and " + std::to_string(only.size() - 1) +
                                " more)");
    rep.missing = only;
  }

  for (const auto& name : both) {
    ImageF test = to_float(load_png((fs::path(test_dir) / name).string()),
                           0.0f, 1.0f);
    ImageF ref = to_float(load_png((fs::path(ref_dir) / name).string()),
                          0.0f, 1.0f);
    MetricRow row;
    row.name = name;
    auto p = psnr_y(ref, test, border);
    row.psnr_db = p.db;
    row.psnr_infinite = p.infinite;
    row.ssim = ssim_y(ref, test, border);
    rep.rows.push_back(std::move(row));
  }
  rep.finalize();
  return rep;
}

void write_report_csv(const MetricReport& rep, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(ErrorCode::Io, "cannot write '" + path + "'");
  f << "filename,psnr_db,ssim\n";
  char buf[64];
  for (const auto& r : rep.rows) {
    if (r.psnr_infinite) {
      f << r.name << ",inf,";
    } else {
      std::snprintf(buf, sizeof buf, "%.6f", r.psnr_db);
      f << r.name << "," << buf << ",";
    }
    std::snprintf(buf, sizeof buf, "%.6f", r.ssim);
    f << buf << "\n";
  }
}

void write_report_json(const MetricReport& rep, const std::string& path) {
  nlohmann::json j;
  j["method"] = rep.method;
  j["count"] = rep.rows.size();
  j["mean_psnr_db"] = rep.mean_psnr_db;
  j["mean_ssim"] = rep.mean_ssim;
  j["infinite_psnr_count"] = rep.infinite_count;
  if (!rep.missing.empty()) j["missing"] = rep.missing;
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(ErrorCode::Io, "cannot write '" + path + "'");
  f << j.dump(2) << "\n";
}

}  // namespace sr
