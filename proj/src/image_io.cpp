#include "artauth/image_io.hpp"

#include <array>
#include <fstream>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "artauth/error.hpp"

namespace artauth {
namespace {

enum class Container { Png, Jpeg, Tiff, Unknown };

Container sniff(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<unsigned char, 8> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  const auto got = in.gcount();
  if (got >= 8 && head[0] == 0x89 && head[1] == 'P' && head[2] == 'N' && head[3] == 'G') return Container::Png;
  if (got >= 3 && head[0] == 0xFF && head[1] == 0xD8 && head[2] == 0xFF) return Container::Jpeg;
  if (got >= 4 && ((head[0] == 'I' && head[1] == 'I' && head[2] == 42 && head[3] == 0) ||
                   (head[0] == 'M' && head[1] == 'M' && head[2] == 0 && head[3] == 42))) {
    return Container::Tiff;
  }
  return Container::Unknown;
}

}  // namespace

RasterImage load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw InputError("cannot read image '" + path.string() + "': not a regular file");
  }
  if (sniff(path) == Container::Unknown) {
    throw InputError("unsupported image format: '" + path.string() + "' (expected PNG, JPEG or TIFF)");
  }

  const cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw InputError("failed to decode image '" + path.string() + "'");
  if (mat.rows <= 0 || mat.cols <= 0) throw InputError("image '" + path.string() + "' has zero size");

  const int w = mat.cols;
  const int h = mat.rows;
  const std::size_t n = static_cast<std::size_t>(w) * h;

  switch (mat.type()) {
    case CV_8UC1: {
      std::vector<std::uint16_t> px(n);
      for (int y = 0; y < h; ++y) {
        const auto* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < w; ++x) px[static_cast<std::size_t>(y) * w + x] = row[x];
      }
      return RasterImage(w, h, PixelFormat::Gray8, std::move(px));
    }
    case CV_16UC1: {
      std::vector<std::uint16_t> px(n);
      for (int y = 0; y < h; ++y) {
        const auto* row = mat.ptr<std::uint16_t>(y);
        for (int x = 0; x < w; ++x) px[static_cast<std::size_t>(y) * w + x] = row[x];
      }
      return RasterImage(w, h, PixelFormat::Gray16, std::move(px));
    }
    case CV_8UC3:
    case CV_8UC4: {
      const int cn = mat.channels();
      std::vector<std::uint16_t> px(n * 3);
      for (int y = 0; y < h; ++y) {
        const auto* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < w; ++x) {
          const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
          // OpenCV decodes to BGR(A); alpha is dropped.
          px[o + 0] = row[x * cn + 2];
          px[o + 1] = row[x * cn + 1];
          px[o + 2] = row[x * cn + 0];
        }
      }
      return RasterImage(w, h, PixelFormat::Rgb8, std::move(px));
    }
    default:
      throw InputError("unsupported pixel layout in '" + path.string() + "' (channels=" +
                       std::to_string(mat.channels()) + ", depth code=" + std::to_string(mat.depth()) + ")");
  }
}

void save_png(const std::filesystem::path& path, const RasterImage& image) {
  const int w = image.width();
  const int h = image.height();
  cv::Mat mat;
  switch (image.format()) {
    case PixelFormat::Gray8:
      mat.create(h, w, CV_8UC1);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) mat.at<std::uint8_t>(y, x) = static_cast<std::uint8_t>(image.at(x, y));
      break;
    case PixelFormat::Gray16:
      mat.create(h, w, CV_16UC1);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) mat.at<std::uint16_t>(y, x) = image.at(x, y);
      break;
    case PixelFormat::Rgb8:
      mat.create(h, w, CV_8UC3);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          auto& px = mat.at<cv::Vec3b>(y, x);
          px[0] = static_cast<std::uint8_t>(image.at(x, y, 2));
          px[1] = static_cast<std::uint8_t>(image.at(x, y, 1));
          px[2] = static_cast<std::uint8_t>(image.at(x, y, 0));
        }
      break;
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat, {cv::IMWRITE_PNG_COMPRESSION, 6});
  } catch (const cv::Exception& e) {
    throw InputError("failed to write '" + path.string() + "': " + e.what());
  }
  if (!ok) throw InputError("failed to write '" + path.string() + "'");
}

}  // namespace artauth
