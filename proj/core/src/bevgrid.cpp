#include "oslk/bevgrid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "oslk/error.hpp"

namespace oslk {

namespace {

void check_calibration(const GridCalibration& calib) {
  if (!std::isfinite(calib.origin_x) || !std::isfinite(calib.origin_y)) {
    throw InvalidInput("grid origin must be finite");
  }
  if (!(std::isfinite(calib.resolution) && calib.resolution > 0.0)) {
    throw InvalidInput("grid resolution must be > 0");
  }
}

// Min-max normalization into [0, 1]; a flat input maps to zeros.
std::vector<double> min_max(std::vector<double> v) {
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  if (!(range > 0.0)) {
    std::fill(v.begin(), v.end(), 0.0);
    return v;
  }
  for (double& x : v) x = std::clamp((x - lo) / range, 0.0, 1.0);
  return v;
}

double lerp(double a, double b, double t) { return a + t * (b - a); }

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xFFu));
  }
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  if (pos + sizeof(U) > bytes.size()) throw IoError("BEVG: truncated data");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bits |= static_cast<U>(bytes[pos + i]) << (8 * i);
  }
  pos += sizeof(U);
  return std::bit_cast<T>(bits);
}

constexpr std::uint8_t kMagic[4] = {0x42, 0x45, 0x56, 0x47};
constexpr std::size_t kHeaderBytes = 4 + 3 * 4 + 3 * 8;

}  // namespace

BevGrid::BevGrid(std::size_t channels, std::size_t height, std::size_t width,
                 GridCalibration calib, std::vector<float> data)
    : channels_(channels), height_(height), width_(width), calib_(calib),
      data_(std::move(data)) {
  if (channels_ == 0 || height_ == 0 || width_ == 0) {
    throw InvalidInput("BevGrid: dimensions must be >= 1");
  }
  check_calibration(calib_);
  if (data_.size() != channels_ * height_ * width_) {
    throw InvalidInput("BevGrid: data size " + std::to_string(data_.size()) +
                       " does not match C*H*W");
  }
  for (float v : data_) {
    if (!std::isfinite(v)) throw InvalidInput("BevGrid: non-finite value");
  }
}

ResponseMap::ResponseMap(std::size_t height, std::size_t width,
                         GridCalibration calib, std::vector<double> data)
    : height_(height), width_(width), calib_(calib), data_(std::move(data)) {
  if (height_ == 0 || width_ == 0) throw InvalidInput("ResponseMap: empty shape");
  check_calibration(calib_);
  if (data_.size() != height_ * width_) {
    throw InvalidInput("ResponseMap: data size does not match H*W");
  }
  for (double v : data_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidInput("ResponseMap: value outside [0, 1]");
    }
  }
}

double ResponseMap::sample_cell(double row, double col) const {
  row = std::clamp(row, 0.0, static_cast<double>(height_ - 1));
  col = std::clamp(col, 0.0, static_cast<double>(width_ - 1));
  const auto r0 = static_cast<std::size_t>(std::floor(row));
  const auto c0 = static_cast<std::size_t>(std::floor(col));
  const std::size_t r1 = std::min(r0 + 1, height_ - 1);
  const std::size_t c1 = std::min(c0 + 1, width_ - 1);
  const double fr = row - static_cast<double>(r0);
  const double fc = col - static_cast<double>(c0);
  const double top = lerp(at(r0, c0), at(r0, c1), fc);
  const double bottom = lerp(at(r1, c0), at(r1, c1), fc);
  return lerp(top, bottom, fr);
}

double ResponseMap::sample_world(double wx, double wy) const {
  return sample_cell((wy - calib_.origin_y) / calib_.resolution,
                     (wx - calib_.origin_x) / calib_.resolution);
}

ResponseMap reduce_mean(const BevGrid& grid) {
  const std::size_t cells = grid.height() * grid.width();
  const std::size_t channels = grid.channels();
  std::vector<double> mean(cells, 0.0);
  const auto data = grid.data();
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t k = 0; k < cells; ++k) mean[k] += data[c * cells + k];
  }
  for (double& m : mean) m /= static_cast<double>(channels);
  return {grid.height(), grid.width(), grid.calibration(), min_max(std::move(mean))};
}

ResponseMap reduce_pca(const BevGrid& grid) {
  const std::size_t cells = grid.height() * grid.width();
  const std::size_t channels = grid.channels();
  if (cells < 2) throw InvalidInput("reduce_pca: need at least two cells");

  const auto data = grid.data();
  // samples: cells x channels
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(cells),
                          static_cast<Eigen::Index>(channels));
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t k = 0; k < cells; ++k) {
      samples(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) =
          data[c * cells + k];
    }
  }
  const Eigen::RowVectorXd mu = samples.colwise().mean();
  const Eigen::MatrixXd centered = samples.rowwise() - mu;
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(cells);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw InvariantViolation("reduce_pca: eigendecomposition failed");
  }
  // Eigenvalues ascend; the last column is the principal axis.
  Eigen::VectorXd axis = solver.eigenvectors().col(static_cast<Eigen::Index>(channels) - 1);

  Eigen::VectorXd projection = centered * axis;
  const double along_mean = axis.sum();
  if (std::fabs(along_mean) > 1e-12) {
    if (along_mean < 0.0) projection = -projection;
  } else {
    const Eigen::VectorXd channel_mean = samples.rowwise().mean();
    Eigen::Index anchor = 0;
    channel_mean.cwiseAbs().maxCoeff(&anchor);
    if (projection(anchor) < 0.0) projection = -projection;
  }

  std::vector<double> values(projection.data(), projection.data() + projection.size());
  return {grid.height(), grid.width(), grid.calibration(), min_max(std::move(values))};
}

ResponseMap reduce(const BevGrid& grid, Reduction method) {
  return method == Reduction::kPca ? reduce_pca(grid) : reduce_mean(grid);
}

double window_response(const ResponseMap& map, const Box3D& box, WindowOptions opts) {
  // Lattice extents: a along the heading, b across it.
  const auto count = [](double extent) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(extent));
  };
  const std::size_t n_a = opts.literal_eq6 ? count(box.w) : count(box.l);
  const std::size_t n_b = opts.literal_eq6 ? count(box.l) : count(box.w);
  const auto offset = [&](std::size_t k, std::size_t n) {
    return opts.corner_anchor ? static_cast<double>(k + 1)
                              : static_cast<double>(k) - 0.5 * static_cast<double>(n - 1);
  };

  const double c = std::cos(box.r);
  const double s = std::sin(box.r);
  double sum = 0.0;
  for (std::size_t ka = 0; ka < n_a; ++ka) {
    const double i = offset(ka, n_a);
    for (std::size_t kb = 0; kb < n_b; ++kb) {
      const double j = offset(kb, n_b);
      const double wx = box.x + i * c - j * s;
      const double wy = opts.literal_eq6 ? box.y + i * c + j * s
                                         : box.y + i * s + j * c;
      sum += map.sample_world(wx, wy);
    }
  }
  return std::clamp(sum / static_cast<double>(n_a * n_b), 0.0, 1.0);
}

double joint_score(double s_obj_pred, double s_fea) {
  if (!(s_obj_pred >= 0.0 && s_obj_pred <= 1.0)) {
    throw InvalidInput("joint_score: s_obj outside [0, 1]");
  }
  if (!(s_fea >= 0.0 && s_fea <= 1.0)) {
    throw InvalidInput("joint_score: s_fea outside [0, 1]");
  }
  return s_obj_pred * (1.0 - s_fea);
}

std::vector<std::uint8_t> encode_bevg(const BevGrid& grid) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + grid.data().size() * 4);
  for (std::uint8_t b : kMagic) out.push_back(b);
  const auto as_u32 = [](std::size_t v) {
    if (v > std::numeric_limits<std::uint32_t>::max()) {
      throw InvalidInput("BEVG: dimension exceeds u32");
    }
    return static_cast<std::uint32_t>(v);
  };
  put_le(out, as_u32(grid.channels()));
  put_le(out, as_u32(grid.height()));
  put_le(out, as_u32(grid.width()));
  put_le(out, grid.calibration().origin_x);
  put_le(out, grid.calibration().origin_y);
  put_le(out, grid.calibration().resolution);
  for (float v : grid.data()) put_le(out, v);
  return out;
}

BevGrid decode_bevg(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw IoError("BEVG: bad magic or short header");
  }
  std::size_t pos = 4;
  const auto c = get_le<std::uint32_t>(bytes, pos);
  const auto h = get_le<std::uint32_t>(bytes, pos);
  const auto w = get_le<std::uint32_t>(bytes, pos);
  GridCalibration calib;
  calib.origin_x = get_le<double>(bytes, pos);
  calib.origin_y = get_le<double>(bytes, pos);
  calib.resolution = get_le<double>(bytes, pos);
  const std::uint64_t n = std::uint64_t{c} * h * w;
  if (bytes.size() - pos != n * 4) {
    throw IoError("BEVG: payload holds " + std::to_string(bytes.size() - pos) +
                  " bytes, header implies " + std::to_string(n * 4));
  }
  std::vector<float> data;
  data.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) data.push_back(get_le<float>(bytes, pos));
  return BevGrid(c, h, w, calib, std::move(data));
}

void write_bevg(const std::filesystem::path& path, const BevGrid& grid) {
  const auto bytes = encode_bevg(grid);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

BevGrid read_bevg(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_bevg(bytes);
  } catch (const std::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace oslk
