#include "divexplore/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace divexplore {

VisitationGrid::VisitationGrid(int width, int height)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("VisitationGrid: dimensions must be positive");
  counts_.assign(static_cast<std::size_t>(width) * height, 0);
}

std::uint64_t VisitationGrid::at(int row, int col) const {
  if (row < 0 || row >= height_ || col < 0 || col >= width_)
    throw std::out_of_range("VisitationGrid::at: cell out of bounds");
  return counts_[static_cast<std::size_t>(row) * width_ + col];
}

void VisitationGrid::record_visit(int row, int col) {
  if (row < 0 || row >= height_ || col < 0 || col >= width_)
    throw std::out_of_range("VisitationGrid::record_visit: cell out of bounds");
  ++counts_[static_cast<std::size_t>(row) * width_ + col];
  ++total_;
}

double VisitationGrid::coverage() const {
  const auto visited = std::count_if(counts_.begin(), counts_.end(),
                                     [](std::uint64_t c) { return c > 0; });
  return static_cast<double>(visited) / static_cast<double>(counts_.size());
}

void VisitationGrid::export_heatmap(std::ostream& out) const {
  const std::uint64_t max_count = counts_.empty()
      ? 0 : *std::max_element(counts_.begin(), counts_.end());
  out << "P5\n" << width_ << " " << height_ << "\n255\n";
  const double denom = max_count > 0 ? std::log1p(static_cast<double>(max_count)) : 1.0;
  for (std::uint64_t count : counts_) {
    const double intensity = max_count > 0
        ? 255.0 * std::log1p(static_cast<double>(count)) / denom : 0.0;
    out.put(static_cast<char>(static_cast<int>(std::lround(intensity))));
  }
}

void VisitationGrid::export_heatmap(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open heatmap for write: " + path);
  export_heatmap(out);
  if (!out) throw std::runtime_error("heatmap write failed: " + path);
}

std::vector<std::uint8_t> load_pgm(const std::string& path, int* width, int* height) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open pgm: " + path);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P5" || w <= 0 || h <= 0 || maxval != 255)
    throw std::runtime_error("bad pgm header: " + path);
  in.get();  // single whitespace after maxval
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(pixels.size()))
    throw std::runtime_error("truncated pgm: " + path);
  if (width) *width = w;
  if (height) *height = h;
  return pixels;
}

void RewardLog::push(const EpisodeRecord& rec) {
  if (!records_.empty() && rec.episode <= records_.back().episode)
    throw std::invalid_argument("RewardLog: episode indices must strictly increase");
  records_.push_back(rec);
}

double RewardLog::mean_last_n(std::size_t n) const {
  if (records_.empty()) throw std::logic_error("RewardLog: empty log");
  const std::size_t count = std::min(n, records_.size());
  double sum = 0.0;
  for (std::size_t i = records_.size() - count; i < records_.size(); ++i)
    sum += records_[i].total_reward;
  return sum / static_cast<double>(count);
}

namespace {
std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}
}  // namespace

void RewardLog::write_csv(std::ostream& out) const {
  out << "episode,total_reward,steps,wall_ms\n";
  for (const EpisodeRecord& rec : records_)
    out << rec.episode << "," << format_double(rec.total_reward) << ","
        << rec.steps << "," << rec.wall_ms << "\n";
}

void RewardLog::write_csv_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open csv for write: " + path);
  write_csv(out);
  if (!out) throw std::runtime_error("csv write failed: " + path);
}

}  // namespace divexplore
