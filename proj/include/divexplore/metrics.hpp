#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace divexplore {

/// Per-cell visit tallies for a gridworld run.
class VisitationGrid {
 public:
  VisitationGrid(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint64_t at(int row, int col) const;
  std::uint64_t total() const { return total_; }

  void record_visit(int row, int col);

  /// Fraction of cells visited at least once.
  double coverage() const;

  /// Binary PGM (P5, maxval 255), one pixel per cell, intensity
  /// round(255 * log(1+count) / log(1+max)); all-black when nothing visited.
  void export_heatmap(const std::string& path) const;
  void export_heatmap(std::ostream& out) const;

 private:
  int width_;
  int height_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Parses a P5 heatmap back into intensities (test support for round-trips).
std::vector<std::uint8_t> load_pgm(const std::string& path, int* width, int* height);

struct EpisodeRecord {
  int episode = 0;
  double total_reward = 0.0;
  long steps = 0;
  long wall_ms = 0;
};

/// Ordered per-episode log; episode indices strictly increase.
class RewardLog {
 public:
  void push(const EpisodeRecord& rec);
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<EpisodeRecord>& records() const { return records_; }

  /// Mean total reward over the last min(n, size) episodes.
  double mean_last_n(std::size_t n = 10) const;

  /// CSV with header `episode,total_reward,steps,wall_ms`, LF endings.
  void write_csv(std::ostream& out) const;
  void write_csv_file(const std::string& path) const;

 private:
  std::vector<EpisodeRecord> records_;
};

}  // namespace divexplore
