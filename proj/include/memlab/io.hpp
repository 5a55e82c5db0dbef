#ifndef MEMLAB_IO_HPP
#define MEMLAB_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "memlab/path_bundle.hpp"

namespace memlab {

// CSV table with a fixed-format header echoing config hash and tool version.
// Reproducibility-sensitive numeric cells print with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::uint64_t config_hash,
            std::uint64_t seed, const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& cells);
  static std::string num(double v);   // 17 significant digits
  static std::string num(std::int64_t v);

 private:
  struct Impl;
  Impl* impl_;
};

// Columnar binary bundle container: a fixed header (magic, version, config
// hash, seed, grid) followed by one block per path.
struct BundleFileHeader {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  Eigen::VectorXd grid;
};

void write_bundles(const std::string& path, const BundleFileHeader& header,
                   const std::vector<PathBundle>& bundles);
std::vector<PathBundle> read_bundles(const std::string& path,
                                     BundleFileHeader* header = nullptr);

// Machine-readable verdict: one named assertion per line plus an overall
// flag; written as JSON.
struct VerdictItem {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparator;  // "<=", ">=", "in", "monotone-decreasing"
  bool pass = false;
  std::string detail;
};

struct Verdict {
  std::vector<VerdictItem> items;
  bool all_pass() const {
    for (const auto& i : items)
      if (!i.pass) return false;
    return true;
  }
  void add(const std::string& name, double value, double threshold,
           const std::string& comparator, bool pass,
           const std::string& detail = "");
};

void write_verdict(const std::string& path, const Verdict& verdict,
                   std::uint64_t config_hash, std::uint64_t seed,
                   const std::string& scenario);

void write_run_log(const std::string& path, const std::string& scenario,
                   std::uint64_t config_hash, std::uint64_t seed,
                   const std::vector<std::string>& lines);

void ensure_directory(const std::string& path);

}  // namespace memlab

#endif  // MEMLAB_IO_HPP
