#include "memlab/io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "memlab/errors.hpp"
#include "memlab/version.hpp"

namespace memlab {

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, std::uint64_t config_hash,
                     std::uint64_t seed, const std::vector<std::string>& columns)
    : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary);
  if (!impl_->out) raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  char hdr[64];
  std::snprintf(hdr, sizeof(hdr), "%016llx",
                static_cast<unsigned long long>(config_hash));
  impl_->out << "# membranelab " << kToolVersion << " config=" << hdr
             << " seed=" << seed << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    impl_->out << (i ? "," : "") << columns[i];
  impl_->out << "\n";
}

CsvWriter::~CsvWriter() {
  delete impl_;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    impl_->out << (i ? "," : "") << cells[i];
  impl_->out << "\n";
}

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
std::string CsvWriter::num(std::int64_t v) { return std::to_string(v); }

namespace {

constexpr char kMagic[8] = {'M', 'L', 'B', 'N', 'D', 'L', '0', '1'};

void put_u64(std::ofstream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), 8);
}
std::uint64_t get_u64(std::ifstream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 8);
  return v;
}
void put_vec(std::ofstream& out, const Eigen::VectorXd& v) {
  put_u64(out, static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * 8));
}
Eigen::VectorXd get_vec(std::ifstream& in) {
  std::uint64_t n = get_u64(in);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * 8));
  return v;
}
void put_mat(std::ofstream& out, const Eigen::MatrixXd& m) {
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(m.size() * 8));
}
Eigen::MatrixXd get_mat(std::ifstream& in) {
  std::uint64_t r = get_u64(in), c = get_u64(in);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * 8));
  return m;
}

}  // namespace

void write_bundles(const std::string& path, const BundleFileHeader& header,
                   const std::vector<PathBundle>& bundles) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out.write(kMagic, 8);
  put_u64(out, header.config_hash);
  put_u64(out, header.seed);
  put_vec(out, header.grid);
  put_u64(out, bundles.size());
  for (const PathBundle& b : bundles) {
    put_vec(out, b.times);
    put_vec(out, b.x);
    put_mat(out, b.y);
    put_vec(out, b.local_time_total);
    put_vec(out, b.ltime_beta);
    put_mat(out, b.ltime_theta);
    put_vec(out, b.ltime_gamma);
    put_vec(out, b.a_functional);
    put_mat(out, b.per_membrane_l);
    put_u64(out, b.escaped_window ? 1 : 0);
  }
}

std::vector<PathBundle> read_bundles(const std::string& path,
                                     BundleFileHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    raise(ErrorCode::IoError, "'" + path + "' is not a bundle file");
  BundleFileHeader hdr;
  hdr.config_hash = get_u64(in);
  hdr.seed = get_u64(in);
  hdr.grid = get_vec(in);
  std::uint64_t n = get_u64(in);
  std::vector<PathBundle> out(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    PathBundle& b = out[i];
    b.times = get_vec(in);
    b.x = get_vec(in);
    b.y = get_mat(in);
    b.local_time_total = get_vec(in);
    b.ltime_beta = get_vec(in);
    b.ltime_theta = get_mat(in);
    b.ltime_gamma = get_vec(in);
    b.a_functional = get_vec(in);
    b.per_membrane_l = get_mat(in);
    b.escaped_window = get_u64(in) != 0;
  }
  if (!in) raise(ErrorCode::IoError, "truncated bundle file '" + path + "'");
  if (header) *header = hdr;
  return out;
}

void Verdict::add(const std::string& name, double value, double threshold,
                  const std::string& comparator, bool pass,
                  const std::string& detail) {
  items.push_back({name, value, threshold, comparator, pass, detail});
}

void write_verdict(const std::string& path, const Verdict& verdict,
                   std::uint64_t config_hash, std::uint64_t seed,
                   const std::string& scenario) {
  nlohmann::ordered_json j;
  char hdr[32];
  std::snprintf(hdr, sizeof(hdr), "%016llx",
                static_cast<unsigned long long>(config_hash));
  j["tool_version"] = kToolVersion;
  j["scenario"] = scenario;
  j["config_hash"] = hdr;
  j["seed"] = seed;
  j["pass"] = verdict.all_pass();
  j["assertions"] = nlohmann::ordered_json::array();
  for (const VerdictItem& item : verdict.items) {
    nlohmann::ordered_json a;
    a["name"] = item.name;
    a["value"] = item.value;
    a["threshold"] = item.threshold;
    a["comparator"] = item.comparator;
    a["pass"] = item.pass;
    if (!item.detail.empty()) a["detail"] = item.detail;
    j["assertions"].push_back(a);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

void write_run_log(const std::string& path, const std::string& scenario,
                   std::uint64_t config_hash, std::uint64_t seed,
                   const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  char hdr[32];
  std::snprintf(hdr, sizeof(hdr), "%016llx",
                static_cast<unsigned long long>(config_hash));
  out << "membranelab " << kToolVersion << " scenario=" << scenario
      << " config=" << hdr << " seed=" << seed << "\n";
  for (const std::string& l : lines) out << l << "\n";
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) raise(ErrorCode::IoError, "cannot create directory '" + path + "'");
}

}  // namespace memlab
