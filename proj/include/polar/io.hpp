#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "polar/construction.hpp"
#include "polar/version.hpp"

namespace polar::io {

class Sha1 {
 public:
  Sha1() { reset(); }

  void reset() {
    h_[0] = 0x67452301u;
    h_[1] = 0xEFCDAB89u;
    h_[2] = 0x98BADCFEu;
    h_[3] = 0x10325476u;
    h_[4] = 0xC3D2E1F0u;
    fill_ = 0;
    total_ = 0;
  }

  void update(const void* data, std::size_t len) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    total_ += len;
    while (len > 0) {
      std::size_t take = std::min(len, std::size_t(64) - fill_);
      std::copy(p, p + take, buf_ + fill_);
      fill_ += take;
      p += take;
      len -= take;
      if (fill_ == 64) {
        process();
        fill_ = 0;
      }
    }
  }

  std::string hex_digest() {
    std::uint64_t bits = total_ * 8;
    const std::uint8_t pad = 0x80, zero = 0;
    update(&pad, 1);
    while (fill_ != 56) update(&zero, 1);
    std::uint8_t lenb[8];
    for (int i = 0; i < 8; ++i) lenb[i] = std::uint8_t(bits >> (56 - 8 * i));
    update(lenb, 8);
    char out[41];
    for (int i = 0; i < 5; ++i) std::snprintf(out + 8 * i, 9, "%08x", h_[i]);
    return std::string(out, 40);
  }

 private:
  static std::uint32_t rotl(std::uint32_t v, int s) { return (v << s) | (v >> (32 - s)); }

  void process() {
    std::uint32_t w[80];
    for (int t = 0; t < 16; ++t)
      w[t] = (std::uint32_t(buf_[4 * t]) << 24) | (std::uint32_t(buf_[4 * t + 1]) << 16) |
             (std::uint32_t(buf_[4 * t + 2]) << 8) | std::uint32_t(buf_[4 * t + 3]);
    for (int t = 16; t < 80; ++t)
      w[t] = rotl(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1);
    std::uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3], e = h_[4];
    for (int t = 0; t < 80; ++t) {
      std::uint32_t f, k;
      if (t < 20) {
        f = (b & c) | (~b & d);
        k = 0x5A827999u;
      } else if (t < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1u;
      } else if (t < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDCu;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6u;
      }
      std::uint32_t tmp = rotl(a, 5) + f + e + k + w[t];
      e = d;
      d = c;
      c = rotl(b, 30);
      b = a;
      a = tmp;
    }
    h_[0] += a;
    h_[1] += b;
    h_[2] += c;
    h_[3] += d;
    h_[4] += e;
  }

  std::uint32_t h_[5];
  std::uint8_t buf_[64];
  std::size_t fill_ = 0;
  std::uint64_t total_ = 0;
};

inline std::string sha1_hex(std::string_view s) {
  Sha1 h;
  h.update(s.data(), s.size());
  return h.hex_digest();
}

inline std::string fmt_g(double v) {
  if (v == 0.0) v = 0.0;  // keep negative zero out of the tables
  char b[40];
  std::snprintf(b, sizeof b, "%.12g", v);
  return b;
}

inline std::string fmt_full(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

inline std::string canonical_payload(const PolarCodeSpec& code) {
  std::ostringstream os;
  os << "n=" << code.n << ";K=" << code.k << ";method=" << method_name(code.method)
     << ";design_snr_db=" << fmt_full(code.design_snr_db) << ";info_set=";
  for (std::size_t i = 0; i < code.info_set.size(); ++i) {
    if (i) os << ',';
    os << code.info_set[i];
  }
  return os.str();
}

inline void write_code_spec(const std::filesystem::path& path, const PolarCodeSpec& code,
                            const std::string& args_echo) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["tool"] = "polar-toolkit " POLAR_TOOLKIT_VERSION;
  j["args"] = args_echo;
  j["content_sha1"] = sha1_hex(canonical_payload(code));
  j["n"] = code.n;
  j["N"] = code.block_size();
  j["K"] = code.k;
  j["method"] = method_name(code.method);
  j["design_snr_db"] = code.design_snr_db;
  j["info_set"] = code.info_set;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

inline PolarCodeSpec read_code_spec(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open spec file " + path.string());
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt spec file " + path.string() + ": " + e.what());
  }
  PolarCodeSpec code;
  try {
    if (j.at("format_version").get<int>() != 1)
      throw std::runtime_error("unsupported format_version");
    code.n = j.at("n").get<int>();
    code.k = j.at("K").get<std::uint32_t>();
    code.method = method_from_name(j.at("method").get<std::string>());
    code.design_snr_db = j.at("design_snr_db").get<double>();
    code.info_set = j.at("info_set").get<std::vector<std::uint32_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt spec file " + path.string() + ": " + e.what());
  }
  if (code.n < 1 || code.n > 22)
    throw std::runtime_error("spec file " + path.string() + ": n out of range");
  const std::size_t N = code.block_size();
  if (code.info_set.size() != code.k)
    throw std::runtime_error("spec file " + path.string() + ": |info_set| != K");
  for (std::size_t i = 0; i < code.info_set.size(); ++i) {
    if (code.info_set[i] >= N || (i > 0 && code.info_set[i] <= code.info_set[i - 1]))
      throw std::runtime_error("spec file " + path.string() +
                               ": info_set must be ascending and in range");
  }
  return code;
}

// one-shot CSV: '#' header comments carry tool version, argument echo and a
// content hash over the column line plus all data rows
class CsvWriter {
 public:
  CsvWriter(std::string table, std::string args_echo, std::string columns)
      : table_(std::move(table)), args_(std::move(args_echo)), columns_(std::move(columns)) {}

  void add_row(std::string row) {
    payload_ += row;
    payload_ += '\n';
  }

  std::string render() const {
    std::string payload = columns_ + '\n' + payload_;
    std::string out = "# polar-toolkit " POLAR_TOOLKIT_VERSION " " + table_ + " format 1\n";
    out += "# args: " + args_ + '\n';
    out += "# content-sha1: " + sha1_hex(payload) + '\n';
    out += payload;
    return out;
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << render();
  }

 private:
  std::string table_, args_, columns_, payload_;
};

// appendable campaign log: the hash covers the configuration (args + columns)
// so resumed runs can keep appending rows under the same header
inline void append_campaign_rows(const std::filesystem::path& path, const std::string& args_echo,
                                 const std::string& columns,
                                 const std::vector<std::string>& rows) {
  bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  if (fresh) {
    f << "# polar-toolkit " POLAR_TOOLKIT_VERSION " campaign format 1\n";
    f << "# args: " << args_echo << '\n';
    f << "# config-sha1: " << sha1_hex(args_echo + '\n' + columns) << '\n';
    f << columns << '\n';
  }
  for (const auto& r : rows) f << r << '\n';
}

}  // namespace polar::io
