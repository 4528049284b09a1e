#include "orpam/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "orpam/error.hpp"

namespace orpam::io {

namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
            std::conditional_t<sizeof(T) == 2, std::uint16_t,
            std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* p) {
  using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
            std::conditional_t<sizeof(T) == 2, std::uint16_t,
            std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(static_cast<U>(p[i]) << (8 * i));
  return std::bit_cast<T>(bits);
}

[[noreturn]] void format_error(const std::string& what) { throw Error(ErrorCode::kFormat, what); }

}  // namespace

SampleType parse_sample_type(std::string_view s) {
  if (s == "f32" || s == "float32") return SampleType::kFloat32;
  if (s == "f64" || s == "float64") return SampleType::kFloat64;
  throw Error(ErrorCode::kParameter, "unknown sample type '" + std::string(s) + "' (f32|f64)");
}

const char* to_string(SampleType t) { return t == SampleType::kFloat64 ? "f64" : "f32"; }

std::vector<std::uint8_t> encode_volume(const Volume& v, SampleType dtype) {
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (v.nx > kMax || v.ny > kMax || v.nt > kMax) format_error("volume dimensions exceed 32 bits");
  if (v.data.size() != v.nx * v.ny * v.nt) format_error("volume data size does not match its dimensions");
  std::vector<std::uint8_t> out;
  const std::size_t bytes = dtype == SampleType::kFloat64 ? 8 : 4;
  out.reserve(kHeaderSize + v.data.size() * bytes);
  for (char c : kMagic) out.push_back(static_cast<std::uint8_t>(c));
  put_le<std::uint16_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(v.nx));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(v.ny));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(v.nt));
  put_le<double>(out, v.sampling_rate);
  put_le<double>(out, v.pitch);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(dtype));
  if (dtype == SampleType::kFloat64) {
    for (double x : v.data) put_le<double>(out, x);
  } else {
    for (double x : v.data) put_le<float>(out, static_cast<float>(x));
  }
  return out;
}

VolumeFileHeader decode_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) format_error("file shorter than the 35-byte header");
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) format_error("bad magic, not an ORPA volume");
  VolumeFileHeader h;
  const std::uint8_t* p = bytes.data();
  h.version = get_le<std::uint16_t>(p + 4);
  if (h.version != kVersion) format_error("unsupported volume version " + std::to_string(h.version));
  h.nx = get_le<std::uint32_t>(p + 6);
  h.ny = get_le<std::uint32_t>(p + 10);
  h.nt = get_le<std::uint32_t>(p + 14);
  h.fs = get_le<double>(p + 18);
  h.pitch = get_le<double>(p + 26);
  const std::uint8_t code = p[34];
  if (code > 1) format_error("unsupported dtype code " + std::to_string(code));
  h.dtype = static_cast<SampleType>(code);
  if (!(h.fs > 0.0) || !std::isfinite(h.fs)) format_error("header sampling rate must be positive");
  return h;
}

Volume decode_volume(std::span<const std::uint8_t> bytes, VolumeFileHeader* header) {
  const VolumeFileHeader h = decode_header(bytes);
  if (bytes.size() - kHeaderSize != h.payload_bytes()) {
    std::ostringstream msg;
    msg << "payload is " << bytes.size() - kHeaderSize << " bytes, header implies " << h.payload_bytes();
    format_error(msg.str());
  }
  Volume v(h.nx, h.ny, h.nt, h.fs, h.pitch);
  const std::uint8_t* p = bytes.data() + kHeaderSize;
  if (h.dtype == SampleType::kFloat64) {
    for (std::size_t i = 0; i < v.data.size(); ++i) v.data[i] = get_le<double>(p + 8 * i);
  } else {
    for (std::size_t i = 0; i < v.data.size(); ++i) v.data[i] = get_le<float>(p + 4 * i);
  }
  if (header) *header = h;
  return v;
}

namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read error on '" + path.string() + "'");
  return bytes;
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write error on '" + path.string() + "'");
}

}  // namespace

void write_volume(const std::filesystem::path& path, const Volume& v, SampleType dtype) {
  write_bytes(path, encode_volume(v, dtype));
}

Volume read_volume(const std::filesystem::path& path, VolumeFileHeader* header) {
  return decode_volume(read_bytes(path), header);
}

VolumeFileHeader read_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes(kHeaderSize);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(kHeaderSize));
  bytes.resize(static_cast<std::size_t>(in.gcount()));
  return decode_header(bytes);
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  write_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::string read_text(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  return {bytes.begin(), bytes.end()};
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// shortest form that reads back to the same double
std::string fmt_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw Error(ErrorCode::kParameter, "config key '" + key + "': '" + v + "' is not a number");
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw Error(ErrorCode::kParameter, "config key '" + key + "': '" + v + "' is not a non-negative integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::kParameter, "config key '" + key + "': '" + v + "' is not a boolean");
}

using Setter = void (*)(RunConfig&, const std::string& key, const std::string& value);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"method", [](RunConfig& c, const std::string&, const std::string& v) { c.recon.method = parse_method(v); }},
      {"f_lo", [](RunConfig& c, const std::string& k, const std::string& v) { c.recon.f_lo = to_double(k, v); }},
      {"f_hi", [](RunConfig& c, const std::string& k, const std::string& v) { c.recon.f_hi = to_double(k, v); }},
      {"full_band", [](RunConfig& c, const std::string& k, const std::string& v) { c.recon.full_band = to_bool(k, v); }},
      {"subband_length",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "auto") c.recon.subband_length.reset();
         else c.recon.subband_length = static_cast<std::size_t>(to_uint(k, v));
       }},
      {"loading", [](RunConfig& c, const std::string& k, const std::string& v) { c.recon.loading = to_double(k, v); }},
      {"subspace_threshold",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.recon.subspace_threshold = to_double(k, v); }},
      {"fixed_num",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "none") c.recon.fixed_num.reset();
         else c.recon.fixed_num = static_cast<std::size_t>(to_uint(k, v));
       }},
      {"renormalize_eibmv",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.recon.renormalize_eibmv = to_bool(k, v); }},
      {"forward_backward",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.recon.forward_backward = to_bool(k, v); }},
      {"output", [](RunConfig& c, const std::string&, const std::string& v) { c.recon.output = parse_output_kind(v); }},
      {"sound_speed", [](RunConfig& c, const std::string& k, const std::string& v) { c.recon.sound_speed = to_double(k, v); }},
      {"oversample",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.recon.oversample = static_cast<std::size_t>(to_uint(k, v)); }},
      {"covariance_reuse",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.recon.covariance_reuse = to_bool(k, v); }},
      {"input_path", [](RunConfig& c, const std::string&, const std::string& v) { c.input_path = v; }},
      {"output_path", [](RunConfig& c, const std::string&, const std::string& v) { c.output_path = v; }},
      {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_uint(k, v); }},
      {"workers",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.workers = static_cast<std::size_t>(to_uint(k, v)); }},
  };
  return table;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> run_config_keys() {
  RunConfig defaults;
  defaults.workers = default_worker_count();
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(format_run_config(defaults));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos || line.starts_with("#")) continue;
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

RunConfig parse_run_config(std::string_view text, RunConfig base) {
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::kParameter, "config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw Error(ErrorCode::kParameter, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second)
      throw Error(ErrorCode::kParameter, "config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    it->second(base, key, value);
  }
  return base;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  return parse_run_config(read_text(path), std::move(base));
}

std::string format_run_config(const RunConfig& c) {
  const ReconstructionConfig& r = c.recon;
  std::ostringstream o;
  o << "# orpam run configuration\n";
  o << "method = " << to_string(r.method) << "\n";
  o << "f_lo = " << fmt_double(r.f_lo) << "\n";
  o << "f_hi = " << fmt_double(r.f_hi) << "\n";
  o << "full_band = " << (r.full_band ? "true" : "false") << "\n";
  o << "subband_length = " << (r.subband_length ? std::to_string(*r.subband_length) : "auto") << "\n";
  o << "loading = " << fmt_double(r.loading) << "\n";
  o << "subspace_threshold = " << fmt_double(r.subspace_threshold) << "\n";
  o << "fixed_num = " << (r.fixed_num ? std::to_string(*r.fixed_num) : "none") << "\n";
  o << "renormalize_eibmv = " << (r.renormalize_eibmv ? "true" : "false") << "\n";
  o << "forward_backward = " << (r.forward_backward ? "true" : "false") << "\n";
  o << "output = " << to_string(r.output) << "\n";
  o << "sound_speed = " << fmt_double(r.sound_speed) << "\n";
  o << "oversample = " << r.oversample << "\n";
  o << "covariance_reuse = " << (r.covariance_reuse ? "true" : "false") << "\n";
  o << "input_path = " << c.input_path << "\n";
  o << "output_path = " << c.output_path << "\n";
  o << "seed = " << c.seed << "\n";
  o << "workers = " << c.workers << "\n";
  return o.str();
}

nlohmann::json to_json(const ReconstructionConfig& r) {
  nlohmann::json j;
  j["method"] = to_string(r.method);
  j["f_lo"] = r.f_lo;
  j["f_hi"] = r.f_hi;
  j["full_band"] = r.full_band;
  j["subband_length"] = r.subband_length ? nlohmann::json(*r.subband_length) : nlohmann::json("auto");
  j["loading"] = r.loading;
  j["subspace_threshold"] = r.subspace_threshold;
  j["fixed_num"] = r.fixed_num ? nlohmann::json(*r.fixed_num) : nlohmann::json(nullptr);
  j["renormalize_eibmv"] = r.renormalize_eibmv;
  j["forward_backward"] = r.forward_backward;
  j["output"] = to_string(r.output);
  j["sound_speed"] = r.sound_speed;
  j["oversample"] = r.oversample;
  j["covariance_reuse"] = r.covariance_reuse;
  return j;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j = to_json(c.recon);
  j["input_path"] = c.input_path;
  j["output_path"] = c.output_path;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  return j;
}

nlohmann::json to_json(const AxialProfileReport& r) {
  nlohmann::json j;
  j["fwhm_um"] = r.fwhm_um;
  j["peak_sample"] = r.peak_sample;
  j["peak_value"] = r.peak_value;
  // -inf has no JSON spelling; null plus the flag marks "below measurable floor".
  const bool floor_ok = std::isfinite(r.noise_floor_db);
  j["noise_floor_db"] = floor_ok ? nlohmann::json(r.noise_floor_db) : nlohmann::json(nullptr);
  j["noise_floor_below_measurable"] = !floor_ok;
  j["max_sidelobe_db"] = std::isfinite(r.max_sidelobe_db) ? nlohmann::json(r.max_sidelobe_db) : nlohmann::json(nullptr);
  j["mainlobe"] = {r.mainlobe.begin, r.mainlobe.end};
  j["noise_window"] = {r.noise_window.begin, r.noise_window.end};
  return j;
}

std::size_t default_worker_count() {
  if (const char* env = std::getenv("ORPAM_WORKERS")) {
    std::size_t n = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec == std::errc() && ptr == s.data() + s.size() && n >= 1) return n;
  }
  return std::max<unsigned>(1, std::thread::hardware_concurrency());
}

}  // namespace orpam::io
