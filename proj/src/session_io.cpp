#include "ebci/session_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ebci {

namespace {

static_assert(std::endian::native == std::endian::little,
              "session container writer assumes a little-endian host");

constexpr char kMagic[4] = {'E', 'B', 'C', 'I'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  }
  void raw(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
  template <typename T>
  void pod(T v) { raw(&v, sizeof(T)); }
  void str(const std::string& s) {
    pod<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
  bool ok() const { return static_cast<bool>(out_); }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  Reader(const std::string& path, std::ifstream in) : path_(path), in_(std::move(in)) {}
  void raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!in_) throw std::runtime_error(path_ + ": truncated or malformed file");
  }
  template <typename T>
  T pod() {
    T v;
    raw(&v, sizeof(T));
    return v;
  }
  std::string str(std::uint32_t max_len = 1u << 20) {
    const auto n = pod<std::uint32_t>();
    if (n > max_len) throw std::runtime_error(path_ + ": malformed header (string length " + std::to_string(n) + ")");
    std::string s(n, '\0');
    if (n) raw(s.data(), n);
    return s;
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
};

Session read_binary(Reader& r) {
  char magic[4];
  r.raw(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error(r.path() + ": malformed header (bad magic)");
  }
  const auto version = r.pod<std::uint32_t>();
  if (version != kVersion) {
    throw std::runtime_error(r.path() + ": unsupported container version " + std::to_string(version));
  }

  Session s;
  s.eeg.sample_rate_hz = r.pod<double>();
  const auto n_channels = r.pod<std::uint32_t>();
  if (n_channels == 0 || n_channels > 4096) {
    throw std::runtime_error(r.path() + ": malformed header (channel count " + std::to_string(n_channels) + ")");
  }
  for (std::uint32_t i = 0; i < n_channels; ++i) s.eeg.channel_names.push_back(r.str(256));

  s.layout.rows = r.pod<std::int32_t>();
  s.layout.cols = r.pod<std::int32_t>();
  s.layout.icon_size_px = r.pod<std::int32_t>();
  s.layout.spacing_px = r.pod<std::int32_t>();
  s.layout.screen_w_px = r.pod<std::int32_t>();
  s.layout.screen_h_px = r.pod<std::int32_t>();
  s.layout.target_index = r.pod<std::int32_t>();
  s.n_trials = r.pod<std::int32_t>();

  const auto n_meta = r.pod<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    std::string key = r.str();
    s.metadata[key] = r.str();
  }

  const auto n_samples = r.pod<std::uint64_t>();
  s.eeg.data.resize(n_channels, static_cast<Eigen::Index>(n_samples));
  for (std::uint32_t c = 0; c < n_channels; ++c) {
    // row-major float32 on disk
    std::vector<float> row(n_samples);
    if (n_samples) r.raw(row.data(), n_samples * sizeof(float));
    for (std::uint64_t t = 0; t < n_samples; ++t) s.eeg.data(c, static_cast<Eigen::Index>(t)) = row[t];
  }

  const auto n_onsets = r.pod<std::uint32_t>();
  s.eeg.stimulus_onsets.resize(n_onsets);
  for (auto& so : s.eeg.stimulus_onsets) {
    so.trial_index = r.pod<std::int32_t>();
    so.sample_index = r.pod<std::int64_t>();
    so.icon_index = r.pod<std::int32_t>();
  }

  const auto n_fix = r.pod<std::uint32_t>();
  s.fixations.resize(n_fix);
  for (auto& fx : s.fixations) {
    fx.onset_ms = r.pod<double>();
    fx.duration_ms = r.pod<double>();
    fx.x_px = r.pod<std::int32_t>();
    fx.y_px = r.pod<std::int32_t>();
    fx.trial_index = r.pod<std::int32_t>();
  }
  return s;
}

}  // namespace

void save_session(const Session& session, const std::string& path) {
  validate_session(session);
  Writer w(path);
  w.raw(kMagic, 4);
  w.pod<std::uint32_t>(kVersion);
  w.pod<double>(session.eeg.sample_rate_hz);
  w.pod<std::uint32_t>(static_cast<std::uint32_t>(session.eeg.channel_names.size()));
  for (const auto& name : session.eeg.channel_names) w.str(name);
  w.pod<std::int32_t>(session.layout.rows);
  w.pod<std::int32_t>(session.layout.cols);
  w.pod<std::int32_t>(session.layout.icon_size_px);
  w.pod<std::int32_t>(session.layout.spacing_px);
  w.pod<std::int32_t>(session.layout.screen_w_px);
  w.pod<std::int32_t>(session.layout.screen_h_px);
  w.pod<std::int32_t>(session.layout.target_index);
  w.pod<std::int32_t>(session.n_trials);
  w.pod<std::uint32_t>(static_cast<std::uint32_t>(session.metadata.size()));
  for (const auto& [key, value] : session.metadata) {
    w.str(key);
    w.str(value);
  }
  const auto n_samples = static_cast<std::uint64_t>(session.eeg.n_samples());
  w.pod<std::uint64_t>(n_samples);
  std::vector<float> row(n_samples);
  for (Eigen::Index c = 0; c < session.eeg.n_channels(); ++c) {
    for (std::uint64_t t = 0; t < n_samples; ++t) {
      row[t] = static_cast<float>(session.eeg.data(c, static_cast<Eigen::Index>(t)));
    }
    if (n_samples) w.raw(row.data(), n_samples * sizeof(float));
  }
  w.pod<std::uint32_t>(static_cast<std::uint32_t>(session.eeg.stimulus_onsets.size()));
  for (const auto& so : session.eeg.stimulus_onsets) {
    w.pod<std::int32_t>(so.trial_index);
    w.pod<std::int64_t>(so.sample_index);
    w.pod<std::int32_t>(so.icon_index);
  }
  w.pod<std::uint32_t>(static_cast<std::uint32_t>(session.fixations.size()));
  for (const auto& fx : session.fixations) {
    w.pod<double>(fx.onset_ms);
    w.pod<double>(fx.duration_ms);
    w.pod<std::int32_t>(fx.x_px);
    w.pod<std::int32_t>(fx.y_px);
    w.pod<std::int32_t>(fx.trial_index);
  }
  if (!w.ok()) throw std::runtime_error("write failed: " + path);
}

Session session_from_json_text(const std::string& text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(origin + ": malformed JSON session: " + e.what());
  }
  try {
    Session s;
    if (j.value("version", 1) != 1) throw std::runtime_error("unsupported version");
    s.eeg.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    s.eeg.channel_names = j.at("channel_names").get<std::vector<std::string>>();
    const auto& jl = j.at("layout");
    s.layout.rows = jl.value("rows", 5);
    s.layout.cols = jl.value("cols", 5);
    s.layout.icon_size_px = jl.value("icon_size_px", 24);
    s.layout.spacing_px = jl.value("spacing_px", 100);
    s.layout.screen_w_px = jl.value("screen_w_px", 1920);
    s.layout.screen_h_px = jl.value("screen_h_px", 1080);
    s.layout.target_index = jl.at("target_index").get<int>();
    s.n_trials = j.at("n_trials").get<int>();
    if (j.contains("metadata")) s.metadata = j.at("metadata").get<std::map<std::string, std::string>>();

    const auto& eeg = j.at("eeg");
    const auto n_ch = s.eeg.channel_names.size();
    if (eeg.size() != n_ch) {
      throw std::runtime_error("channel count mismatch: " + std::to_string(eeg.size()) +
                               " data rows vs " + std::to_string(n_ch) + " channel names");
    }
    const std::size_t n_samples = eeg.empty() ? 0 : eeg.at(0).size();
    s.eeg.data.resize(static_cast<Eigen::Index>(n_ch), static_cast<Eigen::Index>(n_samples));
    for (std::size_t c = 0; c < n_ch; ++c) {
      const auto& row = eeg.at(c);
      if (row.size() != n_samples) throw std::runtime_error("ragged EEG rows");
      for (std::size_t t = 0; t < n_samples; ++t) {
        s.eeg.data(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(t)) = row.at(t).get<float>();
      }
    }
    for (const auto& row : j.value("stimulus_onsets", nlohmann::json::array())) {
      StimulusOnset so;
      so.trial_index = row.at(0).get<int>();
      so.sample_index = row.at(1).get<std::int64_t>();
      so.icon_index = row.at(2).get<int>();
      s.eeg.stimulus_onsets.push_back(so);
    }
    for (const auto& row : j.value("fixations", nlohmann::json::array())) {
      FixationEvent fx;
      fx.onset_ms = row.at("onset_ms").get<double>();
      fx.duration_ms = row.at("duration_ms").get<double>();
      fx.x_px = row.at("x_px").get<int>();
      fx.y_px = row.at("y_px").get<int>();
      fx.trial_index = row.at("trial_index").get<int>();
      s.fixations.push_back(fx);
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(origin + ": malformed JSON session: " + e.what());
  }
}

Session load_session(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open session file: " + path);
  const int first = in.peek();
  Session s;
  if (first == '{') {
    std::ostringstream ss;
    ss << in.rdbuf();
    s = session_from_json_text(ss.str(), path);
  } else {
    Reader r(path, std::move(in));
    s = read_binary(r);
  }
  try {
    validate_session(s);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return s;
}

}  // namespace ebci
