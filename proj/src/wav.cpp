#include "iva/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace iva {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

void put_u32(std::string& b, std::uint32_t v) {
  b.push_back(static_cast<char>(v & 0xFF));
  b.push_back(static_cast<char>((v >> 8) & 0xFF));
  b.push_back(static_cast<char>((v >> 16) & 0xFF));
  b.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void put_u16(std::string& b, std::uint16_t v) {
  b.push_back(static_cast<char>(v & 0xFF));
  b.push_back(static_cast<char>((v >> 8) & 0xFF));
}

struct Reader {
  const std::string& buf;
  std::size_t pos = 0;

  bool has(std::size_t n) const { return pos + n <= buf.size(); }
  std::uint32_t u32() {
    if (!has(4)) throw CorruptHeader("wav: truncated file");
    const unsigned char* p = reinterpret_cast<const unsigned char*>(buf.data() + pos);
    pos += 4;
    return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
  }
  std::uint16_t u16() {
    if (!has(2)) throw CorruptHeader("wav: truncated file");
    const unsigned char* p = reinterpret_cast<const unsigned char*>(buf.data() + pos);
    pos += 2;
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
  }
  std::string tag() {
    if (!has(4)) throw CorruptHeader("wav: truncated file");
    std::string t = buf.substr(pos, 4);
    pos += 4;
    return t;
  }
};

}  // namespace

void write_wav(const std::string& path, const std::vector<TimeSignal>& channels,
               WavFormat format) {
  if (channels.empty()) throw ShapeMismatch("write_wav: no channels");
  const std::size_t len = channels.front().samples.size();
  const double rate = channels.front().sample_rate;
  for (const TimeSignal& c : channels) {
    if (c.samples.size() != len || c.sample_rate != rate) {
      throw ShapeMismatch("write_wav: channels differ in length or rate");
    }
  }

  const std::uint16_t nch = static_cast<std::uint16_t>(channels.size());
  const std::uint16_t bytes_per_sample = format == WavFormat::Float32 ? 4 : 2;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(len * nch * bytes_per_sample);
  const std::uint32_t rate_u = static_cast<std::uint32_t>(std::lround(rate));

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, format == WavFormat::Float32 ? kFormatFloat : kFormatPcm);
  put_u16(out, nch);
  put_u32(out, rate_u);
  put_u32(out, rate_u * nch * bytes_per_sample);
  put_u16(out, static_cast<std::uint16_t>(nch * bytes_per_sample));
  put_u16(out, static_cast<std::uint16_t>(bytes_per_sample * 8));
  out += "data";
  put_u32(out, data_bytes);

  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t c = 0; c < channels.size(); ++c) {
      const double v = channels[c].samples[t];
      if (format == WavFormat::Float32) {
        const float f = static_cast<float>(v);
        char raw[4];
        std::memcpy(raw, &f, 4);
        out.append(raw, 4);
      } else {
        const double clipped = std::clamp(v, -1.0, 1.0);
        const int s = static_cast<int>(std::lround(clipped * 32767.0));
        const std::int16_t q = static_cast<std::int16_t>(std::clamp(s, -32768, 32767));
        char raw[2];
        std::memcpy(raw, &q, 2);
        out.append(raw, 2);
      }
    }
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("write_wav: cannot open " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoFailure("write_wav: write failed for " + path);
}

void write_wav(const std::string& path, const TimeSignal& mono, WavFormat format) {
  write_wav(path, std::vector<TimeSignal>{mono}, format);
}

std::vector<TimeSignal> read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoFailure("read_wav: cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

  Reader r{buf};
  if (r.tag() != "RIFF") throw CorruptHeader("wav: missing RIFF tag");
  r.u32();  // declared riff size; tolerated if inconsistent
  if (r.tag() != "WAVE") throw CorruptHeader("wav: missing WAVE tag");

  std::uint16_t fmt_code = 0, nch = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t data_pos = 0, data_len = 0;

  while (r.has(8)) {
    const std::string id = r.tag();
    const std::uint32_t size = r.u32();
    if (id == "fmt ") {
      if (size < 16 || !r.has(size)) throw CorruptHeader("wav: bad fmt chunk");
      const std::size_t chunk_start = r.pos;
      fmt_code = r.u16();
      nch = r.u16();
      rate = r.u32();
      r.u32();  // byte rate
      r.u16();  // block align
      bits = r.u16();
      r.pos = chunk_start + size + (size & 1);
      have_fmt = true;
    } else if (id == "data") {
      if (!r.has(size)) throw CorruptHeader("wav: data chunk truncated");
      data_pos = r.pos;
      data_len = size;
      r.pos += size + (size & 1);
    } else {
      if (!r.has(size)) throw CorruptHeader("wav: chunk truncated");
      r.pos += size + (size & 1);
    }
  }
  if (!have_fmt || data_pos == 0) throw CorruptHeader("wav: missing fmt or data chunk");
  if (nch == 0 || rate == 0) throw CorruptHeader("wav: bad channel count or rate");

  std::size_t bytes_per_sample;
  if (fmt_code == kFormatFloat && bits == 32) {
    bytes_per_sample = 4;
  } else if (fmt_code == kFormatPcm && bits == 16) {
    bytes_per_sample = 2;
  } else {
    throw UnsupportedFormat("wav: only PCM16 and IEEE float-32 are supported");
  }

  const std::size_t stride = bytes_per_sample * nch;
  const std::size_t frames = data_len / stride;
  std::vector<TimeSignal> out(nch);
  for (auto& ch : out) {
    ch.sample_rate = static_cast<double>(rate);
    ch.samples.resize(frames);
  }
  const char* base = buf.data() + data_pos;
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t c = 0; c < nch; ++c) {
      const char* p = base + t * stride + c * bytes_per_sample;
      if (bytes_per_sample == 4) {
        float v;
        std::memcpy(&v, p, 4);
        out[c].samples[t] = static_cast<double>(v);
      } else {
        std::int16_t v;
        std::memcpy(&v, p, 2);
        out[c].samples[t] = static_cast<double>(v) / 32767.0;
      }
    }
  }
  return out;
}

}  // namespace iva
