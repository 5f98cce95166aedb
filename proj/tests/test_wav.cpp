#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "iva/wav.hpp"

using iva::TimeSignal;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<TimeSignal> noise_channels(std::size_t nch, std::size_t len, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> d(0.0, 0.3);
  std::vector<TimeSignal> out(nch);
  for (std::size_t c = 0; c < nch; ++c) {
    out[c].sample_rate = 16000.0;
    out[c].samples.resize(len);
    for (double& v : out[c].samples) v = d(g);
  }
  return out;
}

}  // namespace

TEST_CASE("float32 write/read round trip is bit exact") {
  const auto channels = noise_channels(3, 777, 1);
  const std::string path = temp_path("iva_test_f32.wav");
  iva::write_wav(path, channels, iva::WavFormat::Float32);
  const auto back = iva::read_wav(path);
  REQUIRE(back.size() == 3);
  CHECK(back[0].sample_rate == 16000.0);
  for (std::size_t c = 0; c < 3; ++c) {
    REQUIRE(back[c].samples.size() == channels[c].samples.size());
    for (std::size_t t = 0; t < channels[c].samples.size(); ++t) {
      CHECK(back[c].samples[t] == static_cast<double>(static_cast<float>(channels[c].samples[t])));
    }
  }
  std::remove(path.c_str());
}

TEST_CASE("pcm16 round trip is within one quantization step") {
  const auto channels = noise_channels(2, 500, 2);
  const std::string path = temp_path("iva_test_pcm16.wav");
  iva::write_wav(path, channels, iva::WavFormat::Pcm16);
  const auto back = iva::read_wav(path);
  REQUIRE(back.size() == 2);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t t = 0; t < channels[c].samples.size(); ++t) {
      CHECK(std::abs(back[c].samples[t] - channels[c].samples[t]) <= 1.0 / 32768.0);
    }
  }
  std::remove(path.c_str());
}

TEST_CASE("corrupt, unsupported, and missing files raise the right errors") {
  const std::string path = temp_path("iva_test_bad.wav");

  // truncated header
  {
    std::ofstream f(path, std::ios::binary);
    f << "RIFF\x10\x00\x00";
  }
  CHECK_THROWS_AS(iva::read_wav(path), iva::CorruptHeader);

  // wrong magic
  {
    std::ofstream f(path, std::ios::binary);
    f << "JUNKJUNKJUNKJUNKJUNKJUNK";
  }
  CHECK_THROWS_AS(iva::read_wav(path), iva::CorruptHeader);

  // valid container, unsupported codec (8-bit PCM)
  {
    const auto channels = noise_channels(1, 64, 3);
    iva::write_wav(path, channels, iva::WavFormat::Pcm16);
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(34);  // bits-per-sample field
    const char bits8[2] = {8, 0};
    f.write(bits8, 2);
  }
  CHECK_THROWS_AS(iva::read_wav(path), iva::UnsupportedFormat);

  CHECK_THROWS_AS(iva::read_wav("/nonexistent/file.wav"), iva::IoFailure);
  std::remove(path.c_str());
}

TEST_CASE("writer rejects mismatched channels") {
  auto channels = noise_channels(2, 100, 4);
  channels[1].samples.resize(99);
  CHECK_THROWS_AS(iva::write_wav(temp_path("iva_test_mismatch.wav"), channels),
                  iva::ShapeMismatch);
}
