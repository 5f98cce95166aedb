#pragma once

#include <string>
#include <vector>

#include "iva/signal.hpp"

namespace iva {

enum class WavFormat { Float32, Pcm16 };

/// Writes interleaved multichannel RIFF/WAVE. All channels must share the
/// sample rate and length. PCM16 clips to [-1, 1].
void write_wav(const std::string& path, const std::vector<TimeSignal>& channels,
               WavFormat format = WavFormat::Float32);
void write_wav(const std::string& path, const TimeSignal& mono,
               WavFormat format = WavFormat::Float32);

/// Reads PCM16 or IEEE float-32 WAV, any channel count.
/// Throws IoFailure, CorruptHeader, or UnsupportedFormat.
std::vector<TimeSignal> read_wav(const std::string& path);

}  // namespace iva
