#include "eta_riccati/midi.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "eta_riccati/errors.hpp"

namespace eta_riccati {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_vlq(std::vector<std::uint8_t>& out, std::uint32_t v) {
  const auto bytes = encode_vlq(v);
  out.insert(out.end(), bytes.begin(), bytes.end());
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    if (pos_ >= bytes_.size()) throw std::runtime_error("midi: unexpected end of data");
    return bytes_[pos_++];
  }
  std::uint16_t u16() {
    const auto hi = u8();
    return static_cast<std::uint16_t>((hi << 8) | u8());
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
    return v;
  }
  std::uint32_t vlq() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      const auto b = u8();
      v = (v << 7) | (b & 0x7fu);
      if ((b & 0x80u) == 0) return v;
    }
    throw std::runtime_error("midi: variable-length quantity longer than 4 bytes");
  }
  void expect(const char* tag) {
    for (int i = 0; i < 4; ++i) {
      if (u8() != static_cast<std::uint8_t>(tag[i])) throw std::runtime_error(std::string("midi: expected ") + tag);
    }
  }
  [[nodiscard]] std::size_t pos() const { return pos_; }
  [[nodiscard]] std::size_t size() const { return bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void MidiDocument::validate() const {
  if (ticks_per_quarter < 1 || ticks_per_quarter > 0x7fff) {
    throw DomainError("midi: ticks_per_quarter must lie in [1, 32767]");
  }
  if (!(tempo_bpm > 0.0) || tempo_microseconds(tempo_bpm) > 0xffffffu) {
    throw DomainError("midi: tempo out of range");
  }
  for (const auto& e : events) {
    if (e.pitch < 0 || e.pitch > 127) throw DomainError("midi: pitch out of range");
    if (e.velocity < 1 || e.velocity > 127) throw DomainError("midi: velocity out of range");
    if (e.duration_ticks < 1 || e.duration_ticks > 0x0fffffff) throw DomainError("midi: duration out of range");
  }
}

std::int64_t MidiDocument::total_ticks() const {
  std::int64_t total = 0;
  for (const auto& e : events) total += e.duration_ticks;
  return total;
}

double MidiDocument::duration_seconds() const {
  return static_cast<double>(total_ticks()) / ticks_per_quarter * tempo_microseconds(tempo_bpm) * 1e-6;
}

std::uint32_t tempo_microseconds(double tempo_bpm) {
  if (!(tempo_bpm > 0.0)) throw DomainError("tempo must be > 0");
  return static_cast<std::uint32_t>(std::lround(60'000'000.0 / tempo_bpm));
}

std::vector<std::uint8_t> encode_vlq(std::uint32_t value) {
  if (value > 0x0fffffffu) throw DomainError("vlq: value exceeds 28 bits");
  std::vector<std::uint8_t> out;
  std::uint32_t buffer = value & 0x7fu;
  while ((value >>= 7) != 0) {
    buffer <<= 8;
    buffer |= ((value & 0x7fu) | 0x80u);
  }
  for (;;) {
    out.push_back(static_cast<std::uint8_t>(buffer));
    if ((buffer & 0x80u) == 0) break;
    buffer >>= 8;
  }
  return out;
}

std::vector<std::uint8_t> write_midi(const MidiDocument& doc) {
  doc.validate();

  std::vector<std::uint8_t> track;
  // Tempo meta-event at delta 0.
  const std::uint32_t us = tempo_microseconds(doc.tempo_bpm);
  track.insert(track.end(), {0x00, 0xff, 0x51, 0x03});
  track.push_back(static_cast<std::uint8_t>(us >> 16));
  track.push_back(static_cast<std::uint8_t>(us >> 8));
  track.push_back(static_cast<std::uint8_t>(us));

  for (const auto& e : doc.events) {
    const auto pitch = static_cast<std::uint8_t>(e.pitch);
    put_vlq(track, 0);
    track.insert(track.end(), {0x90, pitch, static_cast<std::uint8_t>(e.velocity)});
    put_vlq(track, static_cast<std::uint32_t>(e.duration_ticks));
    track.insert(track.end(), {0x80, pitch, 0x40});
  }
  track.insert(track.end(), {0x00, 0xff, 0x2f, 0x00});

  std::vector<std::uint8_t> out{'M', 'T', 'h', 'd'};
  put_u32(out, 6);
  put_u16(out, 0);
  put_u16(out, 1);
  put_u16(out, static_cast<std::uint16_t>(doc.ticks_per_quarter));
  out.insert(out.end(), {'M', 'T', 'r', 'k'});
  put_u32(out, static_cast<std::uint32_t>(track.size()));
  out.insert(out.end(), track.begin(), track.end());
  return out;
}

ParsedMidi parse_midi(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  ParsedMidi out;
  r.expect("MThd");
  if (r.u32() != 6) throw std::runtime_error("midi: header length must be 6");
  out.format = r.u16();
  out.tracks = r.u16();
  const auto division = r.u16();
  if ((division & 0x8000u) != 0) throw std::runtime_error("midi: SMPTE division not supported");
  out.ticks_per_quarter = division;
  if (out.format != 0 || out.tracks != 1) throw std::runtime_error("midi: expected format 0 with one track");

  r.expect("MTrk");
  const std::uint32_t length = r.u32();
  const std::size_t end = r.pos() + length;
  if (end != r.size()) throw std::runtime_error("midi: track length does not match file size");

  std::int64_t now = 0;
  // Open notes keyed by pitch: (start tick, velocity).
  std::map<int, std::pair<std::int64_t, int>> open;
  while (r.pos() < end) {
    now += r.vlq();
    const std::uint8_t status = r.u8();
    // The writer never relies on running status, so neither does the parser.
    if (status < 0x80) throw std::runtime_error("midi: running status is not supported");
    if (status == 0xff) {
      const auto type = r.u8();
      const auto len = r.vlq();
      if (type == 0x51) {
        if (len != 3) throw std::runtime_error("midi: tempo event must have length 3");
        out.tempo_us = (static_cast<std::uint32_t>(r.u8()) << 16);
        out.tempo_us |= (static_cast<std::uint32_t>(r.u8()) << 8);
        out.tempo_us |= r.u8();
      } else if (type == 0x2f) {
        if (len != 0) throw std::runtime_error("midi: end-of-track must have length 0");
        out.end_of_track = true;
        if (r.pos() != end) throw std::runtime_error("midi: data after end-of-track");
      } else {
        for (std::uint32_t i = 0; i < len; ++i) r.u8();
      }
      continue;
    }
    const auto kind = status & 0xf0u;
    const int pitch = r.u8();
    const int velocity = r.u8();
    if (kind == 0x90 && velocity > 0) {
      if (open.contains(pitch)) throw std::runtime_error("midi: overlapping notes on one pitch");
      open[pitch] = {now, velocity};
    } else if (kind == 0x80 || kind == 0x90) {
      const auto it = open.find(pitch);
      if (it == open.end()) throw std::runtime_error("midi: note-off without note-on");
      out.events.push_back(NoteEvent{pitch, now - it->second.first, it->second.second});
      open.erase(it);
    } else {
      throw std::runtime_error("midi: unsupported channel event");
    }
  }
  if (!out.end_of_track) throw std::runtime_error("midi: missing end-of-track");
  if (!open.empty()) throw std::runtime_error("midi: unterminated note");
  return out;
}

}  // namespace eta_riccati
