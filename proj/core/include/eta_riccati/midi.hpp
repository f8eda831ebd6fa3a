#pragma once

// Minimal Standard MIDI File (format 0, single track) writer and the
// structural parser used to round-trip it.

#include <cstdint>
#include <span>
#include <vector>

namespace eta_riccati {

struct NoteEvent {
  int pitch = 60;
  std::int64_t duration_ticks = 480;
  int velocity = 80;

  friend bool operator==(const NoteEvent&, const NoteEvent&) = default;
};

struct MidiDocument {
  int ticks_per_quarter = 480;
  double tempo_bpm = 96.0;
  std::vector<NoteEvent> events;

  /// Throws DomainError when any field is outside its MIDI range.
  void validate() const;

  /// Total ticks of all notes (they are played back to back).
  [[nodiscard]] std::int64_t total_ticks() const;

  /// Playback length at the encoded tempo (microseconds per quarter rounded
  /// to an integer, as stored in the file).
  [[nodiscard]] double duration_seconds() const;
};

/// Microseconds per quarter note stored in the tempo meta-event.
std::uint32_t tempo_microseconds(double tempo_bpm);

/// Variable-length quantity encoding (7 bits per byte, MSB = continuation).
std::vector<std::uint8_t> encode_vlq(std::uint32_t value);

std::vector<std::uint8_t> write_midi(const MidiDocument& doc);

struct ParsedMidi {
  int format = 0;
  int tracks = 0;
  int ticks_per_quarter = 0;
  std::uint32_t tempo_us = 0;
  std::vector<NoteEvent> events;
  bool end_of_track = false;
};

/// Structural parse of files produced by write_midi (and any format-0 file
/// that sticks to note on/off, tempo and end-of-track events). Throws
/// std::runtime_error on malformed input.
ParsedMidi parse_midi(std::span<const std::uint8_t> bytes);

}  // namespace eta_riccati
