#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "eta_riccati/errors.hpp"
#include "eta_riccati/midi.hpp"
#include "eta_riccati/sonify.hpp"

using namespace eta_riccati;

namespace {
std::vector<std::uint8_t> bytes(std::initializer_list<int> v) {
  std::vector<std::uint8_t> out;
  for (int b : v) out.push_back(static_cast<std::uint8_t>(b));
  return out;
}

bool contains(const std::vector<std::uint8_t>& hay, const std::vector<std::uint8_t>& needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}
}  // namespace

TEST_CASE("variable-length quantities") {
  CHECK(encode_vlq(0) == bytes({0x00}));
  CHECK(encode_vlq(0x7f) == bytes({0x7f}));
  CHECK(encode_vlq(0x80) == bytes({0x81, 0x00}));
  CHECK(encode_vlq(480) == bytes({0x83, 0x60}));
  CHECK(encode_vlq(0x3fff) == bytes({0xff, 0x7f}));
  CHECK(encode_vlq(0x4000) == bytes({0x81, 0x80, 0x00}));
  CHECK(encode_vlq(0x0fffffff) == bytes({0xff, 0xff, 0xff, 0x7f}));
  CHECK_THROWS_AS(encode_vlq(0x10000000), DomainError);
}

TEST_CASE("tempo encoding") {
  CHECK(tempo_microseconds(120.0) == 500000u);
  CHECK(tempo_microseconds(96.0) == 625000u);
  CHECK_THROWS_AS(tempo_microseconds(0.0), DomainError);
}

TEST_CASE("empty document is header, tempo and end of track") {
  MidiDocument doc;
  doc.tempo_bpm = 120.0;
  const auto out = write_midi(doc);
  const auto expected = bytes({0x4d, 0x54, 0x68, 0x64, 0, 0, 0, 6, 0, 0, 0, 1, 0x01, 0xe0,  //
                               0x4d, 0x54, 0x72, 0x6b, 0, 0, 0, 11,                          //
                               0x00, 0xff, 0x51, 0x03, 0x07, 0xa1, 0x20,                     //
                               0x00, 0xff, 0x2f, 0x00});
  CHECK(out == expected);
  const auto parsed = parse_midi(out);
  CHECK(parsed.events.empty());
  CHECK(parsed.end_of_track);
  CHECK(parsed.tempo_us == 500000u);
}

TEST_CASE("single note bytes") {
  MidiDocument doc;
  doc.events.push_back(NoteEvent{60, 480, 80});
  const auto out = write_midi(doc);
  CHECK(std::vector<std::uint8_t>(out.begin(), out.begin() + 8) == bytes({0x4d, 0x54, 0x68, 0x64, 0, 0, 0, 6}));
  CHECK(contains(out, bytes({0x00, 0x90, 0x3c, 0x50, 0x83, 0x60, 0x80, 0x3c, 0x40})));
  CHECK(contains(out, bytes({0x00, 0xff, 0x2f, 0x00})));
}

TEST_CASE("round trip recovers the events") {
  MidiDocument doc;
  doc.ticks_per_quarter = 96;
  doc.tempo_bpm = 72.5;
  for (int i = 0; i < 50; ++i) doc.events.push_back(NoteEvent{30 + i, 1 + 37 * i, 1 + 2 * i});
  doc.events.push_back(NoteEvent{0, 0x0fffffff, 127});
  doc.events.push_back(NoteEvent{127, 1, 1});
  const auto out = write_midi(doc);
  const auto parsed = parse_midi(out);
  CHECK(parsed.format == 0);
  CHECK(parsed.tracks == 1);
  CHECK(parsed.ticks_per_quarter == 96);
  CHECK(parsed.tempo_us == tempo_microseconds(72.5));
  CHECK(parsed.events == doc.events);
  CHECK(write_midi(doc) == out);
}

TEST_CASE("parser rejects malformed files") {
  MidiDocument doc;
  doc.events.push_back(NoteEvent{60, 480, 80});
  const auto good = write_midi(doc);
  auto truncated = good;
  truncated.pop_back();
  CHECK_THROWS(parse_midi(truncated));
  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS(parse_midi(bad_magic));
  auto bad_format = good;
  bad_format[9] = 1;
  CHECK_THROWS(parse_midi(bad_format));
  CHECK_THROWS(parse_midi(std::vector<std::uint8_t>{}));
}

TEST_CASE("document validation") {
  MidiDocument doc;
  doc.events.push_back(NoteEvent{128, 10, 80});
  CHECK_THROWS_AS(write_midi(doc), DomainError);
  doc.events = {NoteEvent{60, 0, 80}};
  CHECK_THROWS_AS(doc.validate(), DomainError);
  doc.events = {NoteEvent{60, 10, 0}};
  CHECK_THROWS_AS(doc.validate(), DomainError);
}

TEST_CASE("duration without a target is ticks at the stated tempo") {
  MidiDocument doc;
  doc.tempo_bpm = 120.0;
  doc.events = {NoteEvent{60, 480, 80}, NoteEvent{62, 960, 80}};
  CHECK(doc.total_ticks() == 1440);
  CHECK(doc.duration_seconds() == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("duration bins") {
  CHECK(duration_for_eta(0.55, 480) == 240);
  CHECK(duration_for_eta(0.625, 480) == 480);
  CHECK(duration_for_eta(0.80, 480) == 960);
  CHECK(duration_for_eta(0.95, 480) == 1920);
}

TEST_CASE("pitch quantization snaps to the scale, ties downward") {
  MelodyConfig cfg;
  cfg.base_pitch = 60;
  cfg.pitch_span = 24;
  CHECK(quantize_pitch(60.0, cfg) == 60);
  CHECK(quantize_pitch(61.0, cfg) == 60);  // C# between C and D
  CHECK(quantize_pitch(61.2, cfg) == 62);
  CHECK(quantize_pitch(65.9, cfg) == 65);
  CHECK(quantize_pitch(84.0, cfg) == 84);
  CHECK(quantize_pitch(90.0, cfg) == 84);
}

TEST_CASE("melody of 16 steps has a non-increasing contour") {
  MelodyConfig cfg;
  cfg.a = 1.0;
  cfg.t_start = 0.5;
  cfg.t_end = 8.0;
  cfg.steps = 16;
  const auto trace = melody_trace(cfg);
  REQUIRE(trace.size() == 16);
  CHECK(trace.front().raw_pitch == doctest::Approx(cfg.base_pitch + cfg.pitch_span));
  CHECK(trace.back().raw_pitch == doctest::Approx(cfg.base_pitch));
  for (std::size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace[i].raw_pitch <= trace[i - 1].raw_pitch);
    CHECK(trace[i].note.pitch <= trace[i - 1].note.pitch);
  }
  for (const auto& s : trace) {
    CHECK(s.note.pitch >= 0);
    CHECK(s.note.pitch <= 127);
    CHECK(s.note.duration_ticks >= 1);
    CHECK(s.note.velocity == 80);
  }
}

TEST_CASE("two steps hit both ends of the range") {
  MelodyConfig cfg;
  cfg.steps = 2;
  const auto trace = melody_trace(cfg);
  CHECK(trace[0].raw_pitch == cfg.base_pitch + cfg.pitch_span);
  CHECK(trace[1].raw_pitch == cfg.base_pitch);
}

TEST_CASE("late notes are longer than early notes") {
  MelodyConfig cfg;
  cfg.a = 2.0;
  cfg.t_start = 0.5;
  cfg.t_end = 8.0;
  cfg.steps = 16;
  const auto trace = melody_trace(cfg);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace[i].eta > trace[i - 1].eta);
    CHECK(trace[i].note.duration_ticks >= trace[i - 1].note.duration_ticks);
  }
  CHECK(trace.back().note.duration_ticks > trace.front().note.duration_ticks);
  CHECK(trace.front().eta == doctest::Approx(eta_deriv_averaged(EtaPoint(2, 0.5), 0, 100000).value).epsilon(1e-12));
}

TEST_CASE("compose: target length and tempo limits") {
  const auto doc = compose(composition_preset());
  CHECK(std::abs(doc.duration_seconds() - 300.0) <= 15.0);
  CHECK(doc.events.size() == 384);

  MelodyConfig plain;
  const auto fixed = compose(plain);
  CHECK(fixed.tempo_bpm == 96.0);
  CHECK(fixed.duration_seconds() ==
        doctest::Approx(static_cast<double>(fixed.total_ticks()) / 480.0 * 0.625).epsilon(1e-15));

  MelodyConfig impossible = composition_preset();
  impossible.target_seconds = 1.0;
  CHECK_THROWS_AS(compose(impossible), ArgumentError);
  impossible.target_seconds = 1e6;
  CHECK_THROWS_AS(compose(impossible), ArgumentError);
}

TEST_CASE("compose: 64 steps at a = 2 round-trips") {
  MelodyConfig cfg;
  cfg.a = 2.0;
  cfg.steps = 64;
  const auto doc = compose(cfg);
  const auto out = write_midi(doc);
  const auto parsed = parse_midi(out);
  CHECK(parsed.events == doc.events);
  CHECK(write_midi(compose(cfg)) == out);
}

TEST_CASE("presets") {
  const auto theme = compose(theme_preset());
  CHECK(parse_midi(write_midi(theme)).events == theme.events);
  CHECK(composition_preset().target_seconds.value() == 300.0);
  CHECK(composition_preset().a == 1.0);
}

TEST_CASE("config validation") {
  MelodyConfig cfg;
  cfg.steps = 1;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = MelodyConfig{};
  cfg.scale = {0, 4, 4};
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = MelodyConfig{};
  cfg.base_pitch = 120;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = MelodyConfig{};
  cfg.t_end = cfg.t_start;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}
