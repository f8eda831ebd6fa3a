#pragma once

// Melody generation from the Riccati field: phi_a(t) sets the pitch contour,
// eta_a(t) sets note lengths.
//
//   pitch:    min-max normalize phi over the sampled t grid, scale to
//             [0, pitch_span], add base_pitch, snap to the nearest scale
//             degree (ties go down). phi is decreasing, so the contour falls.
//   duration: eta in (1/2, 1) binned at 0.625 / 0.75 / 0.875 into
//             eighth / quarter / half / whole notes.
//   velocity: constant.

#include <optional>
#include <vector>

#include "eta_riccati/midi.hpp"
#include "eta_riccati/riccati.hpp"

namespace eta_riccati {

struct MelodyConfig {
  double a = 1.0;
  double t_start = 0.5;
  double t_end = 8.0;
  int steps = 16;
  std::vector<int> scale{0, 2, 4, 5, 7, 9, 11};
  int base_pitch = 60;
  int pitch_span = 24;
  double tempo_bpm = 96.0;
  std::optional<double> target_seconds;
  int ticks_per_quarter = 480;
  int velocity = 80;
  EvalOptions eval{};

  void validate() const;
};

/// Tempo range compose() accepts after rescaling to a target length.
inline constexpr double kMinTempoBpm = 20.0;
inline constexpr double kMaxTempoBpm = 300.0;

/// Per-step record of the mapping, for inspection and tests.
struct MelodyStep {
  double t = 0.0;
  double phi = 0.0;
  double eta = 0.0;
  double raw_pitch = 0.0;
  NoteEvent note;
};

/// Thresholds on eta separating eighth / quarter / half / whole notes.
inline constexpr double kDurationThresholds[3] = {0.625, 0.75, 0.875};

/// Snap a real-valued pitch to the nearest scale degree in
/// [base_pitch, base_pitch + pitch_span]; ties resolve downward.
int quantize_pitch(double raw, const MelodyConfig& cfg);

/// Note length in ticks for a given eta value.
std::int64_t duration_for_eta(double eta, int ticks_per_quarter);

std::vector<MelodyStep> melody_trace(const MelodyConfig& cfg);

std::vector<NoteEvent> melody_from_riccati(const MelodyConfig& cfg);

/// Notes plus tempo; when target_seconds is set the tempo is rescaled so
/// the playback length matches it. Throws ArgumentError if that tempo falls
/// outside [kMinTempoBpm, kMaxTempoBpm].
MidiDocument compose(const MelodyConfig& cfg);

/// Short theme: a = 2, t in [0.25, 6], 32 steps, major scale, 96 bpm.
MelodyConfig theme_preset();

/// Five-minute piece: a = 1, t in [0.05, 8], 384 steps, target 300 s.
MelodyConfig composition_preset();

}  // namespace eta_riccati
