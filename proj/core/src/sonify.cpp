#include "eta_riccati/sonify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eta_riccati/errors.hpp"

namespace eta_riccati {

void MelodyConfig::validate() const {
  if (!(a > 0.0)) throw DomainError("melody: a must be > 0");
  if (!(t_start > 0.0) || !(t_end > t_start)) throw DomainError("melody: need 0 < t_start < t_end");
  if (steps < 2) throw DomainError("melody: steps must be >= 2");
  if (scale.empty()) throw DomainError("melody: scale must be non-empty");
  for (std::size_t i = 0; i < scale.size(); ++i) {
    if (scale[i] < 0 || scale[i] > 11) throw DomainError("melody: scale entries must lie in [0, 11]");
    if (i > 0 && scale[i] <= scale[i - 1]) throw DomainError("melody: scale must be strictly increasing");
  }
  if (base_pitch < 0 || base_pitch > 127) throw DomainError("melody: base_pitch must lie in [0, 127]");
  if (pitch_span < 1 || base_pitch + pitch_span > 127) {
    throw DomainError("melody: need pitch_span >= 1 and base_pitch + pitch_span <= 127");
  }
  if (!(tempo_bpm > 0.0)) throw DomainError("melody: tempo must be > 0");
  if (target_seconds && !(*target_seconds > 0.0)) throw DomainError("melody: target_seconds must be > 0");
  if (ticks_per_quarter < 2 || ticks_per_quarter > 0x7fff || ticks_per_quarter % 2 != 0) {
    throw DomainError("melody: ticks_per_quarter must be even and in [2, 32766]");
  }
  if (velocity < 1 || velocity > 127) throw DomainError("melody: velocity must lie in [1, 127]");
}

int quantize_pitch(double raw, const MelodyConfig& cfg) {
  int best = -1;
  double best_dist = 0.0;
  // Candidates in increasing order, so a strict comparison keeps the lower one on ties.
  for (int p = cfg.base_pitch; p <= cfg.base_pitch + cfg.pitch_span; ++p) {
    const int degree = (p - cfg.base_pitch) % 12;
    if (!std::binary_search(cfg.scale.begin(), cfg.scale.end(), degree)) continue;
    const double dist = std::fabs(raw - p);
    if (best < 0 || dist < best_dist) {
      best = p;
      best_dist = dist;
    }
  }
  if (best < 0) {
    // No scale degree inside the span: fall back to the plain rounded pitch.
    best = static_cast<int>(std::floor(raw + 0.5));
    best = std::clamp(best, cfg.base_pitch, cfg.base_pitch + cfg.pitch_span);
  }
  return best;
}

std::int64_t duration_for_eta(double eta, int ticks_per_quarter) {
  const std::int64_t q = ticks_per_quarter;
  if (eta < kDurationThresholds[0]) return q / 2;
  if (eta < kDurationThresholds[1]) return q;
  if (eta < kDurationThresholds[2]) return 2 * q;
  return 4 * q;
}

std::vector<MelodyStep> melody_trace(const MelodyConfig& cfg) {
  cfg.validate();
  std::vector<MelodyStep> steps(static_cast<std::size_t>(cfg.steps));
  const double dt = (cfg.t_end - cfg.t_start) / (cfg.steps - 1);
  for (int i = 0; i < cfg.steps; ++i) {
    auto& s = steps[static_cast<std::size_t>(i)];
    s.t = i + 1 == cfg.steps ? cfg.t_end : cfg.t_start + i * dt;
    const RiccatiSample r = riccati_fields(EtaPoint(cfg.a, s.t), cfg.eval);
    if (!r.converged) {
      throw ConvergenceError("melody: Riccati evaluation did not converge at t = " + std::to_string(s.t));
    }
    s.phi = r.phi;
    s.eta = r.eta;
  }

  const auto [lo_it, hi_it] =
      std::minmax_element(steps.begin(), steps.end(), [](const auto& x, const auto& y) { return x.phi < y.phi; });
  const double lo = lo_it->phi;
  const double range = hi_it->phi - lo;
  for (auto& s : steps) {
    const double normalized = range > 0.0 ? (s.phi - lo) / range : 0.5;
    s.raw_pitch = cfg.base_pitch + normalized * cfg.pitch_span;
    s.note = NoteEvent{quantize_pitch(s.raw_pitch, cfg), duration_for_eta(s.eta, cfg.ticks_per_quarter),
                       cfg.velocity};
  }
  return steps;
}

std::vector<NoteEvent> melody_from_riccati(const MelodyConfig& cfg) {
  std::vector<NoteEvent> notes;
  for (const auto& s : melody_trace(cfg)) notes.push_back(s.note);
  return notes;
}

MidiDocument compose(const MelodyConfig& cfg) {
  MidiDocument doc;
  doc.ticks_per_quarter = cfg.ticks_per_quarter;
  doc.tempo_bpm = cfg.tempo_bpm;
  doc.events = melody_from_riccati(cfg);
  if (cfg.target_seconds) {
    const double quarters = static_cast<double>(doc.total_ticks()) / doc.ticks_per_quarter;
    const double bpm = quarters * 60.0 / *cfg.target_seconds;
    if (bpm < kMinTempoBpm || bpm > kMaxTempoBpm) {
      throw ArgumentError("compose: target length needs " + std::to_string(bpm) + " bpm, outside [" +
                          std::to_string(kMinTempoBpm) + ", " + std::to_string(kMaxTempoBpm) + "]");
    }
    doc.tempo_bpm = bpm;
  }
  doc.validate();
  return doc;
}

MelodyConfig theme_preset() {
  MelodyConfig cfg;
  cfg.a = 2.0;
  cfg.t_start = 0.25;
  cfg.t_end = 6.0;
  cfg.steps = 32;
  cfg.tempo_bpm = 96.0;
  return cfg;
}

MelodyConfig composition_preset() {
  MelodyConfig cfg;
  cfg.a = 1.0;
  cfg.t_start = 0.05;
  cfg.t_end = 8.0;
  cfg.steps = 384;
  cfg.pitch_span = 36;
  cfg.base_pitch = 48;
  cfg.target_seconds = 300.0;
  return cfg;
}

}  // namespace eta_riccati
