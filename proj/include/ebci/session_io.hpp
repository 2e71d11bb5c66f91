#pragma once

#include <string>

#include "ebci/session.hpp"

namespace ebci {

// Container format, version 1. Little-endian binary:
//   magic "EBCI", u32 version,
//   f64 sample_rate_hz, u32 n_channels, (u32 len + bytes) per channel name,
//   layout (7 x i32), u32 n_trials,
//   u32 n_metadata, (key, value) length-prefixed strings,
//   u64 n_samples, EEG matrix row-major channels x samples as f32,
//   u32 n_onsets, (i32 trial, i64 sample, i32 icon) per onset,
//   u32 n_fixations, (f64 onset_ms, f64 duration_ms, i32 x, i32 y, i32 trial) per fixation.
//
// Files starting with '{' are parsed as the semantically identical JSON
// manifest variant (hand-written test fixtures).
void save_session(const Session& session, const std::string& path);
Session load_session(const std::string& path);

Session session_from_json_text(const std::string& text, const std::string& origin);

}  // namespace ebci
