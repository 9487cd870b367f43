#pragma once

namespace mlc {

// All simulation state is SI (m, s, m/s). Conversions happen at the IO
// boundary only: scenario files and reports use km/h for speeds.
constexpr double kmh_to_ms(double kmh) { return kmh / 3.6; }
constexpr double ms_to_kmh(double ms) { return ms * 3.6; }

}  // namespace mlc
