#pragma once

// Trace CSV: a header row, then one row per stage.
//
//   stage,acting_e,reason,bit,matches_A,M_capital,G_0..G_{E-1},phi_0..phi_{E-1}
//
// phi cells hold a decimal value, `div`, or `inactive`.

#include <ostream>
#include <sstream>
#include <string>

#include "ivr/construction.hpp"

namespace ivr {

inline void write_trace_csv(std::ostream& os, const Trace& trace) {
  const std::size_t n = trace.family_size();
  os << "stage,acting_e,reason,bit,matches_A,M_capital";
  for (std::size_t e = 0; e < n; ++e) os << ",G_" << e;
  for (std::size_t e = 0; e < n; ++e) os << ",phi_" << e;
  os << '\n';
  for (const auto& r : trace.rows) {
    os << r.stage << ',' << r.acting_e << ',' << to_string(r.reason) << ',' << r.chosen_bit << ','
       << (r.matches_A ? 1 : 0) << ',' << r.adversary_capital;
    for (const auto& g : r.gambler_values.opponents) os << ',' << g;
    for (const auto& cell : r.opponent_values) {
      os << ',';
      if (!cell.active) {
        os << "inactive";
      } else {
        os << cell.value;
      }
    }
    os << '\n';
  }
}

inline std::string trace_csv(const Trace& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

}  // namespace ivr
