#pragma once

// File formats:
//   PIState JSON   {nQubits, blocks: [{twoJ, weight, rho_real, rho_imag}]}
//   counts CSV     setting_index,theta,phi,k,count   (nonzero bins only)
//   sweep CSV      N,q,M,rep,delta_aic,seed
//   sweep JSON     grid means/stds, crossingM, censored flag, config echo
//
// CSV writers put an optional preamble first, each line prefixed with "# ";
// readers skip '#' lines.

#include <iosfwd>
#include <string>
#include <string_view>

#include "aicsel/estimation.hpp"
#include "aicsel/measurement.hpp"
#include "aicsel/selection.hpp"

namespace aicsel {

std::string to_json(const PIState& state, int indent = -1);
PIState pi_state_from_json(const std::string& text);

std::string to_json(const FitResult& fit, int indent = 2);
std::string to_json(const AicReport& report, int indent = 2);

inline constexpr const char* kCountsCsvHeader = "setting_index,theta,phi,k,count";
inline constexpr const char* kSweepCsvHeader = "N,q,M,rep,delta_aic,seed";

void write_counts_csv(std::ostream& out, const CountsDataset& data,
                      std::string_view preamble = {});
/// The CSV does not carry N, so the caller supplies it. Throws ParseError
/// naming the offending line.
CountsDataset read_counts_csv(std::istream& in, int nQubits);

void write_sweep_csv(std::ostream& out, const SweepResult& result,
                     std::string_view preamble = {});
/// Records come back with deltaAic, M, repetition and seed filled in; mIndex
/// is recovered from the order of distinct M values.
std::vector<RepetitionRecord> read_sweep_csv(std::istream& in, std::vector<std::uint64_t>& mGrid);

/// `configJson` must be a JSON object; it is embedded verbatim under "config".
std::string sweep_summary_json(const SweepResult& result, const std::string& configJson);

}  // namespace aicsel
