#pragma once

#include "absnormal/bad_sets.hpp"
#include "absnormal/constructor.hpp"
#include "absnormal/discrepancy.hpp"
#include "absnormal/mc.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace absnormal {

// Structured records are JSON objects with a "schema" field. Every rational
// is a "num/den" string.
inline constexpr const char* kCertificateSchema = "absnormal.certificate/1";
inline constexpr const char* kReportSchema = "absnormal.report/1";

std::string certificate_json(const Certificate& cert);
/// ErrorKind::parse on malformed input or a schedule hash mismatch.
Certificate parse_certificate(std::string_view text);

/// '#' header lines (preset, hash, parameters) then 64 digits per line.
std::string digit_file(const Certificate& cert);
/// Digits of a digit file; headers and whitespace skipped.
std::string parse_digit_file(std::string_view text);
/// 0.d1d2...dk in base 2.
Rational digits_value(std::string_view digits);

std::string verify_json(const VerifyReport& rep);

enum class SetKind { G, H, delta };
std::string badset_json(const SetEnclosure& set, const ParamSchedule& sched, SetKind which, unsigned b,
                        std::uint64_t n, bool list_intervals);

std::string discrepancy_json(const DiscrepancyReport& rep);
/// N, D_N, ratio_lo, ratio_hi over the report's grid.
std::string discrepancy_csv(const DiscrepancyReport& rep);

std::string estimate_json(const EstimateReport& rep);
std::string lemma_grid_json(unsigned lemma, const std::vector<BoundCheck>& rows);
std::string depth_sweep_json(std::uint64_t seed, const std::vector<DepthCase>& cases);
std::string block_sweep_json(std::uint64_t seed, const std::vector<BlockCase>& cases);
std::string tail_check_json(const ParamSchedule& sched, std::uint64_t n0, const TailSumCheck& check);
std::string chain_json(const ChainReport& rep);
std::string cost_json(const CostEstimate& est);

}  // namespace absnormal
