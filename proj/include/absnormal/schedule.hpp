#pragma once

#include "absnormal/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace absnormal {

/// Construction parameters: delta, eta, the per-base cutoff z_b, and the
/// level schedule p_n = 2^(2n+2), b_n = max(2, floor(log2 n)).
///
/// The paper preset covers every base b >= 2 with z_b computed from eta.
/// Toy presets list their bases explicitly (the keys of `z`), stop at level
/// `horizon`, and scale phi by `phi_scale` so that the bad sets are
/// non-trivial at lengths a desk machine can sweep.
struct ParamSchedule {
  std::string preset = "paper";
  bool toy = false;
  Rational delta{BigInt(1), BigInt(2)};
  Rational eta{BigInt(1), BigInt(8)};
  std::map<unsigned, std::uint64_t> z;  // toy only
  std::uint64_t horizon = 0;            // toy only
  Rational phi_scale{1};

  static ParamSchedule paper();
  /// paper, toy-small, toy-mixed, toy-deep, toy-wide.
  static ParamSchedule named(std::string_view name);
  static std::vector<std::string> preset_names();
  /// key = value lines; keys preset, delta, eta, z ("2:2, 3:2"), horizon,
  /// phi_scale. A preset key seeds the defaults the other keys override.
  static ParamSchedule parse_config(std::string_view text);
  std::string to_config() const;
  /// FNV-1a 64 of to_config().
  std::uint64_t hash() const;

  void validate() const;

  /// z_b, or 0 when b is not part of a toy universe.
  BigInt z_of(unsigned b) const;
  /// Levels (b, m) making up Delta_n: 2 <= b <= b_n, z_b <= m <= n
  /// (and m <= horizon for toy schedules). `limit` caps the listing.
  std::vector<std::pair<unsigned, std::uint64_t>> levels(std::uint64_t n, std::size_t limit = 1 << 16) const;
  /// Toy levels not in Delta_n.
  std::vector<std::pair<unsigned, std::uint64_t>> excluded_levels(std::uint64_t n) const;
};

/// 2^(2n+2).
BigInt p_of(std::uint64_t n);
std::uint64_t p_small(std::uint64_t n);
/// max(2, floor(log2 n)).
unsigned bcap(const BigInt& n);
/// Least integer above e^(12 / log 2).
const BigInt& paper_z_floor();
/// Paper z_b: max(least integer above e^(12/log 2), least z with 1/(z-1) < eta/2^b).
BigInt paper_z(unsigned b, const Rational& eta);

}  // namespace absnormal
