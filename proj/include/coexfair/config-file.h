/*
 * Copyright (c) 2026
 *
 * This program is free software; you can redistribute it and/or modify
 * it under the terms of the GNU General Public License version 2 as
 * published by the Free Software Foundation;
 *
 * This program is distributed in the hope that it will be useful,
 * but WITHOUT ANY WARRANTY; without even the implied warranty of
 * MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
 * GNU General Public License for more details.
 *
 * You should have received a copy of the GNU General Public License
 * along with this program; if not, write to the Free Software
 * Foundation, Inc., 59 Temple Place, Suite 330, Boston, MA  02111-1307  USA
 *
 */

#ifndef COEXFAIR_CONFIG_FILE_H
#define COEXFAIR_CONFIG_FILE_H

#include "coexfair/coex-core.h"

#include <array>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>

namespace coexfair
{

/// Everything a run needs besides the simulation controls.
struct ScenarioConfig
{
  DutyCycleConfig duty;
  WifiMacParams mac;
  OverlapPolicy pol;

  bool operator== (const ScenarioConfig &) const = default;
};

/// Recognised keys, in the order WriteConfig emits them.
inline constexpr std::array<std::string_view, 12> kConfigKeys = {
  "t_on_us",      "t_off_us",         "phase_origin_us", "difs_us",
  "slot_us",      "cw_min",           "beacon_bytes",    "beacon_rate_mbps",
  "t_b_us",       "preamble_us",      "beacon_interval_us", "p_o",
};

/**
 * Reads `key = value` lines.  Blank lines and `#` comments are skipped.
 * Keys that are absent keep the values already in `base`, so passing a
 * default ScenarioConfig gives the standard MAC parameters.  Unknown keys,
 * duplicate keys and unparseable values raise InvalidConfig with the line.
 */
ScenarioConfig ReadConfig (std::istream &in, ScenarioConfig base = {});
ScenarioConfig ReadConfigFile (const std::filesystem::path &path, ScenarioConfig base = {});

/// Applies one key/value pair; returns false for an unknown key.
bool SetConfigValue (ScenarioConfig &cfg, std::string_view key, std::string_view value);

std::string WriteConfig (const ScenarioConfig &cfg);

} // namespace coexfair

#endif /* COEXFAIR_CONFIG_FILE_H */
