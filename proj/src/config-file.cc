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

#include "coexfair/config-file.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace coexfair
{

namespace
{

std::string_view
Trim (std::string_view s)
{
  const auto ws = " \t\r\n";
  auto b = s.find_first_not_of (ws);
  if (b == std::string_view::npos)
    {
      return {};
    }
  auto e = s.find_last_not_of (ws);
  return s.substr (b, e - b + 1);
}

bool
ParseInt (std::string_view s, std::int64_t &out)
{
  auto [ptr, ec] = std::from_chars (s.data (), s.data () + s.size (), out);
  return ec == std::errc () && ptr == s.data () + s.size ();
}

bool
ParseDouble (std::string_view s, double &out)
{
  auto [ptr, ec] = std::from_chars (s.data (), s.data () + s.size (), out);
  return ec == std::errc () && ptr == s.data () + s.size ();
}

std::string
FormatDouble (double v)
{
  std::ostringstream os;
  os.precision (17);
  os << v;
  return os.str ();
}

} // namespace

bool
SetConfigValue (ScenarioConfig &cfg, std::string_view key, std::string_view value)
{
  struct IntKey
  {
    std::string_view name;
    std::int64_t *target;
  };
  const IntKey ints[] = {
    {"t_on_us", &cfg.duty.tOn},
    {"t_off_us", &cfg.duty.tOff},
    {"phase_origin_us", &cfg.duty.phaseOrigin},
    {"difs_us", &cfg.mac.difs},
    {"slot_us", &cfg.mac.slot},
    {"cw_min", &cfg.mac.cwMin},
    {"beacon_bytes", &cfg.mac.beaconBytes},
    {"t_b_us", &cfg.mac.tb},
    {"preamble_us", &cfg.mac.preamble},
    {"beacon_interval_us", &cfg.mac.beaconInterval},
  };
  for (const auto &k : ints)
    {
      if (k.name == key)
        {
          if (!ParseInt (value, *k.target))
            {
              throw CoexError (ErrorCode::InvalidConfig,
                               "expected an integer for " + std::string (key));
            }
          return true;
        }
    }
  double *target = nullptr;
  if (key == "beacon_rate_mbps")
    {
      target = &cfg.mac.beaconRateMbps;
    }
  else if (key == "p_o")
    {
      target = &cfg.pol.po;
    }
  if (target == nullptr)
    {
      return false;
    }
  if (!ParseDouble (value, *target))
    {
      throw CoexError (ErrorCode::InvalidConfig, "expected a number for " + std::string (key));
    }
  return true;
}

ScenarioConfig
ReadConfig (std::istream &in, ScenarioConfig base)
{
  std::set<std::string, std::less<>> seen;
  std::string raw;
  std::int64_t lineNo = 0;
  while (std::getline (in, raw))
    {
      ++lineNo;
      std::string_view line = raw;
      if (auto hash = line.find ('#'); hash != std::string_view::npos)
        {
          line = line.substr (0, hash);
        }
      line = Trim (line);
      if (line.empty ())
        {
          continue;
        }
      auto eq = line.find ('=');
      if (eq == std::string_view::npos)
        {
          throw CoexError (ErrorCode::InvalidConfig, "expected key = value", lineNo);
        }
      auto key = Trim (line.substr (0, eq));
      auto value = Trim (line.substr (eq + 1));
      if (!seen.emplace (key).second)
        {
          throw CoexError (ErrorCode::InvalidConfig, "duplicate key " + std::string (key), lineNo);
        }
      try
        {
          if (!SetConfigValue (base, key, value))
            {
              throw CoexError (ErrorCode::InvalidConfig, "unknown key " + std::string (key),
                               lineNo);
            }
        }
      catch (const CoexError &e)
        {
          throw CoexError (e.Code (), e.what (), lineNo);
        }
    }
  return base;
}

ScenarioConfig
ReadConfigFile (const std::filesystem::path &path, ScenarioConfig base)
{
  std::ifstream in (path);
  if (!in)
    {
      throw CoexError (ErrorCode::Io, "cannot open config " + path.string ());
    }
  return ReadConfig (in, base);
}

std::string
WriteConfig (const ScenarioConfig &cfg)
{
  std::ostringstream os;
  os << "t_on_us = " << cfg.duty.tOn << "\n"
     << "t_off_us = " << cfg.duty.tOff << "\n"
     << "phase_origin_us = " << cfg.duty.phaseOrigin << "\n"
     << "difs_us = " << cfg.mac.difs << "\n"
     << "slot_us = " << cfg.mac.slot << "\n"
     << "cw_min = " << cfg.mac.cwMin << "\n"
     << "beacon_bytes = " << cfg.mac.beaconBytes << "\n"
     << "beacon_rate_mbps = " << FormatDouble (cfg.mac.beaconRateMbps) << "\n"
     << "t_b_us = " << cfg.mac.tb << "\n"
     << "preamble_us = " << cfg.mac.preamble << "\n"
     << "beacon_interval_us = " << cfg.mac.beaconInterval << "\n"
     << "p_o = " << FormatDouble (cfg.pol.po) << "\n";
  return os.str ();
}

} // namespace coexfair
