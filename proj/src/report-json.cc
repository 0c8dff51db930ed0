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

#include "coexfair/report-json.h"

namespace coexfair
{

using nlohmann::json;

namespace
{

template <typename T>
json
OrNull (const std::optional<T> &v)
{
  return v ? json (*v) : json (nullptr);
}

} // namespace

json
ToJson (const ScenarioConfig &cfg)
{
  return {
    {"t_on_us", cfg.duty.tOn},
    {"t_off_us", cfg.duty.tOff},
    {"phase_origin_us", cfg.duty.phaseOrigin},
    {"difs_us", cfg.mac.difs},
    {"slot_us", cfg.mac.slot},
    {"cw_min", cfg.mac.cwMin},
    {"beacon_bytes", cfg.mac.beaconBytes},
    {"beacon_rate_mbps", cfg.mac.beaconRateMbps},
    {"t_b_us", cfg.mac.tb},
    {"preamble_us", cfg.mac.preamble},
    {"beacon_interval_us", cfg.mac.beaconInterval},
    {"p_o", cfg.pol.po},
  };
}

ScenarioConfig
ScenarioFromJson (const json &j)
{
  try
    {
      ScenarioConfig cfg;
      cfg.duty.tOn = j.at ("t_on_us").get<TimeUs> ();
      cfg.duty.tOff = j.at ("t_off_us").get<TimeUs> ();
      cfg.duty.phaseOrigin = j.at ("phase_origin_us").get<TimeUs> ();
      cfg.mac.difs = j.at ("difs_us").get<TimeUs> ();
      cfg.mac.slot = j.at ("slot_us").get<TimeUs> ();
      cfg.mac.cwMin = j.at ("cw_min").get<std::int64_t> ();
      cfg.mac.beaconBytes = j.at ("beacon_bytes").get<std::int64_t> ();
      cfg.mac.beaconRateMbps = j.at ("beacon_rate_mbps").get<double> ();
      cfg.mac.tb = j.at ("t_b_us").get<TimeUs> ();
      cfg.mac.preamble = j.at ("preamble_us").get<TimeUs> ();
      cfg.mac.beaconInterval = j.at ("beacon_interval_us").get<TimeUs> ();
      cfg.pol.po = j.at ("p_o").get<double> ();
      return cfg;
    }
  catch (const json::exception &e)
    {
      throw CoexError (ErrorCode::InvalidConfig, std::string ("bad config object: ") + e.what ());
    }
}

json
ToJson (const SimConfig &cfg)
{
  json j = ToJson (ScenarioConfig{cfg.duty, cfg.mac, cfg.pol});
  j["n_beacons"] = cfg.nBeacons;
  j["seed"] = cfg.seed;
  j["grid_offset_us"] = cfg.gridOffset ? json (*cfg.gridOffset) : json ("AVERAGE");
  j["replications"] = cfg.replications;
  return j;
}

SimConfig
SimConfigFromJson (const json &j)
{
  const auto scenario = ScenarioFromJson (j);
  SimConfig cfg;
  cfg.duty = scenario.duty;
  cfg.mac = scenario.mac;
  cfg.pol = scenario.pol;
  try
    {
      cfg.nBeacons = j.at ("n_beacons").get<std::uint64_t> ();
      cfg.seed = j.at ("seed").get<std::uint64_t> ();
      cfg.replications = j.at ("replications").get<std::uint32_t> ();
      const auto &offset = j.at ("grid_offset_us");
      if (offset.is_string ())
        {
          if (offset.get<std::string> () != "AVERAGE")
            {
              throw CoexError (ErrorCode::InvalidConfig, "grid_offset_us must be AVERAGE or an integer");
            }
        }
      else
        {
          cfg.gridOffset = offset.get<TimeUs> ();
        }
    }
  catch (const json::exception &e)
    {
      throw CoexError (ErrorCode::InvalidConfig, std::string ("bad simulation config: ") + e.what ());
    }
  return cfg;
}

json
ToJson (const AnalyticReport &r)
{
  json j = {
    {"inputs", ToJson (ScenarioConfig{r.duty, r.mac, r.pol})},
    {"error", OrNull (r.error)},
  };
  if (r.error)
    {
      return j;
    }
  j["p_s"] = r.ps;
  j["drop_probability"] = r.dropProbability;
  j["reception_probability"] = r.receptionProbability;
  j["e_t1_us"] = r.eT1;
  j["e_t2_us"] = r.eT2;
  j["e_t3_us"] = r.eT3;
  j["e_delivery_us"] = OrNull (r.eDelivery);
  j["delivery_error"] = OrNull (r.deliveryError);
  return j;
}

json
ToJson (const CaseCounts &c)
{
  json j = json::object ();
  for (auto k : kAllCases)
    {
      j[std::string (BeaconCaseName (k))] = c[k];
    }
  return j;
}

json
SummaryJson (const SimResult &r)
{
  json offsets = json::array ();
  for (const auto &rep : r.replications)
    {
      offsets.push_back (rep.firstGen - r.config.duty.phaseOrigin);
    }
  return {
    {"config", ToJson (r.config)},
    {"n_beacons_total", r.nBeacons},
    {"delivered", r.delivered},
    {"drop_rate", r.dropRate},
    {"reception_rate", 1.0 - r.dropRate},
    {"mean_delay_us", OrNull (r.meanDelayUs)},
    {"mean_additional_delay_us", OrNull (r.meanAdditionalDelayUs)},
    {"case_counts", ToJson (r.caseCounts)},
    {"tx_interval_count", r.txIntervals.size ()},
    {"rx_interval_count", r.rxIntervals.size ()},
    {"grid_offsets_us", offsets},
  };
}

json
ToJson (const ComparisonRecord &c)
{
  return {
    {"analytic", ToJson (c.analytic)},
    {"n_beacons_total", c.nBeacons},
    {"delivered", c.delivered},
    {"sim_drop_rate", c.simDropRate},
    {"sim_reception", c.simReception},
    {"case_counts", ToJson (c.caseCounts)},
    {"window_drop_rate", c.windowDropRate},
    {"sigma", c.sigma},
    {"band_3sigma", c.band3Sigma},
    {"drop_delta_vs_window", c.dropDeltaVsWindow},
    {"drop_delta_vs_analytic", c.dropDeltaVsAnalytic},
    {"drop_rel_delta_vs_analytic", OrNull (c.dropRelDeltaVsAnalytic)},
    {"analytic_tolerance", kAnalyticDropTolerance},
    {"within_3sigma", c.withinBand},
    {"within_analytic_tolerance", c.withinAnalyticTolerance},
    {"sim_mean_delay_us", OrNull (c.simMeanDelayUs)},
    {"sim_mean_additional_delay_us", OrNull (c.simMeanAdditionalDelayUs)},
    {"delay_delta_us", OrNull (c.delayDeltaUs)},
    {"delay_rel_delta", OrNull (c.delayRelDelta)},
    {"verdict", c.Pass () ? "PASS" : "FAIL"},
  };
}

json
ToJson (const PairComparison &p)
{
  return {
    {"first", ToJson (p.first)},
    {"second", ToJson (p.second)},
    {"analytic_drop_identical", p.analyticDropIdentical},
    {"sim_drop_delta", p.simDropDelta},
    {"combined_band_3sigma", p.combinedBand3Sigma},
    {"equal_period_verdict", p.Pass () ? "PASS" : "FAIL"},
  };
}

json
ToJson (const MatchReport &m)
{
  return {
    {"n_tx", m.nTx},
    {"n_rx", m.nRx},
    {"missing_seq", m.missingSeq},
    {"loss_ratio", m.lossRatio},
    {"longest_miss_streak", m.longestMissStreak},
  };
}

} // namespace coexfair
