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

#include "coexfair/cli.h"

#include "coexfair/analytic-model.h"
#include "coexfair/coex-sim.h"
#include "coexfair/config-file.h"
#include "coexfair/report-json.h"
#include "coexfair/trace-analytics.h"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

namespace coexfair
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

/// Scenario flags; each one mirrors a config-file key and overrides it.
struct ScenarioFlags
{
  std::string configPath;
  std::optional<TimeUs> tOn, tOff, phaseOrigin, difs, slot, tb, preamble, beaconInterval;
  std::optional<std::int64_t> cwMin, beaconBytes;
  std::optional<double> beaconRate, po;
  bool loose{false};

  void Register (CLI::App *app)
  {
    app->add_option ("--config", configPath, "key = value scenario file");
    app->add_option ("--t-on-us", tOn, "LTE-U ON duration");
    app->add_option ("--t-off-us", tOff, "LTE-U OFF duration");
    app->add_option ("--phase-origin-us", phaseOrigin, "start of the first ON period");
    app->add_option ("--difs-us", difs);
    app->add_option ("--slot-us", slot);
    app->add_option ("--cw-min", cwMin);
    app->add_option ("--beacon-bytes", beaconBytes);
    app->add_option ("--beacon-rate-mbps", beaconRate);
    app->add_option ("--t-b-us", tb, "beacon airtime");
    app->add_option ("--preamble-us", preamble);
    app->add_option ("--beacon-interval-us", beaconInterval);
    app->add_option ("--p-o", po, "tolerated overlap fraction");
    app->add_flag ("--loose", loose, "skip the LTE-U Forum ON/OFF bounds");
  }

  ScenarioConfig Resolve () const
  {
    ScenarioConfig cfg;
    if (!configPath.empty ())
      {
        cfg = ReadConfigFile (configPath);
      }
    auto apply = [] (auto &target, const auto &flag) {
      if (flag)
        {
          target = *flag;
        }
    };
    apply (cfg.duty.tOn, tOn);
    apply (cfg.duty.tOff, tOff);
    apply (cfg.duty.phaseOrigin, phaseOrigin);
    apply (cfg.mac.difs, difs);
    apply (cfg.mac.slot, slot);
    apply (cfg.mac.cwMin, cwMin);
    apply (cfg.mac.beaconBytes, beaconBytes);
    apply (cfg.mac.beaconRateMbps, beaconRate);
    apply (cfg.mac.tb, tb);
    apply (cfg.mac.preamble, preamble);
    apply (cfg.mac.beaconInterval, beaconInterval);
    apply (cfg.pol.po, po);
    return cfg;
  }
};

struct SimFlags
{
  std::optional<std::uint64_t> seed;
  std::uint64_t beacons;
  std::uint32_t replications;
  std::string gridOffset{"AVERAGE"};
  unsigned threads{std::max (1u, std::thread::hardware_concurrency ())};

  SimFlags (std::uint64_t defaultBeacons, std::uint32_t defaultReplications)
    : beacons (defaultBeacons),
      replications (defaultReplications)
  {
  }

  void Register (CLI::App *app)
  {
    app->add_option ("--seed", seed, "RNG seed (falls back to COEXFAIR_SEED, then 1)");
    app->add_option ("--beacons", beacons, "beacons per replication")->capture_default_str ();
    app->add_option ("--replications", replications)->capture_default_str ();
    app->add_option ("--grid-offset-us", gridOffset,
                     "first generation time after the schedule origin, or AVERAGE")
        ->capture_default_str ();
    app->add_option ("--threads", threads, "worker threads for replications");
  }

  SimConfig Resolve (const ScenarioConfig &scenario) const
  {
    SimConfig cfg;
    cfg.duty = scenario.duty;
    cfg.mac = scenario.mac;
    cfg.pol = scenario.pol;
    cfg.nBeacons = beacons;
    cfg.replications = replications;
    cfg.seed = ResolveSeed ();
    if (gridOffset != "AVERAGE")
      {
        try
          {
            std::size_t used = 0;
            cfg.gridOffset = std::stoll (gridOffset, &used);
            if (used != gridOffset.size ())
              {
                throw std::invalid_argument (gridOffset);
              }
          }
        catch (const std::exception &)
          {
            throw CoexError (ErrorCode::InvalidConfig,
                             "--grid-offset-us must be AVERAGE or an integer");
          }
      }
    return cfg;
  }

  std::uint64_t ResolveSeed () const
  {
    if (seed)
      {
        return *seed;
      }
    if (const char *env = std::getenv ("COEXFAIR_SEED"))
      {
        try
          {
            std::size_t used = 0;
            auto v = std::stoull (env, &used);
            if (used == std::string (env).size ())
              {
                return v;
              }
          }
        catch (const std::exception &)
          {
          }
        throw CoexError (ErrorCode::InvalidConfig, "COEXFAIR_SEED is not an unsigned integer");
      }
    return 1;
  }
};

/// Thrown for strict-mode rejections so they surface as one aggregated error.
struct ViolationError
{
  std::vector<std::string> violations;
};

void
RequireStrict (const DutyCycleConfig &duty, const WifiMacParams &mac, bool loose)
{
  std::vector<std::string> names;
  for (auto v : ValidateConfig (duty, !loose))
    {
      names.emplace_back (ViolationName (v));
    }
  for (const auto &m : ValidateMac (mac))
    {
      names.push_back (m);
    }
  if (!names.empty ())
    {
      throw ViolationError{names};
    }
}

json
ForumWarnings (const DutyCycleConfig &duty)
{
  json out = json::array ();
  for (auto v : ValidateConfig (duty, true))
    {
      out.push_back (ViolationName (v));
    }
  return out;
}

void
WriteFile (const fs::path &path, const std::string &content)
{
  std::ofstream f (path, std::ios::binary);
  if (!f || !(f << content) || !f.flush ())
    {
      throw CoexError (ErrorCode::Io, "cannot write " + path.string ());
    }
}

json
ReadJsonFile (const fs::path &path)
{
  std::ifstream f (path);
  if (!f)
    {
      throw CoexError (ErrorCode::Io, "cannot open " + path.string ());
    }
  try
    {
      return json::parse (f);
    }
  catch (const json::exception &e)
    {
      throw CoexError (ErrorCode::Io, path.string () + ": " + e.what ());
    }
}

std::string
Dump (const json &j)
{
  return j.dump (2) + "\n";
}

// ---------------------------------------------------------------- analytic

json
ReferenceTable (const WifiMacParams &mac, const OverlapPolicy &pol)
{
  json rows = json::array ();
  for (const auto &row : PublishedTheoryRows ())
    {
      const auto rep = Evaluate (row.duty, mac, pol);
      json r = {
        {"setup", row.label},
        {"t_on_us", row.duty.tOn},
        {"t_off_us", row.duty.tOff},
        {"reception", rep.receptionProbability},
        {"reference_reception", row.reception},
        {"reception_delta", rep.receptionProbability - row.reception},
        {"delivery_ms", rep.eDelivery ? json (*rep.eDelivery / 1000.0) : json (nullptr)},
        {"reference_delivery_ms", row.deliveryMs},
        {"delivery_delta_ms",
         rep.eDelivery ? json (*rep.eDelivery / 1000.0 - row.deliveryMs) : json (nullptr)},
        {"report", ToJson (rep)},
      };
      rows.push_back (r);
    }
  json notes = json::array (
      {"Drop window is ceil((1 - p_o) * t_b / slot) = 48 slots at p_o = 0. It reproduces the "
       "20/1 and 20/20 reference receptions exactly. The 5/5 reference (0.9559) implies a "
       "49-slot window, so that row differs by about 9e-4.",
       "Delivery times evaluate the weighted case mixture as written, without renormalising "
       "the OFF-branch weights. Every row sits about 0.08 ms below its reference value."});
  return {{"rows", rows}, {"notes", notes}};
}

std::string
ReferenceTableText (const json &table)
{
  std::ostringstream os;
  char buf[200];
  std::snprintf (buf, sizeof buf, "%-22s %10s %10s %12s %12s\n", "setup", "reception", "ref",
                 "delivery_ms", "ref_ms");
  os << buf;
  for (const auto &r : table["rows"])
    {
      std::snprintf (buf, sizeof buf, "%-22s %10.4f %10.4f %12.3f %12.2f\n",
                     r["setup"].get<std::string> ().c_str (), r["reception"].get<double> (),
                     r["reference_reception"].get<double> (), r["delivery_ms"].get<double> (),
                     r["reference_delivery_ms"].get<double> ());
      os << buf;
    }
  for (const auto &n : table["notes"])
    {
      os << "note: " << n.get<std::string> () << "\n";
    }
  return os.str ();
}

int
CmdAnalytic (const ScenarioFlags &flags, bool referenceTable, bool text, std::ostream &out,
             std::ostream &err)
{
  const auto scenario = flags.Resolve ();
  if (referenceTable)
    {
      RequireValid (scenario.mac);
      RequireValid (scenario.pol);
      const auto table = ReferenceTable (scenario.mac, scenario.pol);
      out << (text ? ReferenceTableText (table) : Dump (table));
      return 0;
    }

  const auto report = Evaluate (scenario.duty, scenario.mac, scenario.pol);
  json j = ToJson (report);
  j["forum_violations"] = ForumWarnings (scenario.duty);
  j["airtime_mismatch"] = AirtimeMismatch (scenario.mac);
  out << Dump (j);
  if (report.deliveryError)
    {
      err << json ({{"error", "WEIGHT_NEGATIVE"}, {"message", *report.deliveryError}}).dump ()
          << "\n";
      return 3;
    }
  return 0;
}

// ---------------------------------------------------------------- simulate

struct ExportSet
{
  std::vector<std::string> files;
  json notices = json::array ();
};

ExportSet
WriteSimulationOutputs (const SimResult &sim, std::uint32_t exportReplication, const fs::path &dir)
{
  ExportSet ex;
  fs::create_directories (dir);

  json summary = SummaryJson (sim);
  summary["export_replication"] = exportReplication;

  const auto &rep = sim.replications.at (exportReplication);
  WriteFile (dir / "beacons.csv", BeaconCsv (rep));
  ex.files.push_back ("beacons.csv");
  WriteFile (dir / "tx_trace.csv", TraceCsv (TraceFromReplication (rep, EventKind::Tx)));
  ex.files.push_back ("tx_trace.csv");
  WriteFile (dir / "rx_trace.csv", TraceCsv (TraceFromReplication (rep, EventKind::Rx)));
  ex.files.push_back ("rx_trace.csv");

  for (auto [kind, name] : {std::pair{EventKind::Tx, "cdf_tx.csv"}, std::pair{EventKind::Rx, "cdf_rx.csv"}})
    {
      try
        {
          WriteFile (dir / name, IntervalCdf (sim, kind).ToCsv ());
          ex.files.push_back (name);
        }
      catch (const CoexError &e)
        {
          if (e.Code () != ErrorCode::InsufficientEvents)
            {
              throw;
            }
          ex.notices.push_back (std::string (name) + " omitted: " + e.what ());
        }
    }
  summary["notices"] = ex.notices;
  WriteFile (dir / "summary.json", Dump (summary));
  ex.files.push_back ("summary.json");
  return ex;
}

void
WriteManifest (const fs::path &dir, const std::string &command, const std::vector<std::string> &args,
               const json &config, const std::vector<std::string> &files, double seconds,
               const json &extra = json::object ())
{
  json m = {
    {"tool", "coexfair"},
    {"version", kToolVersion},
    {"command", command},
    {"argv", args},
    {"config", config},
    {"outputs", files},
    {"wall_clock_seconds", seconds},
  };
  if (config.contains ("seed"))
    {
      m["seed"] = config["seed"];
    }
  m.update (extra);
  WriteFile (dir / "manifest.json", Dump (m));
}

int
CmdSimulate (const ScenarioFlags &flags, const SimFlags &simFlags, const std::string &manifestIn,
             std::uint32_t exportReplication, const std::string &outDir,
             const std::vector<std::string> &args, std::ostream &out)
{
  const auto started = std::chrono::steady_clock::now ();
  SimConfig cfg;
  if (!manifestIn.empty ())
    {
      const auto m = ReadJsonFile (manifestIn);
      if (m.value ("command", "") != "simulate")
        {
          throw CoexError (ErrorCode::InvalidConfig, "manifest is not from a simulate run");
        }
      cfg = SimConfigFromJson (m.at ("config"));
      exportReplication = m.value ("export_replication", 0u);
    }
  else
    {
      const auto scenario = flags.Resolve ();
      RequireStrict (scenario.duty, scenario.mac, flags.loose);
      cfg = simFlags.Resolve (scenario);
    }
  if (exportReplication >= cfg.replications)
    {
      throw CoexError (ErrorCode::InvalidConfig, "--export-replication out of range");
    }

  const auto sim = Simulate (cfg, simFlags.threads);
  const auto ex = WriteSimulationOutputs (sim, exportReplication, outDir);
  const double seconds =
      std::chrono::duration<double> (std::chrono::steady_clock::now () - started).count ();
  auto files = ex.files;
  files.push_back ("manifest.json");
  WriteManifest (outDir, "simulate", args, ToJson (cfg), files, seconds,
                 {{"export_replication", exportReplication}});
  out << Dump (SummaryJson (sim));
  return 0;
}

// ---------------------------------------------------------------- analyze-trace

BeaconTrace
LoadTrace (const fs::path &path, EventKind side)
{
  std::ifstream in (path);
  if (!in)
    {
      throw CoexError (ErrorCode::Io, "cannot open " + path.string ());
    }
  std::string header;
  std::getline (in, header);
  in.seekg (0);
  if (header.find ("tx_end_us") != std::string::npos)
    {
      return ParseBeaconCsv (in, side, path.filename ().string ());
    }
  return ParseCaptureCsv (in, path.filename ().string ());
}

int
CmdAnalyzeTrace (const std::string &txPath, const std::string &rxPath, const std::string &cleanPath,
                 TimeUs interval, const std::string &outDir, const std::vector<std::string> &args,
                 std::ostream &out)
{
  const auto started = std::chrono::steady_clock::now ();
  const auto tx = LoadTrace (txPath, EventKind::Tx);
  const auto rx = LoadTrace (rxPath, EventKind::Rx);
  const auto match = MatchSequences (tx, rx);

  json report = {{"match", ToJson (match)}, {"notices", json::array ()}};
  if (cleanPath.empty ())
    {
      report["delay"] = nullptr;
      report["notices"].push_back ("delay section omitted: no --clean trace given to estimate b1");
    }
  else
    {
      const auto clean = LoadTrace (cleanPath, EventKind::Rx);
      const double b1 = EstimateFirstBeaconTime (clean, interval);
      report["delay"] = {
        {"b1_us", b1},
        {"nominal_interval_us", interval},
        {"n_rx", rx.entries.size ()},
        {"additional_delay_us", AdditionalDelay (rx, b1, interval)},
        {"drops_in_window", !match.missingSeq.empty ()},
      };
      if (!match.missingSeq.empty ())
        {
          report["notices"].push_back (
              "receiver trace has losses; the delay estimate assumes none were dropped");
        }
    }

  std::vector<std::string> files;
  if (!outDir.empty ())
    {
      fs::create_directories (outDir);
    }
  for (auto [trace, name] : {std::pair{&tx, "cdf_tx.csv"}, std::pair{&rx, "cdf_rx.csv"}})
    {
      try
        {
          const auto cdf = IntervalCdf (*trace);
          report[std::string (name) == "cdf_tx.csv" ? "tx_interval_p999_us" : "rx_interval_p999_us"] =
              cdf.Quantile (0.999);
          if (!outDir.empty ())
            {
              WriteFile (fs::path (outDir) / name, cdf.ToCsv ());
              files.push_back (name);
            }
        }
      catch (const CoexError &e)
        {
          if (e.Code () != ErrorCode::InsufficientEvents)
            {
              throw;
            }
          report["notices"].push_back (std::string (name) + " omitted: " + e.what ());
        }
    }
  if (!outDir.empty ())
    {
      WriteFile (fs::path (outDir) / "analysis.json", Dump (report));
      files.push_back ("analysis.json");
      files.push_back ("manifest.json");
      const double seconds =
          std::chrono::duration<double> (std::chrono::steady_clock::now () - started).count ();
      WriteManifest (outDir, "analyze-trace", args,
                     {{"tx", txPath}, {"rx", rxPath}, {"clean", cleanPath}, {"interval_us", interval}},
                     files, seconds);
    }
  out << Dump (report);
  return 0;
}

// ---------------------------------------------------------------- compare

int
CmdCompare (const ScenarioFlags &flags, const SimFlags &simFlags, const std::string &pair,
            bool requirePass, const std::string &outPath, std::ostream &out)
{
  const auto scenario = flags.Resolve ();
  std::vector<std::string> problems;
  auto collect = [&problems] (const std::string &prefix, const DutyCycleConfig &duty, bool loose) {
    for (auto v : ValidateConfig (duty, !loose))
      {
        problems.push_back (prefix + std::string (ViolationName (v)));
      }
  };
  collect ("", scenario.duty, flags.loose);
  for (const auto &m : ValidateMac (scenario.mac))
    {
      problems.push_back (m);
    }
  if (scenario.duty.tOff <= scenario.mac.tb + scenario.mac.difs)
    {
      problems.emplace_back ("WEIGHT_NEGATIVE");
    }

  std::optional<DutyCycleConfig> second;
  if (!pair.empty ())
    {
      DutyCycleConfig d = scenario.duty;
      const auto comma = pair.find (',');
      auto parse = [] (std::string_view s, TimeUs &v) {
        auto [ptr, ec] = std::from_chars (s.data (), s.data () + s.size (), v);
        return ec == std::errc () && ptr == s.data () + s.size ();
      };
      if (comma == std::string::npos
          || !parse (std::string_view (pair).substr (0, comma), d.tOn)
          || !parse (std::string_view (pair).substr (comma + 1), d.tOff))
        {
          problems.emplace_back ("--pair expects T_ON_US,T_OFF_US");
        }
      else
        {
          collect ("pair:", d, flags.loose);
          if (d.tOff <= scenario.mac.tb + scenario.mac.difs)
            {
              problems.emplace_back ("pair:WEIGHT_NEGATIVE");
            }
          second = d;
        }
    }
  if (!problems.empty ())
    {
      throw ViolationError{problems};
    }

  const auto cfg = simFlags.Resolve (scenario);
  json report;
  bool pass = false;
  if (second)
    {
      const auto p = ComparePair (cfg, *second, simFlags.threads);
      report = ToJson (p);
      pass = p.Pass ();
    }
  else
    {
      const auto c = CompareWithAnalytic (cfg, simFlags.threads);
      report = ToJson (c);
      pass = c.Pass ();
    }
  report["sim_config"] = ToJson (cfg);
  if (!outPath.empty ())
    {
      WriteFile (outPath, Dump (report));
    }
  out << Dump (report);
  return (requirePass && !pass) ? 4 : 0;
}

void
ReportError (std::ostream &err, const std::string &code, const std::string &message,
             const json &extra = json::object ())
{
  json j = {{"error", code}, {"message", message}};
  j.update (extra);
  err << j.dump () << "\n";
}

} // namespace

int
RunCli (const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Beacon association-fairness model, simulator and trace analyzer for LTE-U "
               "duty cycling",
               "coexfair"};
  app.require_subcommand (1);
  app.set_version_flag ("--version", kToolVersion);

  auto *analytic = app.add_subcommand ("analytic", "evaluate the closed-form model");
  ScenarioFlags analyticFlags;
  analyticFlags.Register (analytic);
  bool referenceTable = false;
  bool text = false;
  analytic->add_flag ("--paper-table", referenceTable,
                      "evaluate the three reference setups against their published theory values");
  analytic->add_flag ("--text", text, "plain-text table instead of JSON (with --paper-table)");

  auto *simulate = app.add_subcommand ("simulate", "Monte Carlo simulation with CSV exports");
  ScenarioFlags simulateFlags;
  simulateFlags.Register (simulate);
  SimFlags simulateSim (3000, 1);
  simulateSim.Register (simulate);
  std::string outDir;
  std::string manifestIn;
  std::uint32_t exportReplication = 0;
  simulate->add_option ("--out-dir", outDir, "directory for summary, CSVs and manifest")->required ();
  simulate->add_option ("--from-manifest", manifestIn, "re-run the configuration of a manifest");
  simulate->add_option ("--export-replication", exportReplication,
                        "replication written to the per-beacon and trace CSVs");

  auto *analyze = app.add_subcommand ("analyze-trace", "loss, delay and interval CDFs of captures");
  std::string txPath, rxPath, cleanPath, analyzeOut;
  TimeUs interval = 102400;
  analyze->add_option ("--tx", txPath, "transmitter-side capture CSV")->required ();
  analyze->add_option ("--rx", rxPath, "receiver-side capture CSV")->required ();
  analyze->add_option ("--clean", cleanPath, "clean-channel capture used to estimate b1");
  analyze->add_option ("--out", analyzeOut, "output directory");
  analyze->add_option ("--interval-us", interval, "nominal beacon interval")->capture_default_str ();

  auto *compare = app.add_subcommand ("compare", "simulate and compare against the closed form");
  ScenarioFlags compareFlags;
  compareFlags.Register (compare);
  SimFlags compareSim (10, 10000);
  compareSim.Register (compare);
  std::string pair, compareOut;
  bool requirePass = false;
  compare->add_option ("--pair", pair, "second schedule T_ON_US,T_OFF_US for the equal-period check");
  compare->add_option ("--out", compareOut, "also write the JSON report here");
  compare->add_flag ("--require-pass", requirePass, "exit 4 when a verdict is FAIL");

  try
    {
      std::vector<std::string> reversed (args.rbegin (), args.rend ());
      app.parse (std::move (reversed));
    }
  catch (const CLI::CallForHelp &)
    {
      out << app.help ();
      return 0;
    }
  catch (const CLI::CallForAllHelp &)
    {
      out << app.help ("", CLI::AppFormatMode::All);
      return 0;
    }
  catch (const CLI::CallForVersion &)
    {
      out << kToolVersion << "\n";
      return 0;
    }
  catch (const CLI::ParseError &e)
    {
      ReportError (err, "USAGE", e.what ());
      return 2;
    }

  try
    {
      if (analytic->parsed ())
        {
          return CmdAnalytic (analyticFlags, referenceTable, text, out, err);
        }
      if (simulate->parsed ())
        {
          return CmdSimulate (simulateFlags, simulateSim, manifestIn, exportReplication, outDir, args,
                              out);
        }
      if (analyze->parsed ())
        {
          return CmdAnalyzeTrace (txPath, rxPath, cleanPath, interval, analyzeOut, args, out);
        }
      if (compare->parsed ())
        {
          return CmdCompare (compareFlags, compareSim, pair, requirePass, compareOut, out);
        }
    }
  catch (const ViolationError &v)
    {
      ReportError (err, "INVALID_CONFIG", "configuration rejected", {{"violations", v.violations}});
      return 2;
    }
  catch (const CoexError &e)
    {
      json extra = json::object ();
      if (e.Line () > 0)
        {
          extra["line"] = e.Line ();
        }
      ReportError (err, std::string (ErrorCodeName (e.Code ())), e.what (), extra);
      return 2;
    }
  catch (const std::exception &e)
    {
      ReportError (err, "INTERNAL", e.what ());
      return 1;
    }
  return 2;
}

} // namespace coexfair
