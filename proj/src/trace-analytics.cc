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

#include "coexfair/trace-analytics.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_set>

namespace coexfair
{

namespace
{

std::vector<std::string_view>
SplitCsv (std::string_view line)
{
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;)
    {
      auto comma = line.find (',', start);
      cells.push_back (line.substr (start, comma - start));
      if (comma == std::string_view::npos)
        {
          break;
        }
      start = comma + 1;
    }
  for (auto &c : cells)
    {
      while (!c.empty () && (c.back () == '\r' || c.back () == ' '))
        {
          c.remove_suffix (1);
        }
      while (!c.empty () && c.front () == ' ')
        {
          c.remove_prefix (1);
        }
    }
  return cells;
}

bool
ToInt (std::string_view s, std::int64_t &out)
{
  if (s.empty ())
    {
      return false;
    }
  auto [ptr, ec] = std::from_chars (s.data (), s.data () + s.size (), out);
  return ec == std::errc () && ptr == s.data () + s.size ();
}

std::size_t
ColumnIndex (const std::vector<std::string_view> &header, std::string_view name)
{
  auto it = std::find (header.begin (), header.end (), name);
  if (it == header.end ())
    {
      throw CoexError (ErrorCode::MalformedRow, "header lacks column " + std::string (name), 1);
    }
  return static_cast<std::size_t> (it - header.begin ());
}

struct NumberedEntry
{
  TraceEntry entry;
  std::int64_t line;
};

BeaconTrace
Finish (std::vector<NumberedEntry> rows, std::string label, ParseOptions opts)
{
  if (rows.empty ())
    {
      throw CoexError (ErrorCode::EmptyTrace, "trace " + label + " has no rows");
    }
  if (opts.sortRows)
    {
      std::stable_sort (rows.begin (), rows.end (), [] (const auto &a, const auto &b) {
        return a.entry.timestampUs < b.entry.timestampUs;
      });
    }
  BeaconTrace trace;
  trace.sourceLabel = std::move (label);
  trace.entries.reserve (rows.size ());
  for (std::size_t i = 0; i < rows.size (); ++i)
    {
      if (i > 0 && rows[i].entry.timestampUs <= rows[i - 1].entry.timestampUs)
        {
          throw CoexError (ErrorCode::NonMonotoneTimestamp,
                           "timestamp not after the previous row at line "
                               + std::to_string (rows[i].line),
                           rows[i].line);
        }
      trace.entries.push_back (rows[i].entry);
    }
  return trace;
}

std::ifstream
OpenOrThrow (const std::filesystem::path &path)
{
  std::ifstream in (path);
  if (!in)
    {
      throw CoexError (ErrorCode::Io, "cannot open " + path.string ());
    }
  return in;
}

} // namespace

std::vector<TimeUs>
BeaconTrace::Timestamps () const
{
  std::vector<TimeUs> out;
  out.reserve (entries.size ());
  for (const auto &e : entries)
    {
      out.push_back (e.timestampUs);
    }
  return out;
}

BeaconTrace
ParseCaptureCsv (std::istream &in, const std::string &label, ParseOptions opts)
{
  std::string line;
  if (!std::getline (in, line))
    {
      throw CoexError (ErrorCode::EmptyTrace, "trace " + label + " is empty");
    }
  const auto header = SplitCsv (line);
  const auto tsCol = ColumnIndex (header, "timestamp_us");
  const auto seqCol = ColumnIndex (header, "seq_no");

  std::vector<NumberedEntry> rows;
  std::int64_t lineNo = 1;
  while (std::getline (in, line))
    {
      ++lineNo;
      if (line.empty () || line == "\r")
        {
          continue;
        }
      const auto cells = SplitCsv (line);
      NumberedEntry row{{0, 0}, lineNo};
      if (cells.size () != header.size () || !ToInt (cells[tsCol], row.entry.timestampUs)
          || !ToInt (cells[seqCol], row.entry.seqNo) || row.entry.seqNo < 0
          || row.entry.seqNo >= kSeqModulus)
        {
          throw CoexError (ErrorCode::MalformedRow,
                           "malformed row at line " + std::to_string (lineNo), lineNo);
        }
      rows.push_back (row);
    }
  return Finish (std::move (rows), label, opts);
}

BeaconTrace
ParseCaptureCsv (const std::filesystem::path &path, ParseOptions opts)
{
  auto in = OpenOrThrow (path);
  return ParseCaptureCsv (in, path.filename ().string (), opts);
}

BeaconTrace
ParseBeaconCsv (std::istream &in, EventKind side, const std::string &label)
{
  std::string line;
  if (!std::getline (in, line))
    {
      throw CoexError (ErrorCode::EmptyTrace, "beacon CSV " + label + " is empty");
    }
  const auto header = SplitCsv (line);
  const auto idxCol = ColumnIndex (header, "index");
  const auto endCol = ColumnIndex (header, "tx_end_us");
  const auto delCol = ColumnIndex (header, "delivered");

  std::vector<NumberedEntry> rows;
  std::int64_t lineNo = 1;
  while (std::getline (in, line))
    {
      ++lineNo;
      if (line.empty () || line == "\r")
        {
          continue;
        }
      const auto cells = SplitCsv (line);
      std::int64_t index = 0;
      std::int64_t delivered = 0;
      if (cells.size () != header.size () || !ToInt (cells[idxCol], index) || index < 0
          || !ToInt (cells[delCol], delivered) || (delivered != 0 && delivered != 1))
        {
          throw CoexError (ErrorCode::MalformedRow,
                           "malformed row at line " + std::to_string (lineNo), lineNo);
        }
      if (cells[endCol].empty ())
        {
          continue; // never transmitted
        }
      NumberedEntry row{{0, index % kSeqModulus}, lineNo};
      if (!ToInt (cells[endCol], row.entry.timestampUs))
        {
          throw CoexError (ErrorCode::MalformedRow,
                           "malformed row at line " + std::to_string (lineNo), lineNo);
        }
      if (side == EventKind::Rx && delivered == 0)
        {
          continue;
        }
      rows.push_back (row);
    }
  return Finish (std::move (rows), label, {});
}

BeaconTrace
ParseBeaconCsv (const std::filesystem::path &path, EventKind side)
{
  auto in = OpenOrThrow (path);
  return ParseBeaconCsv (in, side, path.filename ().string ());
}

BeaconTrace
TraceFromReplication (const ReplicationResult &rep, EventKind side)
{
  BeaconTrace trace;
  trace.sourceLabel = side == EventKind::Tx ? "sim-tx" : "sim-rx";
  for (const auto &rec : rep.records)
    {
      if (!rec.txEnd || (side == EventKind::Rx && !rec.delivered))
        {
          continue;
        }
      trace.entries.push_back ({*rec.txEnd, static_cast<std::int64_t> (rec.index % kSeqModulus)});
    }
  return trace;
}

std::string
TraceCsv (const BeaconTrace &trace)
{
  std::string out = "timestamp_us,seq_no\n";
  for (const auto &e : trace.entries)
    {
      out += std::to_string (e.timestampUs);
      out += ',';
      out += std::to_string (e.seqNo);
      out += '\n';
    }
  return out;
}

std::vector<std::int64_t>
UnrollSequence (const BeaconTrace &trace)
{
  std::vector<std::int64_t> out;
  out.reserve (trace.entries.size ());
  std::int64_t epoch = 0;
  for (std::size_t i = 0; i < trace.entries.size (); ++i)
    {
      const auto seq = trace.entries[i].seqNo;
      if (i > 0 && trace.entries[i - 1].seqNo - seq > kSeqWrapThreshold)
        {
          epoch += kSeqModulus;
        }
      out.push_back (seq + epoch);
    }
  return out;
}

MatchReport
MatchSequences (const BeaconTrace &tx, const BeaconTrace &rx)
{
  if (tx.entries.empty ())
    {
      throw CoexError (ErrorCode::EmptyTrace, "transmitter trace is empty");
    }
  const auto txSeq = UnrollSequence (tx);
  auto rxSeq = UnrollSequence (rx);

  // The receiver capture may start after the transmitter has wrapped; put
  // its first entry in the earliest epoch where that sequence was sent.
  if (!rxSeq.empty ())
    {
      const auto first = rxSeq.front ();
      std::int64_t shift = 0;
      while (first + shift < txSeq.front ())
        {
          shift += kSeqModulus;
        }
      for (auto &s : rxSeq)
        {
          s += shift;
        }
    }

  std::unordered_set<std::int64_t> received (rxSeq.begin (), rxSeq.end ());
  std::unordered_set<std::int64_t> sent (txSeq.begin (), txSeq.end ());
  for (std::size_t i = 0; i < rxSeq.size (); ++i)
    {
      if (!sent.contains (rxSeq[i]))
        {
          throw CoexError (ErrorCode::RxNotSubset,
                           "receiver saw sequence " + std::to_string (rx.entries[i].seqNo)
                               + " that was never transmitted");
        }
    }

  MatchReport m;
  m.nTx = tx.entries.size ();
  m.nRx = rx.entries.size ();
  std::uint64_t streak = 0;
  for (std::size_t i = 0; i < txSeq.size (); ++i)
    {
      if (received.contains (txSeq[i]))
        {
          streak = 0;
          continue;
        }
      m.missingSeq.push_back (tx.entries[i].seqNo);
      m.longestMissStreak = std::max (m.longestMissStreak, ++streak);
    }
  m.lossRatio = static_cast<double> (m.missingSeq.size ()) / static_cast<double> (m.nTx);
  return m;
}

double
EstimateFirstBeaconTime (const BeaconTrace &clean, TimeUs nominalInterval)
{
  if (clean.entries.empty ())
    {
      throw CoexError (ErrorCode::EmptyTrace, "clean trace is empty");
    }
  if (clean.entries.size () < kMinCleanEntries)
    {
      throw CoexError (ErrorCode::TraceTooShort,
                       "clean trace needs at least " + std::to_string (kMinCleanEntries)
                           + " entries");
    }
  const auto seq = UnrollSequence (clean);
  std::vector<TimeUs> anchored;
  anchored.reserve (seq.size ());
  for (std::size_t i = 0; i < seq.size (); ++i)
    {
      anchored.push_back (clean.entries[i].timestampUs - (seq[i] - seq[0]) * nominalInterval);
    }
  std::sort (anchored.begin (), anchored.end ());
  if (anchored.back () - anchored.front () > kMaxGridSpread)
    {
      throw CoexError (ErrorCode::GridMisfit,
                       "clean trace residual spread " + std::to_string (anchored.back () - anchored.front ())
                           + " us exceeds " + std::to_string (kMaxGridSpread) + " us");
    }
  const auto n = anchored.size ();
  if (n % 2 == 1)
    {
      return static_cast<double> (anchored[n / 2]);
    }
  return (static_cast<double> (anchored[n / 2 - 1]) + static_cast<double> (anchored[n / 2])) / 2.0;
}

double
AdditionalDelay (const BeaconTrace &rx, double b1, TimeUs nominalInterval)
{
  if (rx.entries.empty ())
    {
      throw CoexError (ErrorCode::EmptyTrace, "receiver trace is empty");
    }
  // sum offsets from the first timestamp exactly, then add it back
  const TimeUs t0 = rx.entries.front ().timestampUs;
  std::int64_t offsetSum = 0;
  for (const auto &e : rx.entries)
    {
      offsetSum += e.timestampUs - t0;
    }
  const auto n = static_cast<double> (rx.entries.size ());
  const double meanT = static_cast<double> (t0) + static_cast<double> (offsetSum) / n;
  return meanT - b1 - static_cast<double> (nominalInterval) * (n - 1.0) / 2.0;
}

CdfSeries
IntervalCdf (const BeaconTrace &trace)
{
  if (trace.entries.size () < 2)
    {
      throw CoexError (ErrorCode::InsufficientEvents, "need at least two entries");
    }
  const auto times = trace.Timestamps ();
  return CdfSeries::FromSamples (SuccessiveDifferences (times));
}

} // namespace coexfair
