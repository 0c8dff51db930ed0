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

#ifndef COEXFAIR_RNG_H
#define COEXFAIR_RNG_H

#include <cstdint>

namespace coexfair
{

/// SplitMix64 finaliser.
constexpr std::uint64_t
Mix64 (std::uint64_t z)
{
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * Counter-addressable generator: draw n of stream (seed, stream) is
 * Mix64(key + (n + 1) * golden), so any draw can be reproduced without
 * replaying the ones before it and streams never share state.
 * Bounded draws use rejection so results are identical on every platform.
 */
class StreamRng
{
public:
  StreamRng (std::uint64_t seed, std::uint64_t stream)
    : m_key (Mix64 (seed ^ Mix64 (stream + 0x632be59bd9b4e019ULL)))
  {
  }

  std::uint64_t At (std::uint64_t counter) const { return Mix64 (m_key + (counter + 1) * kGolden); }

  std::uint64_t Next () { return At (m_counter++); }

  /// Uniform over [0, bound); bound must be positive.
  std::uint64_t UniformBelow (std::uint64_t bound)
  {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do
      {
        x = Next ();
      }
    while (x >= limit);
    return x % bound;
  }

  std::uint64_t Counter () const { return m_counter; }

private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t m_key;
  std::uint64_t m_counter{0};
};

} // namespace coexfair

#endif /* COEXFAIR_RNG_H */
