#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "premarshal/model.hpp"

namespace premarshal {

/// Seedable, portable RNG stream: splitmix64-seeded xoshiro256**.
/// Bounded draws use rejection sampling, so sequences are identical on
/// every platform for a given seed.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);

private:
  std::uint64_t state_[4];
};

struct GenConfig {
  int priorities = 6;   // 2, 3 or 6
  int stacks = 3;       // 3, 5, 7 or 9
  int height = 4;       // 4 or 6
  int fill_percent = 50; // 50 or 70
  std::uint64_t seed = 0;
  int count = 1;

  int num_containers() const { return stacks * height * fill_percent / 100; }
};

/// One instance with 6 priority levels: containers labeled cyclically
/// 1..6, each placed on a uniformly random non-full stack in a uniformly
/// random order.
Instance generate_base6(const GenConfig& config, RngStream& rng);

/// Ad-hoc instance outside the parameter table: floor(S*H*F/100)
/// containers labeled cyclically 1..priorities, placed like the base-6
/// protocol.
Instance generate_free(int priorities, int stacks, int height, int fill_percent,
                       RngStream& rng);

/// Same stack shapes, priorities grouped down to 2 or 3 levels.
Instance regroup(const Instance& base6, int priorities);

/// Derives a Configuration-mode instance whose target sorts all
/// containers greedily, lowest priority level first, bottom-up.
Instance derive_target(const Instance& instance);

struct SuiteEntry {
  GenConfig config;
  int index = 0; // per-cell instance index
  Instance instance;
  std::string file_name() const;
};

/// Full generation protocol: for every (stacks, height, fill) cell,
/// draws base-6 instances, derives the 2- and 3-priority variants,
/// discards the triple when any variant has no wrongly placed container,
/// until `per_cell` accepted triples exist. per_cell=20 yields 960
/// instances across 48 cells. Deterministic per (seed, cell).
std::vector<SuiteEntry> generate_suite(std::uint64_t seed, int per_cell);

/// Same protocol restricted to a single (stacks, height, fill) cell.
std::vector<SuiteEntry> generate_cell(int stacks, int height, int fill_percent,
                                      std::uint64_t seed, int per_cell);

} // namespace premarshal
