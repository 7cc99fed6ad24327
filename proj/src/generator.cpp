#include "premarshal/generator.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace premarshal {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

RngStream::RngStream(std::uint64_t seed) {
  for (auto& word : state_) word = splitmix64(seed);
}

std::uint64_t RngStream::next() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  // reject the first 2^64 mod bound values so the draw is unbiased
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return (x - threshold) % bound;
  }
}

Instance generate_free(int priorities, int stacks, int height, int fill_percent,
                       RngStream& rng) {
  const int n = stacks * height * fill_percent / 100;
  std::vector<Priority> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i % priorities + 1;

  Instance instance;
  instance.mode = Mode::Priority;
  instance.num_stacks = stacks;
  instance.max_height = height;
  instance.num_priorities = priorities;
  instance.initial.stacks.assign(stacks, {});

  while (!pool.empty()) {
    const auto pick = rng.next_below(pool.size());
    const Priority priority = pool[pick];
    pool[pick] = pool.back();
    pool.pop_back();

    std::vector<int> open;
    for (int s = 0; s < stacks; ++s)
      if (static_cast<int>(instance.initial.stacks[s].size()) < height)
        open.push_back(s);
    const int stack = open[rng.next_below(open.size())];
    instance.initial.stacks[stack].push_back(priority);
  }
  return instance;
}

Instance generate_base6(const GenConfig& config, RngStream& rng) {
  return generate_free(6, config.stacks, config.height, config.fill_percent, rng);
}

Instance regroup(const Instance& base6, int priorities) {
  if (base6.num_priorities != 6)
    throw std::invalid_argument("regroup expects a 6-priority instance");
  if (priorities != 2 && priorities != 3)
    throw std::invalid_argument("regroup target must be 2 or 3 priorities");
  Instance grouped = base6;
  grouped.num_priorities = priorities;
  for (auto& stack : grouped.initial.stacks)
    for (Priority& p : stack) p = priorities == 2 ? (p <= 3 ? 1 : 2) : (p + 1) / 2;
  return grouped;
}

Instance derive_target(const Instance& instance) {
  std::vector<Priority> all;
  for (const auto& stack : instance.initial.stacks)
    all.insert(all.end(), stack.begin(), stack.end());
  std::sort(all.begin(), all.end(), std::greater<>());

  Layout target;
  target.stacks.assign(instance.num_stacks, {});
  int stack = 0;
  for (Priority p : all) {
    while (static_cast<int>(target.stacks[stack].size()) >= instance.max_height)
      ++stack;
    target.stacks[stack].push_back(p);
  }

  Instance configured = instance;
  configured.mode = Mode::Configuration;
  configured.target = std::move(target);
  configured.validate();
  return configured;
}

std::string SuiteEntry::file_name() const {
  return "p" + std::to_string(config.priorities) + "_s" +
         std::to_string(config.stacks) + "_h" + std::to_string(config.height) +
         "_f" + std::to_string(config.fill_percent) + "_i" +
         std::to_string(index) + ".json";
}

namespace {

constexpr int kStackValues[] = {3, 5, 7, 9};
constexpr int kHeightValues[] = {4, 6};
constexpr int kFillValues[] = {50, 70};
constexpr long kRetryCap = 1000000;

int cell_index(int stacks, int height, int fill) {
  int si = -1, hi = -1, fi = -1;
  for (int i = 0; i < 4; ++i)
    if (kStackValues[i] == stacks) si = i;
  for (int i = 0; i < 2; ++i) {
    if (kHeightValues[i] == height) hi = i;
    if (kFillValues[i] == fill) fi = i;
  }
  if (si < 0 || hi < 0 || fi < 0)
    throw std::invalid_argument("cell parameters outside the parameter table");
  return (si * 2 + hi) * 2 + fi;
}

bool has_wrongly_placed(const Instance& instance) {
  const auto wrong = wrongly_placed(instance.initial);
  return std::accumulate(wrong.begin(), wrong.end(), 0) > 0;
}

} // namespace

std::vector<SuiteEntry> generate_cell(int stacks, int height, int fill_percent,
                                      std::uint64_t seed, int per_cell) {
  const int cell = cell_index(stacks, height, fill_percent);
  std::uint64_t chain = seed;
  splitmix64(chain); // decorrelate from the raw user seed
  chain += static_cast<std::uint64_t>(cell);
  RngStream rng(splitmix64(chain));

  std::vector<SuiteEntry> entries;
  long attempts = 0;
  for (int accepted = 0; accepted < per_cell;) {
    if (++attempts > kRetryCap)
      throw std::runtime_error(
          "instance generation exceeded retry cap for cell s" +
          std::to_string(stacks) + " h" + std::to_string(height) + " f" +
          std::to_string(fill_percent));
    GenConfig config{6, stacks, height, fill_percent, seed, per_cell};
    Instance base = generate_base6(config, rng);
    Instance p2 = regroup(base, 2);
    Instance p3 = regroup(base, 3);
    if (!has_wrongly_placed(base) || !has_wrongly_placed(p2) ||
        !has_wrongly_placed(p3))
      continue; // all three variants are discarded together
    for (const auto* variant : {&p2, &p3, &base}) {
      SuiteEntry entry;
      entry.config = config;
      entry.config.priorities = variant->num_priorities;
      entry.index = accepted;
      entry.instance = *variant;
      entries.push_back(std::move(entry));
    }
    ++accepted;
  }
  return entries;
}

std::vector<SuiteEntry> generate_suite(std::uint64_t seed, int per_cell) {
  std::vector<SuiteEntry> suite;
  for (int stacks : kStackValues)
    for (int height : kHeightValues)
      for (int fill : kFillValues) {
        auto cell = generate_cell(stacks, height, fill, seed, per_cell);
        suite.insert(suite.end(), std::make_move_iterator(cell.begin()),
                     std::make_move_iterator(cell.end()));
      }
  return suite;
}

} // namespace premarshal
