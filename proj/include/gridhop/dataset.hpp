#pragma once

// Full instance assembly, reproducible seeding and JSONL persistence.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridhop/instance.hpp"
#include "gridhop/lingo.hpp"
#include "gridhop/naming.hpp"
#include "gridhop/story.hpp"

namespace gridhop {

enum class VariantKind : std::uint8_t { clean_ordered = 0, clean_shuffled = 1, noisy_ordered = 2, noisy_shuffled = 3 };

inline constexpr std::array<VariantKind, 4> kAllVariants = {
    VariantKind::clean_ordered, VariantKind::clean_shuffled, VariantKind::noisy_ordered,
    VariantKind::noisy_shuffled};

std::string_view name_of(VariantKind v);
std::optional<VariantKind> parse_variant(std::string_view name);
inline bool is_noisy(VariantKind v) { return v == VariantKind::noisy_ordered || v == VariantKind::noisy_shuffled; }
inline bool is_shuffled(VariantKind v) { return v == VariantKind::clean_shuffled || v == VariantKind::noisy_shuffled; }

struct InstanceKey {
  int k = 0;
  std::uint64_t index = 0;
  VariantKind variant = VariantKind::clean_ordered;
};

/// Mixing function (other implementations can reproduce it):
///   h = splitmix64(master)
///   h = splitmix64(h ^ k)
///   h = splitmix64(h ^ index)
///   h = splitmix64(h ^ variant)      with clean_ordered=0 ... noisy_shuffled=3
/// where splitmix64 is the standard finalizer with increment 0x9e3779b97f4a7c15.
std::uint64_t derive_seed(std::uint64_t master, const InstanceKey& key);

struct DistractorPolicy {
  std::optional<int> fixed_count;  // default: max(1, ceil(k/2))
  int chain_depth = 1;

  int count_for(int k) const { return fixed_count ? *fixed_count : default_distractor_count(k); }
};

struct BuildConfig {
  std::vector<int> k_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 50, 100};
  std::size_t per_k_count = 200;
  std::string language = "english";
  NamingScheme naming = NamingScheme::symbolic;
  std::vector<VariantKind> variants = {kAllVariants.begin(), kAllVariants.end()};
  std::uint64_t master_seed = 0;
  DistractorPolicy distractors;
  OrderPolicy shuffle = OrderPolicy::full();
  bool randomize_query_orientation = false;
  int max_k = 100;

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

BuildConfig config_from_json_text(std::string_view text);
std::string config_to_json_text(const BuildConfig& cfg);
/// FNV-1a 64 of the canonical JSON form, as 16 hex digits.
std::string config_hash(const BuildConfig& cfg);

/// Pack, name pools and nonce settings an instance builder draws from.
struct BuildResources {
  TemplatePack pack;
  NamePool pool;             // unused for the symbolic scheme
  std::filesystem::path data_dir;

  static BuildResources load(const BuildConfig& cfg, const std::filesystem::path& data_dir = {});
};

/// The instance for one key, assembled from walk, noise, order, names and
/// templates. Clean and noisy versions of the same (k, index) share the walk,
/// the entity names and the wording of the path facts; the two noisy versions
/// share their distractors.
StoryInstance make_instance(const BuildConfig& cfg, const BuildResources& res, const InstanceKey& key);

std::string instance_id(const InstanceKey& key);

/// Every instance of the config in (k, variant, index) order. Each one is
/// verified with the oracle route before it is passed on; a failure throws
/// VerificationFailed. Shards run on up to `threads` workers.
void build_dataset(const BuildConfig& cfg, const BuildResources& res,
                   const std::function<void(const StoryInstance&)>& sink, unsigned threads = 0);

std::vector<StoryInstance> build_dataset(const BuildConfig& cfg, const BuildResources& res,
                                         unsigned threads = 0);

std::string to_jsonl_line(const StoryInstance& instance);
/// Throws DatasetError with `line_number` on malformed input.
StoryInstance from_jsonl_line(std::string_view line, std::size_t line_number = 0);

void write_jsonl(std::span<const StoryInstance> instances, const std::filesystem::path& path);
std::vector<StoryInstance> read_jsonl(const std::filesystem::path& path);

struct DatasetSummary {
  std::size_t instances = 0;
  std::map<std::string, std::size_t> counts;  // "k=<k>/<variant>" -> count
};

/// Builds into `out_dir`: instances.jsonl and manifest.json.
DatasetSummary generate_dataset_dir(const BuildConfig& cfg, const std::filesystem::path& out_dir,
                                    const std::filesystem::path& data_dir = {}, unsigned threads = 0);

/// Loads instances.jsonl from a dataset directory and re-verifies a
/// deterministic `fraction` of them (every n-th record).
std::vector<StoryInstance> load_dataset_dir(const std::filesystem::path& dir, double spot_check_fraction = 0.01,
                                            const std::filesystem::path& data_dir = {});

struct VerifyReport {
  std::size_t checked = 0;
  std::vector<std::string> failures;  // "id: reason"
};

VerifyReport verify_dataset_dir(const std::filesystem::path& dir, const std::filesystem::path& data_dir = {});

}  // namespace gridhop
