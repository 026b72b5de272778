#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gridhop {

struct InstanceMeta {
  std::string language = "english";
  std::string naming = "symbolic";
  bool noisy = false;
  bool shuffled = false;
  std::uint64_t seed = 0;
  int distractors = 0;
  friend bool operator==(const InstanceMeta&, const InstanceMeta&) = default;
};

/// One <story, question, answer> triple as persisted.
struct StoryInstance {
  std::string id;
  int k = 0;
  std::vector<std::string> story;  // numbered sentences, "1 ..."
  std::string question;
  std::string answer;  // answer label from the pack lexicon
  InstanceMeta meta;
  friend bool operator==(const StoryInstance&, const StoryInstance&) = default;
};

}  // namespace gridhop
