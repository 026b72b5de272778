#include "gridhop/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "gridhop/errors.hpp"
#include "gridhop/paths.hpp"

namespace gridhop {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<NamedFact> match_all(std::string_view text, const TemplatePack& pack) {
  std::vector<NamedFact> found;
  for (const Template* t : pack.all_templates()) {
    for (auto& c : t->pattern.match(text)) {
      NamedFact f = t->subject_slot == Slot::a ? NamedFact{t->relation, c.a, c.b}
                                               : NamedFact{t->relation, c.b, c.a};
      if (std::find(found.begin(), found.end(), f) == found.end()) found.push_back(std::move(f));
    }
  }
  return found;
}

std::string quote(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

const std::string& cached_asset(const std::filesystem::path& path) {
  static std::mutex mu;
  static std::map<std::filesystem::path, std::string> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(path);
  if (it != cache.end()) return it->second;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingAsset("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return cache.emplace(path, ss.str()).first->second;
}

}  // namespace

std::string_view strip_line_number(std::string_view line) {
  line = trim(line);
  std::size_t i = 0;
  while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
  if (i > 0 && i < line.size() && line[i] == ' ') return trim(line.substr(i + 1));
  return line;
}

NamedFact parse_sentence(std::string_view text, const TemplatePack& pack) {
  text = trim(text);
  auto found = match_all(text, pack);
  if (found.empty() && !text.empty() && text.back() != '.') {
    found = match_all(std::string(text) + ".", pack);
  }
  if (found.empty()) {
    throw NoMatch("no " + pack.language + " template produces \"" + std::string(text) + "\"");
  }
  if (found.size() > 1) {
    throw AmbiguousMatch(std::to_string(found.size()) + " readings of \"" + std::string(text) + "\"");
  }
  return std::move(found.front());
}

NamedQuery parse_question(std::string_view text, const TemplatePack& pack) {
  text = trim(text);
  std::vector<NamedQuery> found;
  for (const auto& q : pack.question_templates) {
    for (auto& c : q.pattern.match(text)) {
      NamedQuery nq = q.subject_slot == Slot::a ? NamedQuery{c.a, c.b} : NamedQuery{c.b, c.a};
      if (std::find(found.begin(), found.end(), nq) == found.end()) found.push_back(std::move(nq));
    }
  }
  if (found.empty()) {
    throw NoMatch("no " + pack.language + " question template produces \"" + std::string(text) + "\"");
  }
  if (found.size() > 1) throw AmbiguousMatch("ambiguous question \"" + std::string(text) + "\"");
  return std::move(found.front());
}

ParsedProgram parse_story(std::span<const std::string> lines, std::string_view question,
                          const TemplatePack& pack) {
  ParsedProgram program;
  program.facts.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      program.facts.push_back(parse_sentence(strip_line_number(lines[i]), pack));
    } catch (const NoMatch& e) {
      throw NoMatch("line " + std::to_string(i + 1) + ": " + e.what(), i + 1);
    } catch (const AmbiguousMatch& e) {
      throw AmbiguousMatch("line " + std::to_string(i + 1) + ": " + e.what(), i + 1);
    }
  }
  try {
    program.query = parse_question(question, pack);
  } catch (const NoMatch& e) {
    throw NoMatch(std::string("question: ") + e.what(), lines.size() + 1);
  }
  return program;
}

std::string emit_asp(const ParsedProgram& program, bool include_knowledge,
                     const std::filesystem::path& data_dir) {
  std::string out;
  for (const auto& f : program.facts) {
    out += name_of(f.relation);
    out += '(' + quote(f.subject) + ", " + quote(f.object) + ").\n";
  }
  out += "query(" + quote(program.query.subject) + ", " + quote(program.query.object) + ").\n";
  if (include_knowledge) {
    out += '\n';
    out += knowledge_module(data_dir);
  }
  return out;
}

const std::string& knowledge_module(const std::filesystem::path& data_dir) {
  return cached_asset(resolve_data_dir(data_dir) / "asp" / "knowledge_module.lp");
}

const std::string& answer_rules(const std::filesystem::path& data_dir) {
  return cached_asset(resolve_data_dir(data_dir) / "asp" / "answer_rules.lp");
}

}  // namespace gridhop
