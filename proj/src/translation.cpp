#include "areal/translation.hpp"

#include <algorithm>
#include <set>

#include "areal/error.hpp"
#include "areal/inventory.hpp"
#include "areal/text.hpp"

namespace areal {
namespace {

const Row kHeader{"origin", "target", "source", "ID", "notes"};

}  // namespace

const Row& translationHeader() { return kHeader; }

// --- table ------------------------------------------------------------------

TranslationTable::Key TranslationTable::keyOf(std::string_view origin, const std::optional<Scope>& scope) {
  return {text::matchKey(origin), scope ? static_cast<int>(scope->kind) : -1, scope ? scope->id : 0};
}

void TranslationTable::insert(TranslationEntry entry, const std::filesystem::path& origin, std::size_t line) {
  auto key = keyOf(entry.origin, entry.scope);
  if (auto it = byKey_.find(key); it != byKey_.end()) {
    if (text::matchKey(entries_[it->second].target) == text::matchKey(entry.target)) return;
    throw Error(Errc::ConflictingTranslation, origin.string() + ": line " + std::to_string(line) + " maps '" +
                                                  entry.origin + "' to '" + entry.target + "' but '" +
                                                  entries_[it->second].target + "' is already recorded");
  }
  byKey_.emplace(std::move(key), entries_.size());
  entries_.push_back(std::move(entry));
}

TranslationTable TranslationTable::parse(const std::vector<Row>& rows, const std::filesystem::path& origin) {
  if (rows.empty() || rows.front() != kHeader)
    throw Error(Errc::ParseError, origin.string() + ": translation table header must be origin,target,source,ID,notes");
  TranslationTable t;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    Row row = rows[r];
    row.resize(kHeader.size());
    if (std::all_of(row.begin(), row.end(), [](const std::string& f) { return f.empty(); })) continue;
    const auto line = r + 1;
    if (row[0].empty() || row[1].empty())
      throw Error(Errc::ParseError, origin.string() + ": line " + std::to_string(line) + " lacks origin or target");
    TranslationEntry e{row[0], row[1], std::nullopt, row[4]};
    if (row[2].empty() != row[3].empty())
      throw Error(Errc::ParseError,
                  origin.string() + ": line " + std::to_string(line) + " sets only one of source and ID");
    if (!row[2].empty()) {
      auto kind = parseSourceKind(row[2]);
      auto id = text::parseInteger(row[3]);
      if (!kind || !id || *id <= 0)
        throw Error(Errc::ParseError, origin.string() + ": line " + std::to_string(line) +
                                          " needs source geoID|tabID and a positive ID");
      e.scope = Scope{*kind, *id};
    }
    t.insert(std::move(e), origin, line);
  }
  return t;
}

TranslationTable TranslationTable::load(const std::filesystem::path& path) {
  return parse(csv::readFile(path), path);
}

TranslationTable TranslationTable::open(const std::filesystem::path& path) {
  TranslationTable t;
  if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    t = load(path);
    t.syncedSize_ = std::filesystem::file_size(path);
  }
  t.path_ = path;
  return t;
}

std::optional<std::string> TranslationTable::lookup(std::string_view term, const std::optional<Scope>& scope) const {
  if (scope) {
    if (auto it = byKey_.find(keyOf(term, scope)); it != byKey_.end()) return entries_[it->second].target;
  }
  if (auto it = byKey_.find(keyOf(term, std::nullopt)); it != byKey_.end()) return entries_[it->second].target;
  return std::nullopt;
}

TranslationEntry TranslationTable::record(std::string_view origin, std::string_view target,
                                          const std::optional<Scope>& scope, std::string_view notes,
                                          const IndexTable* index) {
  if (text::trim(origin).empty() || text::trim(target).empty())
    throw Error(Errc::MissingField, "translation needs origin and target");
  if (scope && scope->id <= 0) throw Error(Errc::InvalidScope, "scope ID must be positive");
  std::string canonicalTarget(target);
  if (index) {
    // keep the index's spelling of the target
    const auto key = text::matchKey(target);
    auto it = std::find_if(index->terms.begin(), index->terms.end(),
                           [&](const std::string& t) { return text::matchKey(t) == key; });
    if (it == index->terms.end())
      throw Error(Errc::TargetNotInIndex, "'" + std::string(target) + "' is not a term of the index table");
    canonicalTarget = *it;
  }
  // pick up entries another writer (e.g. the review service) appended
  if (path_ && std::filesystem::exists(*path_) && std::filesystem::file_size(*path_) != syncedSize_) {
    auto fresh = open(*path_);
    *this = std::move(fresh);
  }
  if (auto it = byKey_.find(keyOf(origin, scope)); it != byKey_.end()) {
    const auto& existing = entries_[it->second];
    if (text::matchKey(existing.target) == text::matchKey(canonicalTarget)) return existing;
    throw Error(Errc::ConflictingTranslation, "'" + std::string(origin) + "' already translates to '" +
                                                  existing.target + "'");
  }
  TranslationEntry e{std::string(origin), canonicalTarget, scope, std::string(notes)};
  if (path_) {
    csv::appendRows(*path_, kHeader,
                    {Row{e.origin, e.target, scope ? std::string(sourceKindName(scope->kind)) : "",
                         scope ? std::to_string(scope->id) : "", e.notes}});
    syncedSize_ = std::filesystem::file_size(*path_);
  }
  insert(e, path_.value_or(""), entries_.size() + 2);
  return e;
}

std::vector<std::string> TranslationTable::targets() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& e : entries_)
    if (seen.insert(text::matchKey(e.target)).second) out.push_back(e.target);
  return out;
}

std::optional<std::string> lookupTerm(const TranslationTable& table, std::string_view term,
                                      const std::optional<Scope>& scope) {
  return table.lookup(term, scope);
}

TranslationEntry recordTranslation(TranslationTable& table, std::string_view origin, std::string_view target,
                                   const std::optional<Scope>& scope, std::string_view notes,
                                   const IndexTable* index) {
  return table.record(origin, target, scope, notes, index);
}

// --- fuzzy matching ---------------------------------------------------------

std::size_t editDistance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

double distanceOfKeys(const std::u32string& a, const std::u32string& b) {
  const auto longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(editDistance(a, b)) / static_cast<double>(longest);
}

}  // namespace

double normalisedDistance(std::string_view a, std::string_view b) {
  return distanceOfKeys(text::codePoints(text::matchKey(a)), text::codePoints(text::matchKey(b)));
}

std::vector<Suggestion> suggestMatches(std::string_view term, std::span<const std::string> vocabulary,
                                       const FuzzyConfig& config) {
  const auto needle = text::codePoints(text::matchKey(term));
  std::vector<Suggestion> out;
  out.reserve(vocabulary.size());
  for (const auto& candidate : vocabulary) {
    const double d = distanceOfKeys(needle, text::codePoints(text::matchKey(candidate)));
    if (d <= config.cutoff) out.push_back({candidate, d});
  }
  std::sort(out.begin(), out.end(), [](const Suggestion& x, const Suggestion& y) {
    if (x.distance != y.distance) return x.distance < y.distance;
    return x.candidate < y.candidate;
  });
  if (out.size() > config.k) out.resize(config.k);
  return out;
}

// --- translateTerms ---------------------------------------------------------

TranslateResult translateTerms(std::span<const std::string> terms, TranslationTable& table,
                               const TranslateOptions& options) {
  TranslateResult result;

  std::map<std::string, std::string> vocabularyByKey;
  for (const auto& v : options.vocabulary) vocabularyByKey.emplace(text::matchKey(v), v);

  std::vector<std::string> suggestionPool = options.vocabulary;
  {
    std::set<std::string> seen;
    for (const auto& v : suggestionPool) seen.insert(text::matchKey(v));
    for (const auto& t : table.targets())
      if (seen.insert(text::matchKey(t)).second) suggestionPool.push_back(t);
  }

  std::set<std::string> done;
  for (const auto& term : terms) {
    if (!done.insert(term).second) continue;

    if (auto target = table.lookup(term, options.scope)) {
      result.mapping.emplace(term, *target);
      continue;
    }
    if (auto it = vocabularyByKey.find(text::matchKey(term)); it != vocabularyByKey.end()) {
      result.mapping.emplace(term, it->second);
      continue;
    }

    std::optional<QueueItem> item;
    if (options.queue) item = options.queue->findTerm(options.variable, term, options.scope);
    if (item && item->status == ItemStatus::Ignored) {
      result.ignored.push_back(term);
      continue;
    }
    if (item && item->status == ItemStatus::Resolved) {
      result.mapping.emplace(term, item->resolution);
      continue;
    }
    if (!item) {
      auto suggestions = suggestMatches(term, suggestionPool, options.fuzzy);
      if (options.queue) {
        item = options.queue->enqueueTerm(options.variable, term, options.scope, std::move(suggestions));
      } else {
        QueueItem local;
        local.variable = options.variable;
        local.term = term;
        local.scope = options.scope;
        local.suggestions = std::move(suggestions);
        item = std::move(local);
      }
    }

    if (options.resolver) {
      const Resolution decision = options.resolver->resolve(*item);
      if (decision.kind == Resolution::Kind::Target) {
        const auto recorded = table.record(term, decision.target, decision.scope,
                                           "resolved by " + decision.resolver + " at " + utcTimestamp(),
                                           options.index);
        if (options.queue && options.queue->get(item->id).status == ItemStatus::Pending)
          options.queue->markResolved(item->id, recorded.target, decision.scope, decision.resolver);
        // a scope other than the current one leaves this occurrence unresolved
        if (auto target = table.lookup(term, options.scope)) {
          result.mapping.emplace(term, *target);
          continue;
        }
      } else if (decision.kind == Resolution::Kind::Ignore) {
        if (options.queue && options.queue->get(item->id).status == ItemStatus::Pending)
          options.queue->markIgnored(item->id, decision.resolver);
        result.ignored.push_back(term);
        continue;
      }
    }
    result.pending.push_back(*item);
  }

  if (options.strict && !result.pending.empty()) {
    std::string list;
    for (const auto& p : result.pending) list += (list.empty() ? "" : ", ") + p.term;
    throw Error(Errc::UnresolvedInNonInteractive,
                std::to_string(result.pending.size()) + " unresolved term(s) for '" + options.variable + "': " + list);
  }
  return result;
}

}  // namespace areal
