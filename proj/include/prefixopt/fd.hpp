#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "prefixopt/errors.hpp"
#include "prefixopt/table.hpp"

namespace prefixopt {

// Bidirectional field equivalences: within a group, two rows agree on one
// field iff they agree on every field. Groups must be pairwise disjoint.
struct FunctionalDependencySet {
  std::vector<std::vector<std::string>> groups;
  bool validated = false;

  bool empty() const { return groups.empty(); }
};

struct FdWitness {
  std::size_t row_a = 0;
  std::size_t row_b = 0;
  std::string agree_field;   // rows match here...
  std::string differ_field;  // ...but diverge here
};

struct FdGroupReport {
  std::vector<std::string> group;
  bool satisfied = false;
  std::optional<FdWitness> witness;
};

struct FdValidationReport {
  std::vector<FdGroupReport> groups;

  bool all_satisfied() const {
    for (const auto& g : groups)
      if (!g.satisfied) return false;
    return true;
  }
};

namespace detail {

// Partition signature of a field: sig[r] = first row index holding the same
// value as row r. Two fields are bidirectionally equivalent iff their row
// partitions are identical, i.e. their signatures match.
inline std::vector<std::size_t> partition_signature(const Table& t, int field) {
  std::vector<std::size_t> sig(t.row_count());
  std::unordered_map<std::string_view, std::size_t> first_seen;
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    auto [it, inserted] = first_seen.try_emplace(t.cell(r, field), r);
    sig[r] = it->second;
  }
  return sig;
}

}  // namespace detail

inline FdValidationReport validate_fds(const Table& t, const FunctionalDependencySet& fds) {
  std::unordered_set<std::string> claimed;
  for (const auto& group : fds.groups)
    for (const auto& name : group) {
      t.require_field(name);
      if (!claimed.insert(name).second)
        throw schema_error("field appears in more than one FD group: " + name);
    }

  FdValidationReport report;
  for (const auto& group : fds.groups) {
    FdGroupReport gr;
    gr.group = group;
    gr.satisfied = true;
    if (group.size() >= 2 && t.row_count() >= 2) {
      int base = t.require_field(group[0]);
      auto base_sig = detail::partition_signature(t, base);
      for (std::size_t gi = 1; gi < group.size() && gr.satisfied; ++gi) {
        int other = t.require_field(group[gi]);
        auto other_sig = detail::partition_signature(t, other);
        for (std::size_t r = 0; r < t.row_count(); ++r) {
          if (base_sig[r] == other_sig[r]) continue;
          gr.satisfied = false;
          FdWitness w;
          // One signature points at an earlier matching row, the other does
          // not — that earlier row and r witness the violation.
          if (base_sig[r] != r) {
            w.row_a = base_sig[r];
            w.agree_field = group[0];
            w.differ_field = group[gi];
          } else {
            w.row_a = other_sig[r];
            w.agree_field = group[gi];
            w.differ_field = group[0];
          }
          w.row_b = r;
          gr.witness = w;
          break;
        }
      }
    }
    report.groups.push_back(std::move(gr));
  }
  return report;
}

// Brute-force bidirectional FD discovery for small tables: returns the maximal
// groups of fields with identical row partitions. Singleton groups are not
// reported. Guarded by max_rows since validation work grows with n.
inline FunctionalDependencySet discover_fds(const Table& t, std::size_t max_rows = 10000) {
  if (t.row_count() > max_rows)
    throw size_error("discover_fds: table has " + std::to_string(t.row_count()) +
                     " rows, cap is " + std::to_string(max_rows));

  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::string>>> classes;
  for (std::size_t f = 0; f < t.field_count(); ++f) {
    auto sig = detail::partition_signature(t, static_cast<int>(f));
    bool placed = false;
    for (auto& [class_sig, members] : classes) {
      if (class_sig == sig) {
        members.push_back(t.field_name(f));
        placed = true;
        break;
      }
    }
    if (!placed) classes.emplace_back(std::move(sig), std::vector<std::string>{t.field_name(f)});
  }

  FunctionalDependencySet fds;
  for (auto& [sig, members] : classes)
    if (members.size() >= 2) fds.groups.push_back(std::move(members));
  fds.validated = true;
  return fds;
}

// FD config document: {"groups": [["field", ...], ...]}
inline FunctionalDependencySet load_fd_config(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw structural_error(std::string("fd config: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("groups") || !doc["groups"].is_array())
    throw schema_error("fd config: expected an object with a \"groups\" array");
  FunctionalDependencySet fds;
  for (const auto& group : doc["groups"]) {
    if (!group.is_array()) throw schema_error("fd config: each group must be an array");
    std::vector<std::string> names;
    for (const auto& name : group) {
      if (!name.is_string()) throw schema_error("fd config: field names must be strings");
      names.push_back(name.get<std::string>());
    }
    fds.groups.push_back(std::move(names));
  }
  return fds;
}

inline FunctionalDependencySet load_fd_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open fd config: " + path);
  return load_fd_config(in);
}

}  // namespace prefixopt
