#pragma once

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prefixopt/cache_sim.hpp"
#include "prefixopt/cost.hpp"
#include "prefixopt/fd.hpp"
#include "prefixopt/ggr.hpp"
#include "prefixopt/objective.hpp"
#include "prefixopt/ophr.hpp"
#include "prefixopt/stats.hpp"
#include "prefixopt/table.hpp"

namespace prefixopt {

using ojson = nlohmann::ordered_json;

struct RunConfig {
  std::string input_path;
  std::string format = "auto";  // csv | jsonl | auto (by extension)
  std::string fd_config_path;

  std::string solver = "ggr";  // original | fixed-stats | ggr | ophr | brute
  GgrConfig ggr;
  OphrLimits ophr;

  std::string tokenizer = "char";
  std::string scoring = "value";
  std::string system_prompt;
  std::string question;

  CacheConfig cache;

  std::string pricing = "gpt-4o-mini";
  std::string pricing_path;  // overrides the built-in name when set
  std::uint64_t output_tokens = 0;  // uniform per-request output estimate

  std::string schedule_out;
  std::string report_out;
  std::string trace_out;
};

struct RunReport {
  std::size_t rows = 0;
  std::size_t fields = 0;
  std::string table_hash;
  std::string solver;
  std::uint64_t phc = 0;  // objective recomputed on the emitted schedule
  std::uint64_t instruction_tokens = 0;
  SolveStats solver_stats;
  bool optimal = true;
  SimReport sim;
  CostReport cost;
  std::size_t dedup_total = 0;
  std::size_t dedup_unique = 0;
  std::vector<std::string> fd_warnings;
  ojson config_echo;
};

namespace detail {

inline TableFormat resolve_format(const RunConfig& cfg) {
  if (cfg.format == "csv") return TableFormat::csv;
  if (cfg.format == "jsonl") return TableFormat::jsonl;
  if (cfg.format == "auto") {
    if (cfg.input_path.size() >= 6 &&
        cfg.input_path.compare(cfg.input_path.size() - 6, 6, ".jsonl") == 0)
      return TableFormat::jsonl;
    return TableFormat::csv;
  }
  throw schema_error("unknown table format: " + cfg.format);
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write file: " + path);
  out << content;
  if (!out) throw io_error("failed writing file: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline ojson config_echo_json(const RunConfig& cfg) {
  ojson j;
  j["input"] = cfg.input_path;
  j["format"] = cfg.format;
  j["fd_config"] = cfg.fd_config_path;
  j["solver"] = cfg.solver;
  j["ggr"] = {{"row_recursion_depth", cfg.ggr.row_recursion_depth},
              {"column_recursion_depth", cfg.ggr.column_recursion_depth},
              {"hitcount_stop_threshold", cfg.ggr.hitcount_stop_threshold},
              {"use_fds", cfg.ggr.use_fds},
              {"stats_variant", std::string(stats_variant_name(cfg.ggr.stats_variant))}};
  j["ophr"] = {{"max_rows", cfg.ophr.max_rows},
               {"max_fields", cfg.ophr.max_fields},
               {"time_budget_ms", cfg.ophr.time_budget.count()},
               {"force", cfg.ophr.force}};
  j["tokenizer"] = cfg.tokenizer;
  j["scoring"] = cfg.scoring;
  j["system_prompt"] = cfg.system_prompt;
  j["question"] = cfg.question;
  j["cache"] = {{"capacity_tokens", cfg.cache.capacity_tokens},
                {"eviction", std::string(eviction_name(cfg.cache.eviction))},
                {"min_cacheable_prefix_tokens", cfg.cache.min_cacheable_prefix_tokens}};
  j["pricing"] = cfg.pricing;
  j["pricing_file"] = cfg.pricing_path;
  j["output_tokens"] = cfg.output_tokens;
  j["schedule_out"] = cfg.schedule_out;
  j["report_out"] = cfg.report_out;
  j["trace_out"] = cfg.trace_out;
  return j;
}

// Config file fields mirror the flags; values present in the file win.
inline void apply_config_file(RunConfig& cfg, const std::string& path) {
  ojson doc;
  try {
    doc = ojson::parse(detail::read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw structural_error("config file: " + std::string(e.what()));
  }
  auto get_str = [&doc](const char* key, std::string& target) {
    if (doc.contains(key)) target = doc[key].get<std::string>();
  };
  get_str("input", cfg.input_path);
  get_str("format", cfg.format);
  get_str("fd_config", cfg.fd_config_path);
  get_str("solver", cfg.solver);
  get_str("tokenizer", cfg.tokenizer);
  get_str("scoring", cfg.scoring);
  get_str("system_prompt", cfg.system_prompt);
  get_str("question", cfg.question);
  get_str("pricing", cfg.pricing);
  get_str("pricing_file", cfg.pricing_path);
  get_str("schedule_out", cfg.schedule_out);
  get_str("report_out", cfg.report_out);
  get_str("trace_out", cfg.trace_out);
  if (doc.contains("output_tokens")) cfg.output_tokens = doc["output_tokens"].get<std::uint64_t>();
  if (doc.contains("ggr")) {
    const auto& g = doc["ggr"];
    if (g.contains("row_recursion_depth"))
      cfg.ggr.row_recursion_depth = g["row_recursion_depth"].get<std::size_t>();
    if (g.contains("column_recursion_depth"))
      cfg.ggr.column_recursion_depth = g["column_recursion_depth"].get<std::size_t>();
    if (g.contains("hitcount_stop_threshold"))
      cfg.ggr.hitcount_stop_threshold = g["hitcount_stop_threshold"].get<std::uint64_t>();
    if (g.contains("use_fds")) cfg.ggr.use_fds = g["use_fds"].get<bool>();
    if (g.contains("stats_variant"))
      cfg.ggr.stats_variant = stats_variant_by_name(g["stats_variant"].get<std::string>());
  }
  if (doc.contains("ophr")) {
    const auto& o = doc["ophr"];
    if (o.contains("max_rows")) cfg.ophr.max_rows = o["max_rows"].get<std::size_t>();
    if (o.contains("max_fields")) cfg.ophr.max_fields = o["max_fields"].get<std::size_t>();
    if (o.contains("time_budget_ms"))
      cfg.ophr.time_budget = std::chrono::milliseconds(o["time_budget_ms"].get<std::int64_t>());
    if (o.contains("force")) cfg.ophr.force = o["force"].get<bool>();
  }
  if (doc.contains("cache")) {
    const auto& c = doc["cache"];
    if (c.contains("capacity_tokens"))
      cfg.cache.capacity_tokens = c["capacity_tokens"].get<std::uint64_t>();
    if (c.contains("eviction"))
      cfg.cache.eviction = eviction_by_name(c["eviction"].get<std::string>());
    if (c.contains("min_cacheable_prefix_tokens"))
      cfg.cache.min_cacheable_prefix_tokens =
          c["min_cacheable_prefix_tokens"].get<std::uint64_t>();
  }
}

// ---- schedule files -------------------------------------------------------
// JSONL: a header object with the source-table hash, then one object per
// entry: {"row_id": int, "field_order": [names], "prompt": string}.

inline std::string schedule_to_jsonl(const RequestSchedule& s, const Table& t,
                                     const RunConfig& cfg) {
  ojson header;
  header["table_hash"] = t.content_hash_hex();
  header["solver"] = cfg.solver;
  header["tokenizer"] = cfg.tokenizer;
  header["scoring"] = cfg.scoring;
  header["system_prompt"] = cfg.system_prompt;
  header["question"] = cfg.question;
  header["rows"] = s.size();

  std::string out = header.dump();
  out += '\n';
  for (const auto& e : s.entries) {
    ojson line;
    line["row_id"] = e.row_id;
    ojson names = ojson::array();
    for (int f : e.field_order) names.push_back(t.field_name(f));
    line["field_order"] = std::move(names);
    line["prompt"] = render_prompt(e, t, cfg.system_prompt, cfg.question);
    out += line.dump();
    out += '\n';
  }
  return out;
}

struct LoadedSchedule {
  std::string table_hash;
  std::string tokenizer = "char";
  std::string system_prompt;
  std::string question;
  RequestSchedule schedule;          // field names resolved against the table
  std::vector<std::string> prompts;  // rendered prompts as stored
};

inline LoadedSchedule load_schedule_file(const std::string& path, const Table& t) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open schedule file: " + path);

  LoadedSchedule loaded;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ojson obj;
    try {
      obj = ojson::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw structural_error("schedule file line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!have_header) {
      if (!obj.contains("table_hash"))
        throw structural_error("schedule file: first line must be a header with table_hash");
      loaded.table_hash = obj["table_hash"].get<std::string>();
      loaded.tokenizer = obj.value("tokenizer", "char");
      loaded.system_prompt = obj.value("system_prompt", "");
      loaded.question = obj.value("question", "");
      have_header = true;
      continue;
    }
    if (!obj.contains("row_id") || !obj.contains("field_order"))
      throw structural_error("schedule file line " + std::to_string(line_no) +
                             ": entry needs row_id and field_order");
    ScheduleEntry entry;
    entry.row_id = obj["row_id"].get<std::size_t>();
    for (const auto& name : obj["field_order"])
      entry.field_order.push_back(t.require_field(name.get<std::string>()));
    loaded.schedule.entries.push_back(std::move(entry));
    loaded.prompts.push_back(obj.value("prompt", ""));
  }
  if (!have_header) throw structural_error("schedule file: empty or missing header");
  if (loaded.table_hash != t.content_hash_hex())
    throw schema_error("schedule file was produced from a different table (hash " +
                       loaded.table_hash + " vs " + t.content_hash_hex() + ")");
  validate_schedule(loaded.schedule, t);
  return loaded;
}

// ---- report serialisation -------------------------------------------------

inline ojson sim_report_to_json(const SimReport& sim, const std::string& table_hash,
                                const std::string& tokenizer, const CacheConfig& cache) {
  ojson j;
  j["table_hash"] = table_hash;
  j["tokenizer"] = tokenizer;
  j["cache"] = {{"capacity_tokens", cache.capacity_tokens},
                {"eviction", std::string(eviction_name(cache.eviction))},
                {"min_cacheable_prefix_tokens", cache.min_cacheable_prefix_tokens}};
  j["totals"] = {{"input_tokens", sim.total_input},
                 {"hit_tokens", sim.total_hit},
                 {"miss_tokens", sim.total_miss},
                 {"evicted_tokens", sim.evicted_tokens},
                 {"phr", sim.phr}};
  ojson reqs = ojson::array();
  for (const auto& r : sim.requests) {
    ojson rq;
    rq["input"] = r.input_tokens;
    rq["hit"] = r.hit_tokens;
    rq["miss"] = r.miss_tokens;
    rq["written"] = r.written_tokens;
    if (r.uncacheable) rq["uncacheable"] = true;
    reqs.push_back(std::move(rq));
  }
  j["requests"] = std::move(reqs);
  return j;
}

inline SimReport sim_report_from_json(const ojson& j, std::string* table_hash = nullptr) {
  SimReport sim;
  if (table_hash && j.contains("table_hash")) *table_hash = j["table_hash"].get<std::string>();
  if (!j.contains("requests") || !j["requests"].is_array())
    throw structural_error("sim report: missing requests array");
  for (const auto& rq : j["requests"]) {
    RequestSim r;
    r.input_tokens = rq.value("input", std::uint64_t{0});
    r.hit_tokens = rq.value("hit", std::uint64_t{0});
    r.miss_tokens = rq.value("miss", std::uint64_t{0});
    r.written_tokens = rq.value("written", std::uint64_t{0});
    r.uncacheable = rq.value("uncacheable", false);
    sim.requests.push_back(r);
    sim.total_input += r.input_tokens;
    sim.total_hit += r.hit_tokens;
    sim.total_miss += r.miss_tokens;
  }
  if (j.contains("totals") && j["totals"].contains("evicted_tokens"))
    sim.evicted_tokens = j["totals"]["evicted_tokens"].get<std::uint64_t>();
  sim.phr = sim.total_input ? static_cast<double>(sim.total_hit) / sim.total_input : 0.0;
  return sim;
}

inline std::string trace_csv(const SimReport& sim) {
  std::string out = "request_index,input,hit,miss\n";
  for (std::size_t i = 0; i < sim.requests.size(); ++i) {
    const auto& r = sim.requests[i];
    out += std::to_string(i) + "," + std::to_string(r.input_tokens) + "," +
           std::to_string(r.hit_tokens) + "," + std::to_string(r.miss_tokens) + "\n";
  }
  return out;
}

inline ojson cost_report_to_json(const CostReport& c) {
  ojson j;
  j["pricing"] = c.pricing_name;
  j["input_tokens"] = c.input_tokens;
  j["output_tokens"] = c.output_tokens;
  j["hit_tokens"] = c.hit_tokens;
  j["miss_tokens"] = c.miss_tokens;
  j["write_tokens"] = c.write_tokens;
  j["dollars"] = c.dollars;
  return j;
}

inline ojson run_report_to_json(const RunReport& r) {
  ojson j;
  j["table"] = {{"rows", r.rows}, {"fields", r.fields}, {"hash", r.table_hash}};
  j["solver"] = {{"name", r.solver},
                 {"wall_ms", r.solver_stats.wall_ms},
                 {"recursive_calls", r.solver_stats.recursive_calls},
                 {"candidates_examined", r.solver_stats.candidates_examined},
                 {"optimal", r.optimal}};
  j["phc"] = r.phc;
  j["instruction_tokens"] = r.instruction_tokens;
  j["simulation"] = {{"input_tokens", r.sim.total_input},
                     {"hit_tokens", r.sim.total_hit},
                     {"miss_tokens", r.sim.total_miss},
                     {"evicted_tokens", r.sim.evicted_tokens},
                     {"phr", r.sim.phr}};
  j["cost"] = cost_report_to_json(r.cost);
  j["dedup"] = {{"total", r.dedup_total}, {"unique", r.dedup_unique}};
  j["fd_warnings"] = r.fd_warnings;
  j["config"] = r.config_echo;
  return j;
}

// ---- commands ---------------------------------------------------------------

inline PricingModel resolve_pricing(const RunConfig& cfg) {
  if (!cfg.pricing_path.empty()) return load_pricing_file(cfg.pricing_path);
  return builtin_pricing(cfg.pricing);
}

// Load, validate FDs (violated groups are disabled with a warning), solve,
// recompute the objective on the emitted schedule, replay it through the
// cache, estimate cost, and write schedule/report/trace files.
inline RunReport cmd_solve(const RunConfig& cfg, std::ostream& diag) {
  Table t = load_table_file(cfg.input_path, detail::resolve_format(cfg));
  const Tokenizer& tok = tokenizer_by_name(cfg.tokenizer);
  SegmentScoring scoring = scoring_by_name(cfg.scoring);

  RunReport report;
  report.rows = t.row_count();
  report.fields = t.field_count();
  report.table_hash = t.content_hash_hex();
  report.solver = cfg.solver;
  report.config_echo = config_echo_json(cfg);

  FunctionalDependencySet fds;
  if (!cfg.fd_config_path.empty()) {
    FunctionalDependencySet requested = load_fd_config_file(cfg.fd_config_path);
    FdValidationReport validation = validate_fds(t, requested);
    for (std::size_t g = 0; g < validation.groups.size(); ++g) {
      const auto& gr = validation.groups[g];
      if (gr.satisfied) {
        fds.groups.push_back(requested.groups[g]);
      } else {
        std::string warning = "fd group {";
        for (std::size_t i = 0; i < gr.group.size(); ++i)
          warning += (i ? ", " : "") + gr.group[i];
        warning += "} is violated";
        if (gr.witness)
          warning += " (rows " + std::to_string(gr.witness->row_a) + " and " +
                     std::to_string(gr.witness->row_b) + " agree on " +
                     gr.witness->agree_field + " but differ on " + gr.witness->differ_field +
                     ")";
        warning += "; group disabled";
        report.fd_warnings.push_back(warning);
        diag << "warning: " << warning << '\n';
      }
    }
    fds.validated = true;
  }

  RequestSchedule schedule;
  if (cfg.solver == "original") {
    schedule = original_order_schedule(t);
  } else if (cfg.solver == "fixed-stats") {
    schedule = t.field_count()
                   ? sort_rows_fixed_order(t, fixed_order_by_stats(compute_stats(t, tok, scoring)))
                   : original_order_schedule(t);
  } else if (cfg.solver == "ggr") {
    SolveResult res = ggr(t, fds, cfg.ggr, tok, scoring);
    schedule = std::move(res.schedule);
    report.solver_stats = res.stats;
    report.optimal = res.optimal;
  } else if (cfg.solver == "ophr") {
    try {
      SolveResult res = ophr(t, tok, cfg.ophr, scoring);
      schedule = std::move(res.schedule);
      report.solver_stats = res.stats;
      report.optimal = res.optimal;
    } catch (time_budget_error& e) {
      diag << "warning: " << e.what() << '\n';
      schedule = std::move(e.partial.schedule);
      report.solver_stats = e.partial.stats;
      report.optimal = false;
    }
  } else if (cfg.solver == "brute") {
    SolveResult res = brute_force_max(t, tok, scoring);
    schedule = std::move(res.schedule);
    report.solver_stats = res.stats;
    report.optimal = res.optimal;
  } else {
    throw schema_error("unknown solver: " + cfg.solver +
                       " (expected original, fixed-stats, ggr, ophr or brute)");
  }

  report.phc = phc(schedule, t, tok, scoring);

  std::string instruction;
  if (!cfg.system_prompt.empty()) instruction += cfg.system_prompt + "\n";
  if (!cfg.question.empty()) instruction += cfg.question + "\n";
  report.instruction_tokens = tok.count(instruction);

  if (t.row_count() > 0) {
    std::vector<std::string> prompts;
    prompts.reserve(schedule.size());
    for (const auto& e : schedule.entries)
      prompts.push_back(render_prompt(e, t, cfg.system_prompt, cfg.question));

    DedupResult dedup_res = dedup(prompts);
    report.dedup_total = prompts.size();
    report.dedup_unique = dedup_res.uniques.size();

    report.sim = simulate(prompts, cfg.cache, tok);
    std::vector<std::uint64_t> out_tokens(prompts.size(), cfg.output_tokens);
    report.cost = estimate_cost(report.sim, out_tokens, resolve_pricing(cfg));
  } else {
    report.cost.pricing_name = resolve_pricing(cfg).name;
  }

  if (!cfg.schedule_out.empty())
    detail::write_text_file(cfg.schedule_out, schedule_to_jsonl(schedule, t, cfg));
  if (!cfg.report_out.empty())
    detail::write_text_file(cfg.report_out, run_report_to_json(report).dump(2) + "\n");
  if (!cfg.trace_out.empty()) detail::write_text_file(cfg.trace_out, trace_csv(report.sim));
  return report;
}

// Replay a stored schedule through the cache. The schedule file's table hash
// must match the table on disk.
inline SimReport cmd_simulate(const std::string& table_path, const std::string& format,
                              const std::string& schedule_path, const CacheConfig& cache,
                              const std::string& tokenizer_override,
                              const std::string& report_out, const std::string& trace_out) {
  RunConfig probe;
  probe.input_path = table_path;
  probe.format = format;
  Table t = load_table_file(table_path, detail::resolve_format(probe));
  LoadedSchedule loaded = load_schedule_file(schedule_path, t);

  std::string tok_name = tokenizer_override.empty() ? loaded.tokenizer : tokenizer_override;
  const Tokenizer& tok = tokenizer_by_name(tok_name);

  SimReport sim = simulate(loaded.prompts, cache, tok);
  if (!report_out.empty())
    detail::write_text_file(
        report_out, sim_report_to_json(sim, loaded.table_hash, tok_name, cache).dump(2) + "\n");
  if (!trace_out.empty()) detail::write_text_file(trace_out, trace_csv(sim));
  return sim;
}

struct CostCommandResult {
  CostReport cost;
  std::optional<CostReport> baseline_cost;
  std::optional<double> savings_ratio;
};

// Price a stored replay report; with a baseline report, also the savings.
inline CostCommandResult cmd_cost(const std::string& sim_path, const std::string& baseline_path,
                                  const PricingModel& pricing, std::uint64_t output_tokens,
                                  const std::string& report_out) {
  ojson doc;
  try {
    doc = ojson::parse(detail::read_text_file(sim_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw structural_error("sim report: " + std::string(e.what()));
  }
  std::string hash;
  SimReport sim = sim_report_from_json(doc, &hash);
  std::vector<std::uint64_t> out_tokens(sim.requests.size(), output_tokens);

  CostCommandResult result;
  result.cost = estimate_cost(sim, out_tokens, pricing);

  if (!baseline_path.empty()) {
    ojson base_doc;
    try {
      base_doc = ojson::parse(detail::read_text_file(baseline_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw structural_error("baseline sim report: " + std::string(e.what()));
    }
    std::string base_hash;
    SimReport base_sim = sim_report_from_json(base_doc, &base_hash);
    if (!hash.empty() && !base_hash.empty() && hash != base_hash)
      throw schema_error("cost: sim reports come from different tables (hash " + hash +
                         " vs " + base_hash + ")");
    std::vector<std::uint64_t> base_out(base_sim.requests.size(), output_tokens);
    result.baseline_cost = estimate_cost(base_sim, base_out, pricing);
    result.savings_ratio = savings(result.cost, *result.baseline_cost);
  }

  if (!report_out.empty()) {
    ojson j = cost_report_to_json(result.cost);
    if (result.baseline_cost) {
      j["baseline_dollars"] = result.baseline_cost->dollars;
      j["savings_vs_baseline"] = *result.savings_ratio;
    }
    detail::write_text_file(report_out, j.dump(2) + "\n");
  }
  return result;
}

inline ojson cmd_stats(const std::string& table_path, const std::string& format,
                       const std::string& tokenizer, const std::string& scoring_mode) {
  RunConfig probe;
  probe.input_path = table_path;
  probe.format = format;
  Table t = load_table_file(table_path, detail::resolve_format(probe));
  const Tokenizer& tok = tokenizer_by_name(tokenizer);
  ColumnStats stats = compute_stats(t, tok, scoring_by_name(scoring_mode));

  ojson j;
  j["rows"] = stats.total_rows;
  j["tokenizer"] = tokenizer;
  j["scoring"] = scoring_mode;
  ojson fields = ojson::array();
  for (const auto& f : stats.fields)
    fields.push_back({{"name", f.name}, {"cardinality", f.cardinality}, {"avg_len", f.avg_len}});
  j["fields"] = std::move(fields);
  ojson order = ojson::array();
  for (int f : fixed_order_by_stats(stats)) order.push_back(stats.fields[f].name);
  j["suggested_fixed_order"] = std::move(order);
  return j;
}

inline ojson fd_report_to_json(const FdValidationReport& report) {
  ojson j;
  j["all_satisfied"] = report.all_satisfied();
  ojson groups = ojson::array();
  for (const auto& g : report.groups) {
    ojson gj;
    gj["fields"] = g.group;
    gj["satisfied"] = g.satisfied;
    if (g.witness)
      gj["witness"] = {{"row_a", g.witness->row_a},
                       {"row_b", g.witness->row_b},
                       {"agree_field", g.witness->agree_field},
                       {"differ_field", g.witness->differ_field}};
    groups.push_back(std::move(gj));
  }
  j["groups"] = std::move(groups);
  return j;
}

inline ojson cmd_fd_check(const std::string& table_path, const std::string& format,
                          const std::string& fd_path, bool discover, std::size_t discover_max_rows) {
  RunConfig probe;
  probe.input_path = table_path;
  probe.format = format;
  Table t = load_table_file(table_path, detail::resolve_format(probe));

  if (discover) {
    FunctionalDependencySet found = discover_fds(t, discover_max_rows);
    ojson j;
    j["discovered_groups"] = ojson::array();
    for (const auto& g : found.groups) j["discovered_groups"].push_back(g);
    return j;
  }
  if (fd_path.empty()) throw schema_error("fd-check: need an fd config or --discover");
  FunctionalDependencySet fds = load_fd_config_file(fd_path);
  return fd_report_to_json(validate_fds(t, fds));
}

inline ojson cmd_dedup(const std::vector<std::string>& prompts) {
  DedupResult res = dedup(prompts);
  ojson j;
  j["total"] = prompts.size();
  j["unique"] = res.uniques.size();
  j["expansion_map"] = res.expansion_map;
  j["uniques"] = res.uniques;
  return j;
}

}  // namespace prefixopt
