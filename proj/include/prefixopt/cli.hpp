#pragma once

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prefixopt/run.hpp"

namespace prefixopt {

namespace detail {

// one prompt per line (for multi-line prompts use --schedule instead)
inline std::vector<std::string> read_prompt_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open prompts file: " + path);
  std::vector<std::string> prompts;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    prompts.push_back(line);
  }
  return prompts;
}

}  // namespace detail

// Exit codes: 0 success, 2 validation, 3 size refusal, 4 I/O.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Reorders table rows and per-row field order to maximize prompt "
               "prefix-cache reuse; simulates the cache and estimates cost."};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::int64_t time_budget_ms = 0;

  auto add_table_flags = [](CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--input", c.input_path, "Table file (csv or jsonl)")->required();
    cmd->add_option("--format", c.format, "csv | jsonl | auto (default: by extension)");
  };

  // solve
  CLI::App* solve = app.add_subcommand("solve", "Reorder a table and report the results");
  add_table_flags(solve, cfg);
  solve->add_option("--fd", cfg.fd_config_path, "FD config JSON ({\"groups\": [[...]]})");
  solve->add_option("--solver", cfg.solver, "original | fixed-stats | ggr | ophr | brute");
  solve->add_option("--tokenizer", cfg.tokenizer, "char | word");
  solve->add_option("--scoring", cfg.scoring, "value | fragment");
  solve->add_option("--system-prompt", cfg.system_prompt, "Shared system prompt text");
  solve->add_option("--question", cfg.question, "Shared question text");
  solve->add_option("--row-depth", cfg.ggr.row_recursion_depth, "GGR row recursion depth");
  solve->add_option("--col-depth", cfg.ggr.column_recursion_depth, "GGR column recursion depth");
  solve->add_option("--stop-threshold", cfg.ggr.hitcount_stop_threshold,
                    "GGR early-stop hitcount threshold");
  solve->add_flag("--fds,!--no-fds", cfg.ggr.use_fds, "Use FDs during GGR (default on)");
  std::string stats_variant = "weighted";
  solve->add_option("--stats-variant", stats_variant,
                    "Fallback column score: weighted | squared | length-freq");
  solve->add_option("--max-rows", cfg.ophr.max_rows, "OPHR row cap");
  solve->add_option("--max-fields", cfg.ophr.max_fields, "OPHR field cap");
  solve->add_option("--time-budget-ms", time_budget_ms, "OPHR time budget (0 = none)");
  solve->add_flag("--force", cfg.ophr.force, "Override the OPHR size caps");
  solve->add_option("--capacity", cfg.cache.capacity_tokens, "Cache capacity in tokens (0 = unbounded)");
  std::string eviction = "none";
  solve->add_option("--eviction", eviction, "none | lru");
  solve->add_option("--min-prefix", cfg.cache.min_cacheable_prefix_tokens,
                    "Minimum cacheable prefix tokens");
  solve->add_option("--pricing", cfg.pricing, "Pricing model name");
  solve->add_option("--pricing-file", cfg.pricing_path, "Pricing model JSON file");
  solve->add_option("--output-tokens", cfg.output_tokens, "Output tokens per request");
  solve->add_option("--schedule-out", cfg.schedule_out, "Schedule JSONL output path");
  solve->add_option("--report-out", cfg.report_out, "Run report JSON output path");
  solve->add_option("--trace-out", cfg.trace_out, "Per-request trace CSV output path");
  solve->add_option("--config", config_path, "JSON config file; its values override flags");

  // simulate
  std::string schedule_path, report_out, trace_out, tokenizer_override;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Replay a schedule through the cache");
  add_table_flags(simulate_cmd, cfg);
  simulate_cmd->add_option("--schedule", schedule_path, "Schedule JSONL")->required();
  simulate_cmd->add_option("--capacity", cfg.cache.capacity_tokens, "Cache capacity in tokens");
  simulate_cmd->add_option("--eviction", eviction, "none | lru");
  simulate_cmd->add_option("--min-prefix", cfg.cache.min_cacheable_prefix_tokens,
                           "Minimum cacheable prefix tokens");
  simulate_cmd->add_option("--tokenizer", tokenizer_override,
                           "Override the schedule's tokenizer");
  simulate_cmd->add_option("--report-out", report_out, "Sim report JSON output path");
  simulate_cmd->add_option("--trace-out", trace_out, "Per-request trace CSV output path");

  // cost
  std::string sim_path, baseline_path;
  CLI::App* cost_cmd = app.add_subcommand("cost", "Price a sim report");
  cost_cmd->add_option("--sim", sim_path, "Sim report JSON")->required();
  cost_cmd->add_option("--baseline", baseline_path, "Baseline sim report for savings");
  cost_cmd->add_option("--pricing", cfg.pricing, "Pricing model name");
  cost_cmd->add_option("--pricing-file", cfg.pricing_path, "Pricing model JSON file");
  cost_cmd->add_option("--output-tokens", cfg.output_tokens, "Output tokens per request");
  cost_cmd->add_option("--report-out", report_out, "Cost report JSON output path");

  // stats
  CLI::App* stats_cmd = app.add_subcommand("stats", "Column statistics and suggested order");
  add_table_flags(stats_cmd, cfg);
  stats_cmd->add_option("--tokenizer", cfg.tokenizer, "char | word");
  stats_cmd->add_option("--scoring", cfg.scoring, "value | fragment");
  stats_cmd->add_option("--report-out", report_out, "Stats JSON output path");

  // fd-check
  std::string fd_path;
  bool discover = false;
  std::size_t discover_max_rows = 10000;
  CLI::App* fd_cmd = app.add_subcommand("fd-check", "Validate or discover field equivalences");
  add_table_flags(fd_cmd, cfg);
  fd_cmd->add_option("--fd", fd_path, "FD config JSON to validate");
  fd_cmd->add_flag("--discover", discover, "Discover bidirectional FD groups");
  fd_cmd->add_option("--max-rows", discover_max_rows, "Discovery row cap");
  fd_cmd->add_option("--report-out", report_out, "Report JSON output path");

  // dedup
  std::string prompts_path;
  CLI::App* dedup_cmd = app.add_subcommand("dedup", "Deduplicate prompts byte-exactly");
  dedup_cmd->add_option("--prompts", prompts_path, "Text file, one prompt per line");
  dedup_cmd->add_option("--schedule", schedule_path, "Schedule JSONL to take prompts from");
  dedup_cmd->add_option("--input", cfg.input_path,
                        "Table file (required with --schedule for hash verification)");
  dedup_cmd->add_option("--format", cfg.format, "csv | jsonl | auto");
  dedup_cmd->add_option("--report-out", report_out, "Dedup report JSON output path");

  try {
    std::vector<const char*> argv;
    argv.push_back("prefixopt");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    cfg.cache.eviction = eviction_by_name(eviction);
    cfg.ophr.time_budget = std::chrono::milliseconds(time_budget_ms);
    cfg.ggr.stats_variant = stats_variant_by_name(stats_variant);

    if (solve->parsed()) {
      if (!config_path.empty()) apply_config_file(cfg, config_path);
      RunReport report = cmd_solve(cfg, err);
      out << run_report_to_json(report).dump(2) << '\n';
      return report.optimal ? 0 : 3;
    }
    if (simulate_cmd->parsed()) {
      SimReport sim = cmd_simulate(cfg.input_path, cfg.format, schedule_path, cfg.cache,
                                   tokenizer_override, report_out, trace_out);
      out << sim_report_to_json(sim, "", tokenizer_override, cfg.cache)["totals"].dump(2)
          << '\n';
      return 0;
    }
    if (cost_cmd->parsed()) {
      CostCommandResult res =
          cmd_cost(sim_path, baseline_path, resolve_pricing(cfg), cfg.output_tokens, report_out);
      ojson j = cost_report_to_json(res.cost);
      if (res.savings_ratio) {
        j["baseline_dollars"] = res.baseline_cost->dollars;
        j["savings_vs_baseline"] = *res.savings_ratio;
      }
      out << j.dump(2) << '\n';
      return 0;
    }
    if (stats_cmd->parsed()) {
      ojson j = cmd_stats(cfg.input_path, cfg.format, cfg.tokenizer, cfg.scoring);
      if (!report_out.empty()) detail::write_text_file(report_out, j.dump(2) + "\n");
      out << j.dump(2) << '\n';
      return 0;
    }
    if (fd_cmd->parsed()) {
      ojson j = cmd_fd_check(cfg.input_path, cfg.format, fd_path, discover, discover_max_rows);
      if (!report_out.empty()) detail::write_text_file(report_out, j.dump(2) + "\n");
      out << j.dump(2) << '\n';
      return 0;
    }
    if (dedup_cmd->parsed()) {
      std::vector<std::string> prompts;
      if (!schedule_path.empty()) {
        if (cfg.input_path.empty())
          throw schema_error("dedup: --schedule needs --input for hash verification");
        Table t = load_table_file(cfg.input_path, detail::resolve_format(cfg));
        prompts = load_schedule_file(schedule_path, t).prompts;
      } else if (!prompts_path.empty()) {
        prompts = detail::read_prompt_lines(prompts_path);
      } else {
        throw schema_error("dedup: need --prompts or --schedule");
      }
      ojson j = cmd_dedup(prompts);
      if (!report_out.empty()) detail::write_text_file(report_out, j.dump(2) + "\n");
      out << j.dump(2) << '\n';
      return 0;
    }
  } catch (const size_error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const io_error& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  } catch (const error& e) {  // schema, structural, domain
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace prefixopt
