// cake-forge: staged pipeline for forging causal multi-choice QA data from
// captions with a language model.
//
// Exit codes: 0 success, 1 usage/config, 2 data validation, 3 provider failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "cakeforge/error.hpp"
#include "cakeforge/pipeline.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitProvider = 3;

int exit_code_for(const cake::Error& e) {
  if (e.provider_failure()) return kExitProvider;
  if (e.kind() == cake::ErrorKind::InvalidConfig) return kExitUsage;
  return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cake-forge: causal video-QA dataset synthesis from captions"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  std::optional<std::size_t> max_in_flight;
  app.add_option("--config", config_path, "Pipeline config (JSON)");
  app.add_option("--seed", seed, "Master seed (overrides config)");
  app.add_flag("--strict", strict, "Fail on any per-caption provider error");
  app.add_option("--max-in-flight", max_in_flight, "Concurrent provider requests")->check(CLI::PositiveNumber);

  std::string captions, responses, out, csv, scorer, input, out_dir, second_out, a_csv, b_csv;
  std::string tag_a = "gpt", tag_b = "student";
  std::size_t first_size = 0, k_gen = cake::kDefaultTopGenerated, k_cap = cake::kDefaultTopCaption;

  auto* gen = app.add_subcommand("generate", "Prompt the LM for intentions of each caption");
  gen->add_option("--captions", captions, "Caption file (JSONL or 2-column CSV)")->required();
  gen->add_option("--out", out, "Responses file (JSONL)")->required();

  auto* build = app.add_subcommand("build", "Pool responses and emit the multi-choice CSV");
  build->add_option("--responses", responses, "Responses file from generate")->required();
  build->add_option("--out", out, "Output CSV")->required();

  auto* trn = app.add_subcommand("train", "Train the linear hinge-loss scorer on a dataset CSV");
  trn->add_option("--csv", csv, "Dataset CSV")->required();
  trn->add_option("--scorer", scorer, "Output scorer file")->required();

  auto* ev = app.add_subcommand("eval", "Evaluate a scorer on a dataset CSV");
  ev->add_option("--csv", csv, "Dataset CSV")->required();
  ev->add_option("--scorer", scorer, "Scorer file")->required();

  auto* split = app.add_subcommand("split", "Seeded split of a caption corpus (teacher / student)");
  split->add_option("--captions", captions, "Caption file")->required();
  split->add_option("--first-size", first_size, "Records in the first split")->required();
  split->add_option("--out-first", out, "First split output (JSONL)")->required();
  split->add_option("--out-second", second_out, "Second split output (JSONL)")->required();

  auto* distill = app.add_subcommand("distill-export", "Export (caption, response) pairs for fine-tuning");
  distill->add_option("--responses", responses, "Responses file")->required();
  distill->add_option("--out", out, "Output JSONL")->required();

  auto* analyze = app.add_subcommand("analyze", "Answer-length CDF and frequent-word overlap");
  analyze->add_option("--input", input, "Responses JSONL or dataset CSV")->required();
  analyze->add_option("--out-dir", out_dir, "Report directory")->required();
  analyze->add_option("--k-gen", k_gen, "Top generated words")->check(CLI::PositiveNumber);
  analyze->add_option("--k-cap", k_cap, "Top caption words")->check(CLI::PositiveNumber);

  auto* merge = app.add_subcommand("merge", "Concatenate two dataset CSVs with namespaced qids");
  merge->add_option("--a", a_csv, "First CSV")->required();
  merge->add_option("--b", b_csv, "Second CSV")->required();
  merge->add_option("--tag-a", tag_a, "qid namespace for the first CSV");
  merge->add_option("--tag-b", tag_b, "qid namespace for the second CSV");
  merge->add_option("--out", out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    cake::PipelineConfig cfg = config_path.empty() ? cake::PipelineConfig{} : cake::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (max_in_flight) cfg.max_in_flight = *max_in_flight;

    auto providers = [&] { return cake::make_providers(cfg); };

    if (*gen) {
      const auto r = cake::run_generate(cfg, providers(), captions, out, strict);
      std::cout << "captions_in=" << r.captions_in << " responses_out=" << r.responses_out
                << " filtered=" << r.filtered << " skipped=" << r.skipped << "\n";
    } else if (*build) {
      const auto r = cake::run_build(cfg, providers(), responses, out);
      std::cout << "records=" << r.records << " pools=" << r.num_pools << " fallback_records=" << r.fallback_records
                << "\n";
    } else if (*trn) {
      const auto r = cake::run_train(cfg, providers(), csv, scorer);
      std::printf("records=%zu epochs=%zu train_accuracy=%.4f\n", r.records, r.epochs, r.train_accuracy);
    } else if (*ev) {
      std::printf("accuracy=%.4f\n", cake::run_eval(cfg, providers(), csv, scorer));
    } else if (*split) {
      const auto s = cake::run_split(cfg, captions, first_size, out, second_out);
      std::cout << "first=" << s.first.size() << " second=" << s.second.size() << "\n";
    } else if (*distill) {
      std::cout << "pairs=" << cake::run_distill_export(responses, out) << "\n";
    } else if (*analyze) {
      const auto r = cake::run_analyze(input, out_dir, k_gen, k_cap);
      std::cout << "answers_cdf_points=" << r.cdf.points.size() << " overlap=";
      bool first = true;
      for (const auto& w : r.overlap.overlap) {
        std::cout << (first ? "" : ",") << w;
        first = false;
      }
      std::printf(" overlap_fraction=%.4f\n", r.overlap.overlap_fraction);
    } else if (*merge) {
      std::cout << "records=" << cake::run_merge(a_csv, b_csv, out, tag_a, tag_b) << "\n";
    }
  } catch (const cake::Error& e) {
    std::cerr << "cake-forge: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "cake-forge: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
