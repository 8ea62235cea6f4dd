#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "contigforge/pipeline.hpp"
#include "contigforge/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

struct SynthOptions {
  std::int64_t length = 10000;
  std::int64_t read_len = 200;
  double coverage = 30.0;
  std::uint64_t seed = 0;
  std::string out_reference;
  std::string out_reads;
  std::string out_layout;
};

int run_synth(const SynthOptions& opt) {
  const std::string genome = contigforge::synth_genome(opt.length, opt.seed);
  const contigforge::SynthReads reads = contigforge::synth_reads(genome, opt.read_len,
                                                                 opt.coverage, opt.seed);
  if (!opt.out_reference.empty()) {
    std::ofstream out(opt.out_reference);
    contigforge::write_fasta(out, "reference len=" + std::to_string(genome.size()), genome);
  }
  {
    std::ofstream out(opt.out_reads);
    for (std::size_t i = 0; i < reads.store.size(); ++i) {
      const auto& e = reads.store.entry_at(i);
      contigforge::write_fasta(out, e.name, reads.store.bases(e.id));
    }
  }
  if (!opt.out_layout.empty()) {
    std::ofstream out(opt.out_layout);
    out << "# read\tstart\tstrand\n";
    for (const auto& l : reads.layout) {
      out << l.id << '\t' << l.start << '\t' << (l.forward ? '+' : '-') << '\n';
    }
  }
  std::cout << "wrote " << reads.store.size() << " reads over a " << genome.size()
            << " base reference\n";
  return kExitOk;
}

struct EvalOptions {
  std::string contigs;
  std::string reference;
  std::string report;
};

int run_eval(const EvalOptions& opt) {
  const contigforge::ReadStore contig_store = contigforge::ReadStore::from_fasta(opt.contigs);
  const contigforge::ReadStore ref_store = contigforge::ReadStore::from_fasta(opt.reference);
  if (ref_store.size() != 1) {
    throw contigforge::ConfigError("reference FASTA must hold exactly one sequence");
  }
  std::vector<std::string> contigs;
  for (std::size_t i = 0; i < contig_store.size(); ++i) {
    contigs.emplace_back(contig_store.bases(contig_store.entry_at(i).id));
  }
  const std::string reference(ref_store.bases(ref_store.entry_at(0).id));
  const contigforge::QualityReport report = contigforge::evaluate(contigs, reference);

  std::cout << "completeness: " << report.completeness << "%\n"
            << "longest contig: " << report.longest_contig << "\n"
            << "contigs: " << report.contig_count << "\n"
            << "misassembled: " << report.misassembled << "\n";
  if (!opt.report.empty()) {
    std::ofstream out(opt.report);
    out << "{\n  \"completeness\": " << report.completeness
        << ",\n  \"longest_contig\": " << report.longest_contig
        << ",\n  \"contigs\": " << report.contig_count
        << ",\n  \"misassembled\": " << report.misassembled << "\n}\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contigforge: sparse-matrix contig generation over a virtual processor grid"};
  app.require_subcommand(1);

  contigforge::PipelineConfig config;
  CLI::App* run = app.add_subcommand("run", "run the assembly pipeline");
  run->add_option("--input", config.input_fasta, "input reads FASTA")->required();
  run->add_option("--grid", config.grid_p, "virtual rank count (perfect square)");
  run->add_option("-k", config.k, "k-mer length (odd, <= 31)");
  run->add_option("-t,--min-overlap", config.min_overlap, "minimum overlap bases");
  run->add_option("--fuzz", config.fuzz, "transitive reduction slack in bases");
  run->add_option("--seed", config.seed, "run seed (recorded in the report)");
  run->add_option("--max-msg-bytes", config.max_msg_bytes, "message chunking limit");
  run->add_option("--max-kmer-freq", config.max_kmer_freq,
                  "drop k-mers present in more reads than this");
  run->add_flag("--emit-singletons", config.emit_singletons,
                "write isolated reads as single-read contigs");
  run->add_option("--string-graph", config.string_graph,
                  "bypass overlap detection with a precomputed edge list TSV");
  run->add_option("--reference", config.reference_fasta,
                  "reference FASTA for quality metrics");
  run->add_option("--out", config.out_contigs, "contig FASTA output");
  run->add_option("--report", config.report_json, "report JSON output");
  run->add_option("--ledger", config.ledger_tsv, "communication ledger TSV output");
  run->add_option("--chain-dump", config.chain_dump, "per-contig chain TSV output");
  run->add_option("--matrix-dump", config.matrix_dump,
                  "string matrix in Matrix Market form with label columns");

  SynthOptions synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic genome and reads");
  synth_cmd->add_option("--length", synth.length, "reference length");
  synth_cmd->add_option("--read-len", synth.read_len, "read length");
  synth_cmd->add_option("--coverage", synth.coverage, "sampling depth");
  synth_cmd->add_option("--seed", synth.seed, "sampling seed");
  synth_cmd->add_option("--out-reference", synth.out_reference, "reference FASTA output");
  synth_cmd->add_option("--out-reads", synth.out_reads, "reads FASTA output")->required();
  synth_cmd->add_option("--out-layout", synth.out_layout, "true layout TSV output");

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "quality metrics against a reference");
  eval_cmd->add_option("--contigs", eval.contigs, "contig FASTA")->required();
  eval_cmd->add_option("--reference", eval.reference, "reference FASTA")->required();
  eval_cmd->add_option("--report", eval.report, "report JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      const contigforge::PipelineResult result = contigforge::run_pipeline_files(config);
      std::cout << result.report_text;
      return kExitOk;
    }
    if (synth_cmd->parsed()) return run_synth(synth);
    if (eval_cmd->parsed()) return run_eval(eval);
  } catch (const contigforge::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const contigforge::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  }
  return kExitOk;
}
