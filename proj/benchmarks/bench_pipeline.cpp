#include <benchmark/benchmark.h>

#include "contigforge/contig.hpp"
#include "contigforge/overlap_graph.hpp"
#include "contigforge/pipeline.hpp"
#include "contigforge/synth.hpp"

using namespace contigforge;

namespace {

SynthReads make_reads(std::int64_t genome_len, std::int64_t read_len, double coverage) {
  const std::string genome = synth_genome(genome_len, 77);
  return synth_reads(genome, read_len, coverage, 78);
}

DistSparseMatrix<EdgeLabel> make_string_graph(Grid& g, const ReadStore& store) {
  const KmerIndex index = kmer_matrix(g, store, 15, 256);
  const auto r = align_filter(candidate_overlaps(index), store, 50, 15);
  return transitive_reduction(prune_contained(r, store).graph, 10);
}

}  // namespace

static void BM_CandidateOverlaps(benchmark::State& state) {
  const SynthReads reads = make_reads(5000, 200, state.range(0));
  Grid g(4);
  const KmerIndex index = kmer_matrix(g, reads.store, 15, 256);
  for (auto _ : state) {
    benchmark::DoNotOptimize(candidate_overlaps(index));
  }
  state.SetLabel(std::to_string(reads.store.size()) + " reads");
}
BENCHMARK(BM_CandidateOverlaps)->Arg(10)->Arg(30);

static void BM_AlignFilter(benchmark::State& state) {
  const SynthReads reads = make_reads(5000, 200, 20);
  Grid g(4);
  const KmerIndex index = kmer_matrix(g, reads.store, 15, 256);
  const auto candidates = candidate_overlaps(index);
  for (auto _ : state) {
    benchmark::DoNotOptimize(align_filter(candidates, reads.store, 50, 15));
  }
}
BENCHMARK(BM_AlignFilter);

static void BM_TransitiveReduction(benchmark::State& state) {
  const SynthReads reads = make_reads(5000, 200, 15);
  Grid g(4);
  const KmerIndex index = kmer_matrix(g, reads.store, 15, 256);
  const auto r = align_filter(candidate_overlaps(index), reads.store, 50, 15);
  const auto pruned = prune_contained(r, reads.store);
  for (auto _ : state) {
    benchmark::DoNotOptimize(transitive_reduction(pruned.graph, 10));
  }
}
BENCHMARK(BM_TransitiveReduction);

static void BM_ConnectedComponents(benchmark::State& state) {
  const SynthReads reads = make_reads(8000, 200, 12);
  Grid warmup(static_cast<int>(state.range(0)));
  const auto s = make_string_graph(warmup, reads.store);
  const auto linear = branch_removal(s).linear;
  for (auto _ : state) {
    benchmark::DoNotOptimize(connected_components(linear));
  }
}
BENCHMARK(BM_ConnectedComponents)->Arg(1)->Arg(4)->Arg(16);

static void BM_LocalAssembly(benchmark::State& state) {
  const SynthReads reads = make_reads(8000, 200, 12);
  Grid g(1);
  const auto s = make_string_graph(g, reads.store);
  const auto branches = branch_removal(s);
  const auto v = connected_components(branches.linear);
  AssignmentVector par;
  par.par.assign(v.n_contigs, 0);
  par.rank_load.assign(1, 0);
  const auto locals = induced_subgraph(branches.linear, v, par);
  const VectorLayout layout(static_cast<std::int64_t>(reads.store.size()), g);
  const auto stores = scatter_reads(g, reads.store, layout);
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_assembly(locals[0], stores[0]));
  }
}
BENCHMARK(BM_LocalAssembly);

static void BM_EndToEnd(benchmark::State& state) {
  const std::string genome = synth_genome(10000, 90);
  const SynthReads reads = synth_reads(genome, 200, 30, 91);
  PipelineConfig config;
  config.k = 15;
  config.min_overlap = 60;
  config.grid_p = static_cast<int>(state.range(0));
  config.max_kmer_freq = 96;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_pipeline(config, reads.store, &genome));
  }
}
BENCHMARK(BM_EndToEnd)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
