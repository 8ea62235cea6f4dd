// Acceptance suite: each criterion prints one PASS/FAIL line; the binary
// exits nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "contigforge/contig.hpp"
#include "contigforge/overlap_graph.hpp"
#include "contigforge/pipeline.hpp"
#include "contigforge/synth.hpp"
#include "oracles.hpp"

using namespace contigforge;
using Clock = std::chrono::steady_clock;

namespace {

class Harness {
 public:
  template <class F>
  void criterion(int number, const std::string& title, F&& body) {
    const auto start = Clock::now();
    std::string failure;
    try {
      body();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    char line[512];
    std::snprintf(line, sizeof(line), "[%s] criterion %2d: %s (%.2fs)%s%s",
                  failure.empty() ? "PASS" : "FAIL", number, title.c_str(), secs,
                  failure.empty() ? "" : " -- ", failure.c_str());
    std::cout << line << std::endl;
    failed_ += !failure.empty();
  }

  int summary() const {
    std::cout << (failed_ == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << std::endl;
    return failed_ == 0 ? 0 : 1;
  }

 private:
  int failed_ = 0;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path((std::filesystem::temp_directory_path() / name).string()) {}
  ~TempFile() { std::remove(path.c_str()); }
};

std::vector<std::pair<std::int64_t, std::int64_t>> random_graph(std::mt19937_64& rng,
                                                                std::int64_t n, int edges) {
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (int e = 0; e < edges; ++e) {
    const std::int64_t u = static_cast<std::int64_t>(rng() % n);
    const std::int64_t v = static_cast<std::int64_t>(rng() % n);
    if (u != v && seen.insert({std::min(u, v), std::max(u, v)}).second) out.emplace_back(u, v);
  }
  return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> random_path_forest(std::mt19937_64& rng,
                                                                      std::int64_t n) {
  std::vector<std::int64_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  for (std::int64_t i = 1; i < n; ++i) {
    if (rng() % 4 != 0) edges.emplace_back(order[i - 1], order[i]);
  }
  return edges;
}

DistSparseMatrix<EdgeLabel> symmetric_graph(
    Grid& g, std::int64_t n, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
  std::vector<Triple<EdgeLabel>> triples;
  for (const auto& [u, v] : edges) {
    EdgeLabel e;
    e.overhang = static_cast<std::uint32_t>(u + 7 * v + 1);
    e.pre = static_cast<std::int32_t>(u % 97);
    e.post = static_cast<std::int32_t>(v % 89);
    EdgeLabel m = e;
    m.dir = EdgeDir::prefix_suffix;
    m.overhang = static_cast<std::uint32_t>(v + 7 * u + 1);
    triples.push_back({u, v, e});
    triples.push_back({v, u, m});
  }
  return DistSparseMatrix<EdgeLabel>::from_triples(g, n, n, triples);
}

}  // namespace

int main() {
  Harness h;

  // 1. Fig. 3 fixture through the string-graph bypass: the early-ended
  //    pre/post pairs (1,0) and (4,2) survive exactly and assembly emits
  //    AGAACTGAAGAA in under a second.
  h.criterion(1, "three-read fixture assembles AGAACTGAAGAA with pre/post (1,0),(4,2)", [&] {
    const auto start = Clock::now();
    TempFile reads_file("acc_fig3_reads.fa");
    TempFile graph_file("acc_fig3_graph.tsv");
    std::ofstream(reads_file.path) << ">l0\nAGAACT\n>l1\nAACTGAAG\n>l2\nTGAAGAA\n";
    std::ofstream(graph_file.path) << "0 1 2 4 1 0\n1 2 2 2 4 2\n";

    PipelineConfig config;
    config.grid_p = 1;
    config.input_fasta = reads_file.path;
    config.string_graph = graph_file.path;
    const PipelineResult result = run_pipeline_files(config);

    require(result.contigs.size() == 1, "expected exactly one contig");
    require(result.contigs[0].sequence == "AGAACTGAAGAA",
            "contig is " + result.contigs[0].sequence);
    const auto& edges = result.contigs[0].chain.edges;
    require(edges.size() == 2, "expected two walk steps");
    require(edges[0].pre == 1 && edges[0].post == 0, "first step is not (1,0)");
    require(edges[1].pre == 4 && edges[1].post == 2, "second step is not (4,2)");
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    require(secs < 1.0, "fixture took " + std::to_string(secs) + "s");
  });

  // 2. Branch masking on 1,000 random graphs.
  h.criterion(2, "branch masking equals the degree>=3 oracle on 1000 random graphs", [&] {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
      Grid g(trial % 2 == 0 ? 4 : 1);
      const std::int64_t n = 2 + rng() % 199;
      const auto edges = random_graph(rng, n, static_cast<int>(n + rng() % n));
      auto s = symmetric_graph(g, n, edges);
      const auto out = branch_removal(s);

      const auto degrees = oracles::adjacency_degrees(n, edges);
      std::vector<std::int64_t> expected;
      for (std::int64_t v = 0; v < n; ++v) {
        if (degrees[v] >= 3) expected.push_back(v);
      }
      require(out.masked == expected, "masked set mismatch at trial " + std::to_string(trial));

      const VectorLayout layout(n, g);
      for (const auto& chunk : row_degree(out.linear, layout)) {
        for (std::int64_t d : chunk) {
          require(d <= 2, "degree above 2 after masking at trial " + std::to_string(trial));
        }
      }
    }
  });

  // 3. Connected components against union-find on 1,000 path forests.
  h.criterion(3, "connected components match union-find on 1000 path forests", [&] {
    std::mt19937_64 rng(333);
    for (int trial = 0; trial < 1000; ++trial) {
      Grid g(trial % 2 == 0 ? 4 : 9);
      const std::int64_t n = 2 + rng() % 499;
      const auto edges = random_path_forest(rng, n);
      auto l = symmetric_graph(g, n, edges);
      const auto v = connected_components(l);

      auto expected = oracles::union_find_components(n, edges);
      const auto degrees = oracles::adjacency_degrees(n, edges);
      for (std::int64_t i = 0; i < n; ++i) {
        if (degrees[i] == 0) expected[i] = -1;
      }
      require(oracles::same_partition(v.gather(), expected),
              "partition mismatch at trial " + std::to_string(trial));
    }
  });

  // 4. LPT within the (4P-1)/(3P) ratio of brute-force optimal.
  h.criterion(4, "LPT makespan within (4P-1)/(3P) of optimal on 1000 instances", [&] {
    std::mt19937_64 rng(4444);
    for (int trial = 0; trial < 1000; ++trial) {
      const int p = 2 + static_cast<int>(rng() % 3);
      std::vector<std::int64_t> sizes(1 + rng() % 12);
      for (auto& s : sizes) s = 1 + static_cast<std::int64_t>(rng() % 50);
      const auto out = lpt_assign(sizes, p);
      const std::int64_t makespan = *std::max_element(out.rank_load.begin(), out.rank_load.end());
      const std::int64_t optimal = oracles::optimal_makespan(sizes, p);
      require(makespan * 3 * p <= (4 * p - 1) * optimal,
              "ratio exceeded at trial " + std::to_string(trial));
    }
  });

  // 5. Induced subgraph equals the intra-rank filter oracle, payloads
  //    included, on 500 random (graph, assignment) pairs.
  h.criterion(5, "induced subgraph matches the intra-rank oracle on 500 pairs", [&] {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 500; ++trial) {
      Grid g(trial % 2 == 0 ? 4 : 16);
      const std::int64_t n = 10 + rng() % 190;
      const auto edges = random_path_forest(rng, n);
      auto l = symmetric_graph(g, n, edges);
      const auto v = connected_components(l);

      AssignmentVector par;
      par.par.resize(v.n_contigs);
      par.rank_load.assign(g.size(), 0);
      for (auto& r : par.par) r = static_cast<Rank>(rng() % g.size());

      const auto locals = induced_subgraph(l, v, par);

      std::map<std::pair<std::int64_t, std::int64_t>, EdgeLabel> expected;
      for (const auto& t : l.gather_triples()) expected[{t.row, t.col}] = t.value;

      std::size_t seen = 0;
      const auto labels = v.gather();
      for (Rank r = 0; r < g.size(); ++r) {
        for (const auto& t : locals[r].matrix.to_triples()) {
          const std::int64_t gu = locals[r].global_ids[t.row];
          const std::int64_t gv = locals[r].global_ids[t.col];
          require(par.par[labels[gu]] == r && par.par[labels[gv]] == r,
                  "edge landed on the wrong rank");
          const auto it = expected.find({gu, gv});
          require(it != expected.end(), "unexpected edge in local matrix");
          require(it->second == t.value, "payload mismatch");
          ++seen;
        }
      }
      require(seen == expected.size(), "edge multiset size mismatch");
    }
  });

  // 6. Read exchange preserves the (id, sequence) multiset bit-exactly
  //    under every chunking limit, with byte conservation.
  h.criterion(6, "read exchange is bit-exact under max_msg_bytes {1, 7, 64Ki}", [&] {
    std::mt19937_64 rng(666);
    constexpr char bases[] = {'A', 'C', 'G', 'T'};
    for (const std::uint64_t max_msg : {std::uint64_t{1}, std::uint64_t{7},
                                        std::uint64_t{64} * 1024}) {
      Grid g(9, max_msg);
      const std::int64_t n = 120;
      const VectorLayout layout(n, g);
      ReadStore global;
      for (std::int64_t id = 0; id < n; ++id) {
        std::string seq(20 + rng() % 200, 'A');
        for (auto& b : seq) b = bases[rng() % 4];
        global.append(id, "", seq);
      }
      const auto before = scatter_reads(g, global, layout);
      std::unordered_map<std::int64_t, Rank> assignment;
      for (std::int64_t id = 0; id < n; ++id) assignment[id] = static_cast<Rank>(rng() % 9);
      const auto after = exchange_reads(g, before, assignment);

      std::map<std::int64_t, std::string> want, got;
      for (std::int64_t id = 0; id < n; ++id) want[id] = std::string(global.bases(id));
      for (const auto& store : after) {
        for (std::size_t i = 0; i < store.size(); ++i) {
          const auto& e = store.entry_at(i);
          require(got.emplace(e.id, std::string(store.bases(e.id))).second, "duplicate read");
        }
      }
      require(got == want, "read multiset changed under max_msg_bytes " +
                               std::to_string(max_msg));
      require(g.ledger().total_bytes_sent() == g.ledger().total_bytes_delivered(),
              "ledger bytes not conserved");
    }
  });

  // 7. End-to-end quality; the 20 seeds rotate over the three grid sizes
  //    so every P is exercised within the runtime budget (completeness is
  //    grid-independent, which criterion 8 verifies separately).
  h.criterion(7, "10kb end-to-end: exact contigs, median completeness >= 90 (20 seeds)", [&] {
    const auto start = Clock::now();
    const int grids[] = {1, 4, 16};
    std::vector<double> completeness;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const int p = grids[seed % 3];
      const std::string genome = synth_genome(10000, 9000 + seed);
      const SynthReads reads = synth_reads(genome, 200, 30.0, 9100 + seed);
      PipelineConfig config;
      config.k = 15;
      config.min_overlap = 60;
      config.fuzz = 10;
      config.grid_p = p;
      config.max_kmer_freq = 96;
      config.seed = seed;
      const PipelineResult result = run_pipeline(config, reads.store, &genome);
      require(result.report.misassembled == 0,
              "misassembly at P=" + std::to_string(p) + " seed " + std::to_string(seed));
      for (const auto& c : result.contigs) {
        require(oracles::is_substring_either_strand(c.sequence, genome),
                "contig not a reference substring at P=" + std::to_string(p) + " seed " +
                    std::to_string(seed));
      }
      completeness.push_back(result.report.completeness);
    }
    std::sort(completeness.begin(), completeness.end());
    const double median = completeness[completeness.size() / 2];
    require(median >= 90.0, "median completeness " + std::to_string(median));
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    require(secs < 30.0, "end-to-end took " + std::to_string(secs) + "s");
  });

  h.criterion(8, "sorted contig output identical for P in {1,4,16}", [&] {
    std::map<int, std::string> sorted_fasta;
    const std::string genome = synth_genome(10000, 8999);
    const SynthReads reads = synth_reads(genome, 200, 30.0, 8998);
    for (const int p : {1, 4, 16}) {
      PipelineConfig config;
      config.k = 15;
      config.min_overlap = 60;
      config.grid_p = p;
      config.max_kmer_freq = 96;
      const PipelineResult result = run_pipeline(config, reads.store, &genome);
      std::vector<std::string> seqs;
      for (const auto& c : result.contigs) seqs.push_back(c.sequence);
      std::sort(seqs.begin(), seqs.end());
      std::ostringstream os;
      for (const auto& s : seqs) os << s << '\n';
      sorted_fasta[p] = os.str();
    }
    require(!sorted_fasta.at(1).empty(), "no contigs emitted");
    require(sorted_fasta.at(1) == sorted_fasta.at(4), "P=1 and P=4 outputs differ");
    require(sorted_fasta.at(4) == sorted_fasta.at(16), "P=4 and P=16 outputs differ");
  });

  // 9. Transitive reduction equals the cubic oracle and is a fixpoint.
  h.criterion(9, "transitive reduction matches the cubic oracle on 100 seeds", [&] {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Grid g(seed % 2 == 0 ? 4 : 1);
      const std::string genome = synth_genome(2000, 7000 + seed);
      const SynthReads reads = synth_reads(genome, 200, 8.0, 7100 + seed);
      const KmerIndex index = kmer_matrix(g, reads.store, 15, 1000);
      const auto r = align_filter(candidate_overlaps(index), reads.store, 40, 15);
      const auto pruned = prune_contained(r, reads.store);

      std::vector<oracles::OracleEdge> edges;
      for (const auto& t : pruned.graph.gather_triples()) edges.push_back({t.row, t.col, t.value});
      const auto expected = oracles::cubic_transitive_reduction(edges, 10);

      const auto s = transitive_reduction(pruned.graph, 10);
      const auto got = s.gather_triples();
      require(got.size() == expected.size(),
              "edge count mismatch at seed " + std::to_string(seed));
      std::map<std::pair<std::int64_t, std::int64_t>, EdgeLabel> want;
      for (const auto& e : expected) want[{e.u, e.v}] = e.label;
      for (const auto& t : got) {
        const auto it = want.find({t.row, t.col});
        require(it != want.end() && it->second == t.value,
                "edge set mismatch at seed " + std::to_string(seed));
      }
      require(transitive_reduction(s, 10).nnz() == s.nnz(),
              "not a fixpoint at seed " + std::to_string(seed));
    }
  });

  // 10. Communication shape of the induced-subgraph stage on a 4x4 grid.
  h.criterion(10, "induced-subgraph allgather stays in rows, transposes pair (i,j)/(j,i)", [&] {
    std::mt19937_64 rng(1010);
    Grid g(16);
    const std::int64_t n = 160;
    const auto edges = random_path_forest(rng, n);
    auto l = symmetric_graph(g, n, edges);
    const auto v = connected_components(l);
    const auto sizes = contig_sizes(g, v);
    const auto par = lpt_partition(g, sizes.gathered);
    g.ledger().clear();  // isolate the stage under test
    induced_subgraph(l, v, par);

    bool saw_allgather = false, saw_transpose = false;
    for (const auto& [key, counters] : g.ledger().entries()) {
      if (key.stage != "induced_subgraph") continue;
      const Coord s = g.coords(key.src);
      const Coord d = g.coords(key.dst);
      if (key.op == CommOp::row_allgather) {
        saw_allgather = true;
        require(s.row == d.row, "allgather traffic crossed rows");
      }
      if (key.op == CommOp::transpose) {
        saw_transpose = true;
        require(s.row == d.col && s.col == d.row, "transpose traffic not between (i,j)/(j,i)");
      }
    }
    require(saw_allgather, "no allgather traffic recorded");
    require(saw_transpose, "no transpose traffic recorded");
  });

  return h.summary();
}
