#include "contigforge/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "contigforge/kmer_index.hpp"
#include "contigforge/overlap_graph.hpp"

namespace contigforge {

namespace {

bool is_perfect_square(int p) {
  const int side = static_cast<int>(std::llround(std::sqrt(static_cast<double>(p))));
  return side * side == p;
}

class StageClock {
 public:
  explicit StageClock(QualityReport& report) : report_(report) {}

  template <class F>
  auto run(Grid& grid, const std::string& stage, F&& body) {
    grid.ledger().set_stage(stage);
    const auto before = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        finish(stage, before);
      } else {
        auto out = body();
        finish(stage, before);
        return out;
      }
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(stage, e.what());
    }
  }

 private:
  void finish(const std::string& stage, std::chrono::steady_clock::time_point before) {
    const auto after = std::chrono::steady_clock::now();
    report_.stage_seconds[stage] +=
        std::chrono::duration<double>(after - before).count();
  }

  QualityReport& report_;
};

void collect_ledger(const Grid& grid, QualityReport& report) {
  report.total_bytes = grid.ledger().total_bytes_sent();
  report.total_msgs = grid.ledger().total_msgs();
  for (const auto& [key, counters] : grid.ledger().entries()) {
    report.stage_bytes[key.stage] += counters.bytes_sent;
  }
}

}  // namespace

void PipelineConfig::validate() const {
  if (grid_p < 1 || !is_perfect_square(grid_p)) {
    throw ConfigError("grid size " + std::to_string(grid_p) + " is not a perfect square");
  }
  if (k < 1 || k % 2 == 0) throw ConfigError("k must be odd and positive");
  if (k > 31) throw ConfigError("k must be at most 31");
  if (min_overlap < k) throw ConfigError("minimum overlap t must be >= k");
  if (fuzz < 0) throw ConfigError("fuzz must be non-negative");
  if (max_msg_bytes < 1) throw ConfigError("max-msg-bytes must be >= 1");
  if (max_kmer_freq < 1) throw ConfigError("max-kmer-freq must be >= 1");
}

DistSparseMatrix<EdgeLabel> load_string_graph(const std::string& path, Grid& grid,
                                              const ReadStore& store) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open string-graph file " + path);

  std::map<std::pair<std::int64_t, std::int64_t>, EdgeLabel> edges;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::int64_t u, v;
    int dir;
    std::int64_t overhang, pre, post;
    if (!(fields >> u >> v >> dir >> overhang >> pre >> post)) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 6 columns");
    }
    if (!store.has(u) || !store.has(v) || u == v) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad read pair");
    }
    if (dir < 0 || dir > 3 || overhang < 0 || pre < 0 || post < 0) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad label fields");
    }
    EdgeLabel e;
    e.dir = static_cast<EdgeDir>(dir);
    e.overhang = static_cast<std::uint32_t>(overhang);
    e.pre = static_cast<std::int32_t>(pre);
    e.post = static_cast<std::int32_t>(post);
    if (!label_in_bounds(e, store.length(u), store.length(v))) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": label out of read bounds");
    }
    if (!edges.emplace(std::pair{u, v}, e).second) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": duplicate edge");
    }
  }

  // Complete or verify the mirrored direction of each edge.
  std::vector<Triple<EdgeLabel>> triples;
  for (const auto& [key, label] : edges) {
    const auto [u, v] = key;
    triples.push_back({u, v, label});
    const EdgeLabel rev = mirror_label(label, store.length(u), store.length(v));
    const auto it = edges.find({v, u});
    if (it == edges.end()) {
      if (u < v) triples.push_back({v, u, rev});
    } else if (u < v && !(it->second == rev)) {
      throw ParseError(path + ": labels of (" + std::to_string(u) + "," + std::to_string(v) +
                       ") and its mirror are not strand-consistent");
    }
  }

  const std::int64_t n = static_cast<std::int64_t>(store.size());
  return DistSparseMatrix<EdgeLabel>::from_triples(grid, n, n, triples);
}

void write_string_graph(std::ostream& os, const DistSparseMatrix<EdgeLabel>& s) {
  os << "# u\tv\tdir\toverhang\tpre\tpost\n";
  for (const auto& t : s.gather_triples()) {
    os << t.row << '\t' << t.col << '\t' << static_cast<int>(t.value.dir) << '\t'
       << t.value.overhang << '\t' << t.value.pre << '\t' << t.value.post << '\n';
  }
}

void write_matrix_market(std::ostream& os, const DistSparseMatrix<EdgeLabel>& s) {
  os << "%%MatrixMarket matrix coordinate integer general\n"
     << "% extra columns: direction overhang pre post\n"
     << s.n_rows() << ' ' << s.n_cols() << ' ' << s.nnz() << '\n';
  for (const auto& t : s.gather_triples()) {
    os << t.row + 1 << ' ' << t.col + 1 << ' ' << static_cast<int>(t.value.dir) << ' '
       << t.value.overhang << ' ' << t.value.pre << ' ' << t.value.post << '\n';
  }
}

PipelineResult run_pipeline(const PipelineConfig& config, const ReadStore& reads,
                            const std::string* reference) {
  config.validate();

  PipelineResult result;
  Grid grid(config.grid_p, config.max_msg_bytes);
  StageClock clock(result.report);
  const std::int64_t n_reads = static_cast<std::int64_t>(reads.size());

  DistSparseMatrix<EdgeLabel> string_graph;
  if (!config.string_graph.empty()) {
    string_graph = clock.run(grid, "load_string_graph",
                             [&] { return load_string_graph(config.string_graph, grid, reads); });
  } else if (n_reads > 0) {
    const KmerIndex index = clock.run(grid, "kmer_matrix", [&] {
      return kmer_matrix(grid, reads, config.k, config.max_kmer_freq);
    });
    const auto candidates =
        clock.run(grid, "candidate_overlaps", [&] { return candidate_overlaps(index); });
    const auto overlaps = clock.run(grid, "align_filter", [&] {
      return align_filter(candidates, reads, config.min_overlap, config.k);
    });
    auto pruned =
        clock.run(grid, "prune_contained", [&] { return prune_contained(overlaps, reads); });
    result.containment_masked = std::move(pruned.masked);
    string_graph = clock.run(grid, "transitive_reduction", [&] {
      return transitive_reduction(pruned.graph, config.fuzz, config.tr_max_iters);
    });
  } else {
    string_graph = DistSparseMatrix<EdgeLabel>::from_triples(grid, 0, 0, {});
  }

  if (!config.matrix_dump.empty()) {
    std::ofstream out(config.matrix_dump);
    if (!out) throw StageError("write_matrix", "cannot open " + config.matrix_dump);
    write_matrix_market(out, string_graph);
  }

  auto branches = clock.run(grid, "branch_removal", [&] { return branch_removal(string_graph); });
  result.branch_masked = std::move(branches.masked);

  const ComponentVector components =
      clock.run(grid, "connected_components", [&] { return connected_components(branches.linear); });
  result.n_components = components.n_contigs;

  const ContigSizes sizes =
      clock.run(grid, "contig_sizes", [&] { return contig_sizes(grid, components); });

  const AssignmentVector assignment =
      clock.run(grid, "lpt_partition", [&] { return lpt_partition(grid, sizes.gathered); });

  const auto locals = clock.run(grid, "induced_subgraph", [&] {
    return induced_subgraph(branches.linear, components, assignment);
  });

  const VectorLayout read_layout(n_reads, grid);
  const auto rank_stores = clock.run(grid, "exchange_reads", [&] {
    std::vector<ReadStore> initial = scatter_reads(grid, reads, read_layout);
    std::unordered_map<std::int64_t, Rank> destination;
    const auto labels = components.gather();
    for (std::int64_t id = 0; id < n_reads; ++id) {
      destination[id] = labels.empty() || labels[id] == ComponentVector::kNone
                            ? read_layout.owner(id)
                            : assignment.par[labels[id]];
    }
    return exchange_reads(grid, initial, destination);
  });

  std::vector<NamedContig> contigs = clock.run(grid, "local_assembly", [&] {
    std::vector<NamedContig> out;
    for (Rank r = 0; r < grid.size(); ++r) {
      for (auto& assembled : local_assembly(locals[r], rank_stores[r])) {
        NamedContig named;
        named.sequence = std::move(assembled.sequence);
        named.chain = std::move(assembled.chain);
        named.rank = r;
        out.push_back(std::move(named));
      }
    }
    return out;
  });

  if (config.emit_singletons) {
    const auto labels = components.gather();
    std::unordered_set<std::int64_t> excluded(result.branch_masked.begin(),
                                              result.branch_masked.end());
    excluded.insert(result.containment_masked.begin(), result.containment_masked.end());
    for (std::int64_t id = 0; id < n_reads; ++id) {
      if (labels[id] == ComponentVector::kNone && !excluded.contains(id)) {
        NamedContig single;
        single.sequence = std::string(reads.bases(id));
        single.chain.reads = {id};
        single.chain.forward = {true};
        single.rank = read_layout.owner(id);
        contigs.push_back(std::move(single));
        result.singletons_emitted += 1;
      }
    }
  }

  // Ordering by smallest read id keeps the output independent of the grid.
  std::sort(contigs.begin(), contigs.end(), [](const NamedContig& a, const NamedContig& b) {
    return *std::min_element(a.chain.reads.begin(), a.chain.reads.end()) <
           *std::min_element(b.chain.reads.begin(), b.chain.reads.end());
  });
  for (std::size_t i = 0; i < contigs.size(); ++i) {
    contigs[i].name = "contig_" + std::to_string(i) + " len=" +
                      std::to_string(contigs[i].sequence.size()) +
                      " reads=" + std::to_string(contigs[i].chain.reads.size());
  }
  result.contigs = std::move(contigs);

  collect_ledger(grid, result.report);
  result.report.contig_count = static_cast<std::int64_t>(result.contigs.size());
  for (const auto& c : result.contigs) {
    result.report.longest_contig =
        std::max(result.report.longest_contig, static_cast<std::int64_t>(c.sequence.size()));
  }

  if (reference != nullptr) {
    result.has_quality = true;
    std::vector<std::string> sequences;
    sequences.reserve(result.contigs.size());
    for (const auto& c : result.contigs) sequences.push_back(c.sequence);
    const QualityReport quality = evaluate(sequences, *reference);
    result.report.completeness = quality.completeness;
    result.report.misassembled = quality.misassembled;
  }

  std::ostringstream text;
  text << "contigs: " << result.contigs.size() << "\n"
       << "longest: " << result.report.longest_contig << "\n"
       << "components: " << result.n_components << "\n"
       << "branch vertices masked: " << result.branch_masked.size() << "\n"
       << "contained reads masked: " << result.containment_masked.size() << "\n"
       << "communication bytes: " << result.report.total_bytes << "\n";
  if (reference != nullptr) {
    text << "completeness: " << result.report.completeness << "%\n"
         << "misassembled: " << result.report.misassembled << "\n";
  }
  result.report_text = text.str();

  if (!config.out_contigs.empty()) {
    std::ofstream out(config.out_contigs);
    if (!out) throw StageError("write_contigs", "cannot open " + config.out_contigs);
    for (const auto& c : result.contigs) write_fasta(out, c.name, c.sequence);
  }
  if (!config.ledger_tsv.empty()) {
    std::ofstream out(config.ledger_tsv);
    if (!out) throw StageError("write_ledger", "cannot open " + config.ledger_tsv);
    grid.ledger().dump_tsv(out);
  }
  if (!config.chain_dump.empty()) {
    std::ofstream out(config.chain_dump);
    if (!out) throw StageError("write_chains", "cannot open " + config.chain_dump);
    out << "# contig\trank\treads\torientations\tpre:post\n";
    for (std::size_t i = 0; i < result.contigs.size(); ++i) {
      const auto& c = result.contigs[i];
      out << i << '\t' << c.rank << '\t';
      for (std::size_t j = 0; j < c.chain.reads.size(); ++j) {
        out << (j ? "," : "") << c.chain.reads[j];
      }
      out << '\t';
      for (bool fwd : c.chain.forward) out << (fwd ? '+' : '-');
      out << '\t';
      for (std::size_t j = 0; j < c.chain.edges.size(); ++j) {
        out << (j ? "," : "") << c.chain.edges[j].pre << ':' << c.chain.edges[j].post;
      }
      out << '\n';
    }
  }
  if (!config.report_json.empty()) {
    std::ofstream out(config.report_json);
    if (!out) throw StageError("write_report", "cannot open " + config.report_json);
    out << report_to_json(config, result) << '\n';
  }
  return result;
}

PipelineResult run_pipeline_files(const PipelineConfig& config) {
  config.validate();
  if (config.input_fasta.empty()) throw ConfigError("no input FASTA given");
  const ReadStore reads = ReadStore::from_fasta(config.input_fasta);
  if (config.reference_fasta.empty()) {
    return run_pipeline(config, reads, nullptr);
  }
  const ReadStore ref_store = ReadStore::from_fasta(config.reference_fasta);
  if (ref_store.size() != 1) {
    throw ConfigError("reference FASTA must hold exactly one sequence");
  }
  const std::string reference(ref_store.bases(ref_store.entry_at(0).id));
  return run_pipeline(config, reads, &reference);
}

std::string report_to_json(const PipelineConfig& config, const PipelineResult& result) {
  nlohmann::ordered_json j;
  j["config"] = {{"k", config.k},
                 {"t", config.min_overlap},
                 {"fuzz", config.fuzz},
                 {"grid", config.grid_p},
                 {"max_msg_bytes", config.max_msg_bytes},
                 {"seed", config.seed},
                 {"max_kmer_freq", config.max_kmer_freq},
                 {"emit_singletons", config.emit_singletons}};
  j["contigs"] = {{"count", result.report.contig_count},
                  {"longest", result.report.longest_contig},
                  {"components", result.n_components},
                  {"branch_masked", result.branch_masked.size()},
                  {"containment_masked", result.containment_masked.size()},
                  {"singletons_emitted", result.singletons_emitted}};
  if (result.has_quality) {
    j["quality"] = {{"completeness", result.report.completeness},
                    {"misassembled", result.report.misassembled}};
  }
  nlohmann::ordered_json stage_bytes;
  for (const auto& [stage, bytes] : result.report.stage_bytes) stage_bytes[stage] = bytes;
  j["communication"] = {{"total_bytes", result.report.total_bytes},
                        {"total_msgs", result.report.total_msgs},
                        {"per_stage_bytes", stage_bytes}};
  nlohmann::ordered_json timings;
  for (const auto& [stage, secs] : result.report.stage_seconds) timings[stage] = secs;
  j["timings_seconds"] = timings;
  return j.dump(2);
}

}  // namespace contigforge
