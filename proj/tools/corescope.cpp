// corescope command-line interface: core decompositions, local estimators,
// synthetic generators and exposure analysis with reproducible seeds.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corescope/core.hpp"
#include "corescope/estimators.hpp"
#include "corescope/exposure.hpp"
#include "corescope/generators.hpp"
#include "corescope/graph.hpp"
#include "corescope/version.hpp"

namespace
{
    using json = nlohmann::json;
    using namespace corescope;

    std::string format_double(double x)
    {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", x);
        return buf;
    }

    std::string fnv1a_digest(const std::string &bytes)
    {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char b : bytes)
        {
            h ^= b;
            h *= 1099511628211ULL;
        }
        char buf[24];
        std::snprintf(buf, sizeof(buf), "fnv1a:%016" PRIx64, h);
        return buf;
    }

    std::string slurp(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open input file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    /// Atomic artifact write (temp file + rename) with a .meta.json sidecar.
    void write_artifact(const std::string &path, const std::string &content, const json &meta)
    {
        namespace fs = std::filesystem;
        if (path.empty() || path == "-")
        {
            std::cout << content;
            return;
        }
        const fs::path target(path);
        if (target.has_parent_path())
            fs::create_directories(target.parent_path());
        {
            const fs::path tmp = target.string() + ".tmp";
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << content;
            out.close();
            fs::rename(tmp, target);
        }
        {
            const fs::path meta_path = target.string() + ".meta.json";
            const fs::path tmp = meta_path.string() + ".tmp";
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << meta.dump(2) << '\n';
            out.close();
            fs::rename(tmp, meta_path);
        }
    }

    json base_meta(const std::string &command, std::uint64_t seed,
                   const std::string &input_digest)
    {
        json meta;
        meta["tool"] = "corescope";
        meta["version"] = corescope::version;
        meta["command"] = command;
        meta["seed"] = seed;
        meta["input_digest"] = input_digest.empty() ? json() : json(input_digest);
        return meta;
    }

    struct LoadedGraph
    {
        Graph graph;
        ParseReport report;
        std::string digest;
    };

    LoadedGraph load_graph(const std::string &path)
    {
        const std::string bytes = slurp(path);
        ParsedGraph parsed = parse_edge_list(std::string_view(bytes));
        if (parsed.report.isolated_vertices > 0)
            std::cerr << "warning: " << parsed.report.isolated_vertices
                      << " isolated vertices (core number 0)\n";
        return {std::move(parsed.graph), parsed.report, fnv1a_digest(bytes)};
    }

    std::pair<unsigned, unsigned> parse_delta_range(const std::string &text)
    {
        const auto dots = text.find("..");
        if (dots == std::string::npos)
        {
            const unsigned d = static_cast<unsigned>(std::stoul(text));
            return {d, d};
        }
        const unsigned lo = static_cast<unsigned>(std::stoul(text.substr(0, dots)));
        const unsigned hi = static_cast<unsigned>(std::stoul(text.substr(dots + 2)));
        if (hi < lo)
            throw CLI::ValidationError("--delta", "range must satisfy A <= B");
        return {lo, hi};
    }

    std::string serialize_to_string(const Graph &g)
    {
        std::ostringstream out;
        serialize_edge_list(g, out);
        return out.str();
    }

    Clustering read_clustering_csv(const std::string &path, const Graph &g)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open clustering file: " + path);
        Clustering c;
        c.cluster_of.assign(g.num_vertices(), 0);
        std::string line;
        std::getline(in, line); // header
        std::vector<vertex_t> center_of;
        std::size_t rows = 0;
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            vertex_t v, cluster, center;
            if (std::sscanf(line.c_str(), "%u,%u,%u", &v, &cluster, &center) != 3)
                throw std::runtime_error("malformed clustering row: " + line);
            if (v >= g.num_vertices())
                throw std::runtime_error("clustering vertex out of range");
            if (cluster >= center_of.size())
                center_of.resize(cluster + 1, 0);
            center_of[cluster] = center;
            c.cluster_of[v] = cluster;
            ++rows;
        }
        if (rows != g.num_vertices())
            throw std::runtime_error("clustering does not cover every vertex");
        c.clusters.assign(center_of.size(), {});
        for (vertex_t v = 0; v < g.num_vertices(); ++v)
            c.clusters[c.cluster_of[v]].push_back(v);
        c.centers = std::move(center_of);
        return c;
    }

    // ---- subcommand implementations -------------------------------------

    int run_cores(const std::string &input, const std::string &output,
                  const std::string &shells_path)
    {
        LoadedGraph in = load_graph(input);
        const CoreDecomposition decomp = core_decomposition(in.graph);
        std::ostringstream csv;
        emit_core_csv(decomp, csv);

        json meta = base_meta("cores", 0, in.digest);
        meta["degeneracy"] = decomp.degeneracy;
        meta["isolated"] = decomp.isolated_count;
        write_artifact(output, csv.str(), meta);
        std::string shells_out = shells_path;
        if (shells_out.empty() && !output.empty() && output != "-")
            shells_out = output + ".shells.json";
        if (!shells_out.empty())
            write_artifact(shells_out, shell_sizes_json(shell_distribution(decomp)) + "\n", meta);
        return 0;
    }

    int run_estimate(const std::string &input, const std::string &output,
                     const std::string &delta, const std::string &estimator, bool ratio_mode,
                     const std::string &summary_path)
    {
        LoadedGraph in = load_graph(input);
        const auto [lo, hi] = parse_delta_range(delta);
        const CoreDecomposition decomp = core_decomposition(in.graph);

        std::vector<EstimateTable> tables;
        if (estimator == "hat" || estimator == "both")
            tables.push_back(propagate_all(in.graph, hi));
        if (estimator == "breve" || estimator == "both")
            tables.push_back(induced_all(in.graph, hi));
        if (tables.empty())
            throw std::runtime_error("unknown estimator: " + estimator);

        std::ostringstream csv;
        csv << "vertex,delta,kind,estimate,core,ratio\n";
        for (const EstimateTable &table : tables)
            for (unsigned d = lo; d <= hi; ++d)
                for (vertex_t v = 0; v < table.num_vertices(); ++v)
                {
                    csv << v << ',' << d << ',' << estimator_name(table.kind) << ','
                        << table.values[d][v] << ',' << decomp.core[v] << ',';
                    if (decomp.core[v] != 0)
                        csv << format_double(static_cast<double>(table.values[d][v]) /
                                             decomp.core[v]);
                    csv << '\n';
                }

        json meta = base_meta(ratio_mode ? "ratio" : "estimate", 0, in.digest);
        meta["delta"] = {lo, hi};
        meta["estimator"] = estimator;
        write_artifact(output, csv.str(), meta);

        if (ratio_mode || !summary_path.empty())
        {
            json summary;
            summary["excluded_zero_core"] = json::array();
            summary["optimal_fraction"] = json::object();
            for (const EstimateTable &table : tables)
            {
                const RatioReport report = ratio_report(table, decomp, true);
                json fractions = json::object();
                for (unsigned d = lo; d <= hi; ++d)
                    fractions[std::to_string(d)] = report.optimal_fraction[d];
                summary["optimal_fraction"][estimator_name(table.kind)] = fractions;
                summary["excluded_zero_core"] = report.excluded_zero_core;
            }
            const std::string path = summary_path.empty() ? output + ".summary.json" : summary_path;
            write_artifact(path, summary.dump(2) + "\n", meta);
        }
        return 0;
    }

    int run_gen_er(vertex_t n, double p, std::uint64_t seed, const std::string &output)
    {
        const Graph g = gen_erdos_renyi(n, p, seed);
        json meta = base_meta("gen-er", seed, "");
        meta["n"] = n;
        meta["p"] = p;
        meta["m"] = g.num_edges();
        write_artifact(output, serialize_to_string(g), meta);
        return 0;
    }

    int run_gen_shell(const std::string &counts_text, std::uint64_t seed,
                      const std::string &output)
    {
        ShellDistribution dist;
        std::stringstream ss(counts_text);
        std::string tok;
        while (std::getline(ss, tok, ','))
            dist.counts.push_back(std::stoull(tok));
        const Graph g = gen_shell_distribution(dist, seed);
        json meta = base_meta("gen-shell", seed, "");
        meta["counts"] = dist.counts;
        meta["n"] = g.num_vertices();
        meta["m"] = g.num_edges();
        write_artifact(output, serialize_to_string(g), meta);
        return 0;
    }

    int run_gen_tree(unsigned branching, unsigned levels, bool prime, const std::string &output)
    {
        auto [g, root] = prime ? gen_tree_prime(branching, levels)
                               : gen_complete_ary_tree(branching, levels);
        json meta = base_meta("gen-tree", 0, "");
        meta["branching"] = branching;
        meta["levels"] = levels;
        meta["prime"] = prime;
        meta["root"] = root;
        write_artifact(output, serialize_to_string(g), meta);
        return 0;
    }

    int run_pmf(double mean_degree, unsigned kappa_max, unsigned d_max, double tail_tol,
                const std::string &output)
    {
        const Khat1Pmf pmf = analytic_khat1_pmf(mean_degree, kappa_max, d_max, tail_tol);
        if (pmf.tail_exceeds_tolerance)
            std::cerr << "warning: truncated tail mass " << pmf.tail_mass
                      << " exceeds tolerance " << tail_tol << "\n";
        std::ostringstream csv;
        csv << "kappa,probability\n";
        for (unsigned k = 0; k <= pmf.kappa_max; ++k)
            csv << k << ',' << format_double(pmf.probabilities[k]) << '\n';
        json meta = base_meta("pmf", 0, "");
        meta["mean_degree"] = pmf.mean_degree;
        meta["kappa_max"] = pmf.kappa_max;
        meta["d_max"] = pmf.d_max;
        meta["tail_mass"] = pmf.tail_mass;
        meta["tail_exceeds_tolerance"] = pmf.tail_exceeds_tolerance;
        write_artifact(output, csv.str(), meta);
        return 0;
    }

    int run_cluster(const std::string &input, std::uint64_t seed, bool degree_biased,
                    const std::string &output)
    {
        LoadedGraph in = load_graph(input);
        const Clustering c = three_net_clustering(in.graph, seed, degree_biased);
        std::ostringstream csv;
        emit_clustering_csv(c, csv);
        json meta = base_meta("cluster", seed, in.digest);
        meta["degree_biased"] = degree_biased;
        meta["clusters"] = c.size();
        write_artifact(output, csv.str(), meta);
        return 0;
    }

    int run_exposure(const std::string &input, const std::string &clustering_path,
                     std::uint64_t seed, double p, std::vector<unsigned> kappas,
                     std::uint64_t trials, std::uint64_t mc_seed, std::size_t max_clusters,
                     const std::string &output)
    {
        LoadedGraph in = load_graph(input);
        const Clustering c = clustering_path.empty()
                                 ? three_net_clustering(in.graph, seed, false)
                                 : read_clustering_csv(clustering_path, in.graph);
        std::sort(kappas.begin(), kappas.end());

        std::vector<std::vector<std::uint32_t>> mc_counts;
        if (trials > 0)
            mc_counts = monte_carlo_core_exposure_counts(in.graph, c, kappas, p, trials, mc_seed);

        std::size_t refused = 0;
        std::ostringstream csv;
        csv << "vertex,kappa,p,degree_prob,neighbor_degree_prob,pruned_degree_prob";
        if (trials > 0)
            csv << ",mc_core_estimate,mc_halfwidth";
        csv << '\n';
        for (vertex_t v = 0; v < in.graph.num_vertices(); ++v)
        {
            const ExposureProfile prof = exposure_profile(in.graph, c, v, p);
            for (std::size_t k = 0; k < kappas.size(); ++k)
            {
                const unsigned kappa = kappas[k];
                csv << v << ',' << kappa << ',' << format_double(p) << ','
                    << format_double(degree_exposure_prob(prof, kappa).probability) << ',';
                try
                {
                    csv << format_double(
                        neighbor_degree_exposure_prob(in.graph, c, v, kappa, p, max_clusters)
                            .probability);
                }
                catch (const std::invalid_argument &)
                {
                    ++refused; // cluster limit exceeded; leave the field empty
                }
                csv << ','
                    << format_double(
                           pruned_degree_exposure_prob(in.graph, c, v, kappa, p).probability);
                if (trials > 0)
                {
                    const double est = static_cast<double>(mc_counts[k][v]) / trials;
                    const double halfwidth = 1.96 * std::sqrt(est * (1.0 - est) / trials);
                    csv << ',' << format_double(est) << ',' << format_double(halfwidth);
                }
                csv << '\n';
            }
        }
        if (refused > 0)
            std::cerr << "warning: neighbor-degree exposure skipped for " << refused
                      << " rows (cluster limit " << max_clusters << " exceeded)\n";

        json meta = base_meta("exposure", seed, in.digest);
        meta["p"] = p;
        meta["kappa"] = kappas;
        meta["trials"] = trials;
        meta["mc_seed"] = mc_seed;
        meta["clusters"] = c.size();
        meta["clustering_file"] = clustering_path.empty() ? json() : json(clustering_path);
        write_artifact(output, csv.str(), meta);
        return 0;
    }

    int run_stats(const std::string &input, const std::string &delta, const std::string &output,
                  const std::string &format)
    {
        LoadedGraph in = load_graph(input);
        const Graph &g = in.graph;
        const auto [lo, hi] = parse_delta_range(delta);
        const CoreDecomposition decomp = core_decomposition(g);
        const DiameterInfo diam = diameter(g);

        struct DeltaStats
        {
            unsigned delta;
            double mean, mean_fraction, var_fraction;
            std::size_t max;
        };
        std::vector<DeltaStats> per_delta;
        const vertex_t n = g.num_vertices();
        for (unsigned d = std::max(1u, lo); d <= hi; ++d)
        {
            std::vector<std::size_t> sizes(n);
            parallel_for(n, [&](std::size_t vi) {
                thread_local detail::BfsScratch bfs;
                bfs.run(g, static_cast<vertex_t>(vi), d);
                sizes[vi] = bfs.order.size();
            });
            double sum = 0, sumsq = 0;
            std::size_t max_size = 0;
            for (std::size_t s : sizes)
            {
                const double frac = static_cast<double>(s) / n;
                sum += s;
                sumsq += frac * frac;
                max_size = std::max(max_size, s);
            }
            const double mean = sum / n;
            const double mean_frac = mean / n;
            per_delta.push_back(
                {d, mean, mean_frac, sumsq / n - mean_frac * mean_frac, max_size});
        }

        json meta = base_meta("stats", 0, in.digest);
        json body;
        body["n"] = g.num_vertices();
        body["m"] = g.num_edges();
        body["max_degree"] = g.max_degree();
        body["degeneracy"] = decomp.degeneracy;
        body["diameter"] = diam.diameter;
        body["components"] = diam.component_count;
        body["largest_component"] = diam.largest_component_size;
        body["isolated"] = decomp.isolated_count;
        body["shell_sizes"] = decomp.shell_sizes;
        body["neighborhood"] = json::array();
        for (const auto &s : per_delta)
            body["neighborhood"].push_back({{"delta", s.delta},
                                            {"mean", s.mean},
                                            {"max", s.max},
                                            {"mean_fraction", s.mean_fraction},
                                            {"var_fraction", s.var_fraction}});

        if (format == "json")
        {
            write_artifact(output, body.dump(2) + "\n", meta);
        }
        else
        {
            std::ostringstream csv;
            csv << "key,value\n";
            for (const char *key : {"n", "m", "max_degree", "degeneracy", "diameter",
                                    "components", "largest_component", "isolated"})
                csv << key << ',' << body[key].dump() << '\n';
            csv << "delta,mean,max,mean_fraction,var_fraction\n";
            for (const auto &s : per_delta)
                csv << s.delta << ',' << format_double(s.mean) << ',' << s.max << ','
                    << format_double(s.mean_fraction) << ',' << format_double(s.var_fraction)
                    << '\n';
            write_artifact(output, csv.str(), meta);
        }
        return 0;
    }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"corescope: k-core decomposition, local core-number estimation, synthetic "
                 "graph generation and exposure probabilities for network experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", corescope::version);

    std::string input, output, clustering_path, shells_path, summary_path;
    std::string delta = "0..4", stats_delta = "1..4";
    std::string estimator = "both", format = "json", counts_text;
    double p = 0.25, mean_degree = 0.0, tail_tol = 1e-9;
    std::uint64_t seed = 0, trials = 0, mc_seed = 0;
    vertex_t n = 0;
    unsigned branching = 2, levels = 3, kappa_max = 10, d_max = 0;
    bool degree_biased = false, prime = false;
    std::vector<unsigned> kappas;
    std::size_t max_clusters = 24;

    auto *cores = app.add_subcommand("cores", "exact core numbers and shell distribution");
    cores->add_option("--input", input)->required();
    cores->add_option("--output", output);
    cores->add_option("--shells", shells_path);

    auto *estimate = app.add_subcommand("estimate", "khat/kbreve estimates over a delta range");
    estimate->add_option("--input", input)->required();
    estimate->add_option("--output", output);
    estimate->add_option("--delta", delta);
    estimate->add_option("--estimator", estimator)->check(CLI::IsMember({"hat", "breve", "both"}));

    auto *ratio = app.add_subcommand("ratio", "estimates joined with exact cores plus summary");
    ratio->add_option("--input", input)->required();
    ratio->add_option("--output", output);
    ratio->add_option("--delta", delta);
    ratio->add_option("--estimator", estimator)->check(CLI::IsMember({"hat", "breve", "both"}));
    ratio->add_option("--summary", summary_path);

    auto *gen_er = app.add_subcommand("gen-er", "Erdos-Renyi G(n,p) graph");
    gen_er->add_option("--n", n)->required();
    gen_er->add_option("--p", p)->required();
    gen_er->add_option("--seed", seed);
    gen_er->add_option("--output", output);

    auto *gen_shell = app.add_subcommand("gen-shell", "graph matching a shell distribution");
    gen_shell->add_option("counts", counts_text, "comma-separated c_1,...,c_D")->required();
    gen_shell->add_option("--seed", seed);
    gen_shell->add_option("--output", output);

    auto *gen_tree = app.add_subcommand("gen-tree", "complete j-ary tree T or T' (root id 0)");
    gen_tree->add_option("--branching,-j", branching);
    gen_tree->add_option("--levels,-l", levels);
    gen_tree->add_flag("--prime", prime, "attach j extra vertices to all leaves");
    gen_tree->add_option("--output", output);

    auto *pmf = app.add_subcommand("pmf", "analytic distribution of khat_1 on G(n,p)");
    pmf->add_option("--mean-degree", mean_degree)->required();
    pmf->add_option("--kappa-max", kappa_max);
    pmf->add_option("--d-max", d_max);
    pmf->add_option("--tail-tol", tail_tol);
    pmf->add_option("--output", output);

    auto *cluster = app.add_subcommand("cluster", "3-net clustering (radius-2 balls)");
    cluster->add_option("--input", input)->required();
    cluster->add_option("--seed", seed);
    cluster->add_flag("--degree-biased", degree_biased);
    cluster->add_option("--output", output);

    auto *exposure = app.add_subcommand("exposure", "exposure probabilities under a clustering");
    exposure->add_option("--input", input)->required();
    exposure->add_option("--clustering", clustering_path, "clustering CSV (default: 3-net from --seed)");
    exposure->add_option("--seed", seed);
    exposure->add_option("--p", p)->required();
    exposure->add_option("--kappa", kappas)->required();
    exposure->add_option("--trials", trials, "Monte Carlo core-exposure trials (0 = off)");
    exposure->add_option("--mc-seed", mc_seed);
    exposure->add_option("--max-clusters", max_clusters);
    exposure->add_option("--output", output);

    auto *stats = app.add_subcommand("stats", "graph summary and neighborhood-size statistics");
    stats->add_option("--input", input)->required();
    stats->add_option("--delta", stats_delta);
    stats->add_option("--output", output);
    stats->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (cores->parsed())
            return run_cores(input, output, shells_path);
        if (estimate->parsed())
            return run_estimate(input, output, delta, estimator, false, summary_path);
        if (ratio->parsed())
            return run_estimate(input, output, delta, estimator, true, summary_path);
        if (gen_er->parsed())
            return run_gen_er(n, p, seed, output);
        if (gen_shell->parsed())
            return run_gen_shell(counts_text, seed, output);
        if (gen_tree->parsed())
            return run_gen_tree(branching, levels, prime, output);
        if (pmf->parsed())
            return run_pmf(mean_degree, kappa_max, d_max, tail_tol, output);
        if (cluster->parsed())
            return run_cluster(input, seed, degree_biased, output);
        if (exposure->parsed())
            return run_exposure(input, clustering_path, seed, p, kappas, trials, mc_seed,
                                max_clusters, output);
        if (stats->parsed())
            return run_stats(input, stats_delta, output, format);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
