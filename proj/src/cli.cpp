#include "ghom/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "ghom/config.hpp"
#include "ghom/convolution.hpp"
#include "ghom/dynamics.hpp"
#include "ghom/effective.hpp"
#include "ghom/errors.hpp"
#include "ghom/field.hpp"
#include "ghom/geometry.hpp"
#include "ghom/grid.hpp"
#include "ghom/hj_solver.hpp"
#include "ghom/metric.hpp"
#include "ghom/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ghom {

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw ConfigError("cannot write '" + path + "'");
    if (!content.empty() && std::fwrite(content.data(), 1, content.size(), f) != content.size()) {
        std::fclose(f);
        throw ConfigError("short write to '" + path + "'");
    }
    std::fclose(f);
}

bool plain_number(const std::string& tok) {
    return !tok.empty() && tok != "inf" && tok != "-inf" && tok != "nan";
}

/// Rows of pre-formatted numeric tokens, rendered as CSV (header mandatory)
/// or as a JSON row table, per output.format.
struct RowTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

    std::string to_csv() const {
        std::string out;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ',';
            out += columns[c];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ',';
                out += row[c];
            }
            out += '\n';
        }
        return out;
    }

    std::string to_json(const std::string& command) const {
        std::string out = "{\n  \"schema_version\": 1,\n  \"command\": \"" + command +
                          "\",\n  \"columns\": [";
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ", ";
            out += '"' + columns[c] + '"';
        }
        out += "],\n  \"rows\": [";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            out += r ? ",\n    [" : "\n    [";
            for (std::size_t c = 0; c < rows[r].size(); ++c) {
                if (c) out += ", ";
                if (plain_number(rows[r][c]))
                    out += rows[r][c];
                else
                    out += '"' + rows[r][c] + '"';
            }
            out += ']';
        }
        out += rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
        return out;
    }
};

/// Flat JSON report writer with fixed field order.
class JsonReport {
  public:
    explicit JsonReport(const std::string& command) {
        buf_ = "{\n  \"schema_version\": 1,\n  \"command\": \"" + command + '"';
    }

    void field(const std::string& key, const std::string& quoted_value) {
        buf_ += ",\n  \"" + key + "\": \"" + quoted_value + '"';
    }
    void number(const std::string& key, double v) {
        const std::string tok = format_double(v);
        buf_ += ",\n  \"" + key + "\": ";
        buf_ += plain_number(tok) ? tok : '"' + tok + '"';
    }
    void integer(const std::string& key, std::int64_t v) {
        buf_ += ",\n  \"" + key + "\": " + format_int(v);
    }
    void boolean(const std::string& key, bool v) {
        buf_ += ",\n  \"" + key + "\": ";
        buf_ += v ? "true" : "false";
    }
    void numbers(const std::string& key, const std::vector<double>& vs) {
        buf_ += ",\n  \"" + key + "\": [";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) buf_ += ", ";
            const std::string tok = format_double(vs[i]);
            buf_ += plain_number(tok) ? tok : '"' + tok + '"';
        }
        buf_ += ']';
    }
    void integers(const std::string& key, const std::vector<std::int64_t>& vs) {
        buf_ += ",\n  \"" + key + "\": [";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) buf_ += ", ";
            buf_ += format_int(vs[i]);
        }
        buf_ += ']';
    }

    std::string str() const { return buf_ + "\n}\n"; }

  private:
    std::string buf_;
};

struct CliRun {
    RunConfig cfg;
    std::string command;
    std::string dir;
    bool strict = false;
    Exec mode = Exec::Parallel;

    std::string table_path(const std::string& stem) const {
        return dir + "/" + stem + (cfg.get_string("output.format") == "json" ? ".json" : ".csv");
    }
    void write_table(const std::string& stem, const RowTable& table) const {
        const bool json = cfg.get_string("output.format") == "json";
        write_file(table_path(stem), json ? table.to_json(command) : table.to_csv());
    }
    void write_report(const std::string& stem, const JsonReport& report) const {
        write_file(dir + "/" + stem + ".json", report.str());
    }
};

std::vector<std::string> coord_columns(const char* prefix, int dim) {
    std::vector<std::string> cols;
    for (int a = 0; a < dim; ++a) cols.push_back(std::string(prefix) + format_int(a));
    return cols;
}

EffectiveOptions effective_options(const RunConfig& cfg) {
    EffectiveOptions opts;
    opts.tol = cfg.get_double("effective.tol");
    opts.k_max = static_cast<int>(cfg.get_int("effective.k_max"));
    opts.stencil_radius = static_cast<int>(cfg.get_int("metric.stencil_radius"));
    opts.audit_pde = cfg.get_bool("effective.audit");
    opts.cfl = cfg.get_double("solver.cfl");
    return opts;
}

EdgeWeighting edge_weighting(const RunConfig& cfg) {
    EdgeWeighting w;
    w.level = cfg.get_double("metric.level");
    w.tilt = cfg.get_vec("metric.tilt");
    w.truncation = static_cast<int>(cfg.get_int("metric.truncation"));
    w.stencil_radius = static_cast<int>(cfg.get_int("metric.stencil_radius"));
    return w;
}

InitialData make_initial(const RunConfig& cfg) {
    const int dim = cfg.dimension();
    const std::string kind = cfg.get_string("solver.initial");
    const std::vector<Vec> centers = cfg.get_vec_list("solver.centers");
    if (kind == "cone") return InitialData::cone(dim, centers.front());
    if (kind == "smooth") return InitialData::smooth(dim);
    return InitialData::plateau(dim, centers, cfg.get_double("solver.cap"));
}

void run_check_assumptions(const CliRun& run) {
    const VectorFieldSpec field = run.cfg.make_field();
    const TorusGrid grid = run.cfg.make_grid();
    const double chi = run.cfg.get_double("assumptions.chi");
    const AssumptionReport report = check_assumptions(field, chi, grid);

    JsonReport json(run.command);
    json.field("field", field.kind_name());
    json.integer("dimension", grid.dim());
    json.integer("resolution", grid.res(0));
    json.number("chi", chi);
    json.number("divergence_norm", report.divergence_norm);
    json.number("threshold", report.threshold);
    json.number("lipschitz_bound", report.lipschitz_bound);
    json.number("sup_norm", report.sup_norm);
    json.boolean("passes_A2", report.passes_A2);
    json.boolean("coercive_everywhere", report.coercive_everywhere);
    run.write_report("check-assumptions", json);

    if (run.strict && !report.passes_A2)
        throw AssumptionError("divergence norm " + format_double(report.divergence_norm) +
                              " exceeds 1/chi = " + format_double(report.threshold));
}

void run_sigma(const CliRun& run) {
    const VectorFieldSpec field = run.cfg.make_field();
    const TorusGrid grid = run.cfg.make_grid();
    const int dim = grid.dim();

    RowTable table;
    table.columns = coord_columns("q", dim);
    const std::vector<std::string> xs = coord_columns("x", dim);
    table.columns.insert(table.columns.end(), xs.begin(), xs.end());
    table.columns.push_back("finite");
    table.columns.push_back("value");

    for (const Vec& q : run.cfg.get_vec_list("sigma.q")) {
        for (std::int64_t cell = 0; cell < grid.cells(); ++cell) {
            const Vec x = grid.center(cell);
            const SupportValue s = support_sigma(field, x, q);
            std::vector<std::string> row;
            for (int a = 0; a < dim; ++a) row.push_back(format_double(q[a]));
            for (int a = 0; a < dim; ++a) row.push_back(format_double(x[a]));
            row.push_back(s.value == kInf ? "0" : "1");
            row.push_back(format_double(s.value));
            table.add(std::move(row));
        }
    }
    run.write_table("sigma", table);
}

void run_distance(const CliRun& run) {
    const VectorFieldSpec field = run.cfg.make_field();
    const TorusGrid grid = run.cfg.make_grid();
    const std::int64_t source = run.cfg.get_int("metric.source");
    if (source >= grid.cells())
        throw ConfigError("config: metric.source " + format_int(source) +
                          " outside the grid (" + format_int(grid.cells()) + " cells)");

    const WeightTable weights = build_weights(field, grid, edge_weighting(run.cfg), run.mode);
    const GridFunction dist = weights.has_negative
                                  ? bellman_ford_distances(weights, source, run.mode)
                                  : shortest_path_field(weights, source);

    RowTable table;
    table.columns = coord_columns("i", grid.dim());
    const std::vector<std::string> xs = coord_columns("x", grid.dim());
    table.columns.insert(table.columns.end(), xs.begin(), xs.end());
    table.columns.push_back("distance");
    for (std::int64_t cell = 0; cell < grid.cells(); ++cell) {
        const IVec c = grid.coord(cell);
        const Vec x = grid.center(cell);
        std::vector<std::string> row;
        for (int a = 0; a < grid.dim(); ++a) row.push_back(format_int(c[a]));
        for (int a = 0; a < grid.dim(); ++a) row.push_back(format_double(x[a]));
        row.push_back(format_double(dist[cell]));
        table.add(std::move(row));
    }
    run.write_table("distance", table);
}

void run_cycle(const CliRun& run) {
    const VectorFieldSpec field = run.cfg.make_field();
    const TorusGrid grid = run.cfg.make_grid();
    const WeightTable weights = build_weights(field, grid, edge_weighting(run.cfg), run.mode);
    const auto cert = bellman_ford_negative_cycle(weights, run.mode);

    JsonReport json(run.command);
    json.field("field", field.kind_name());
    json.number("level", weights.weighting.level);
    json.integer("truncation", weights.weighting.truncation);
    json.boolean("found", cert.has_value());
    if (cert) {
        json.number("total_weight", cert->total_weight);
        json.integer("length", static_cast<std::int64_t>(cert->cells.size()));
        std::vector<std::int64_t> winding(cert->winding.begin(),
                                          cert->winding.begin() + grid.dim());
        json.integers("winding", winding);
        json.integers("cells", cert->cells);
    }
    run.write_report("cycle", json);
}

void run_invariant_sets(const CliRun& run) {
    const VectorFieldSpec field = run.cfg.make_field();
    const TorusGrid grid = run.cfg.make_grid();
    const double eta = run.cfg.get_double("metric.eta");

    JsonReport json(run.command);
    json.field("field", field.kind_name());
    json.integer("resolution", grid.res(0));
    json.number("eta", eta);

    bool any_proper = false;
    for (const GraphSide side : {GraphSide::Inner, GraphSide::Outer}) {
        const char* name = side == GraphSide::Inner ? "inner" : "outer";
        const ReachabilityGraph graph =
            build_reachability_graph(field, grid, eta, side, 2, run.mode);
        const InvariantSetReport report = detect_invariant_sets(graph);
        any_proper = any_proper || report.proper_invariant_found;

        const std::string p = name + std::string("_");
        json.integer(p + "components", report.component_count);
        json.integer(p + "weak_components", report.weak_component_count);
        json.boolean(p + "proper_invariant_found", report.proper_invariant_found);
        json.integer(p + "trapped_component", report.trapped_component);
        if (report.trapped_component >= 0) {
            const auto tc = static_cast<std::size_t>(report.trapped_component);
            json.number(p + "trapped_volume", report.volumes[tc]);
            json.integer(p + "trapped_boundary_cells",
                         static_cast<std::int64_t>(report.boundary_cells[tc].size()));
            const BoundaryNormalStats stats = boundary_normal_check(report, field);
            json.number(p + "fraction_inflow", stats.fraction_inflow);
            json.number(p + "fraction_speed", stats.fraction_speed);
            json.integer(p + "skipped_boundary_cells", stats.skipped_cells);
        }
    }
    json.boolean("proper_invariant_found", any_proper);
    run.write_report("invariant-sets", json);
}

void run_effective(const CliRun& run) {
    const VectorFieldSpec field = run.cfg.make_field();
    const TorusGrid grid = run.cfg.make_grid();
    const EffectiveOptions opts = effective_options(run.cfg);

    RowTable table;
    table.columns = coord_columns("p", grid.dim());
    for (const char* c : {"lower", "upper", "limit", "k_last", "stabilized", "route_gap"})
        table.columns.push_back(c);

    for (const Vec& P : run.cfg.get_vec_list("effective.P")) {
        const EffectiveResult r = effective_hamiltonian(field, P, grid, opts, run.mode);
        std::vector<std::string> row;
        for (int a = 0; a < grid.dim(); ++a) row.push_back(format_double(P[a]));
        row.push_back(format_double(r.lower));
        row.push_back(format_double(r.upper));
        row.push_back(format_double(r.limit));
        row.push_back(format_int(r.sequence.empty() ? 0 : r.sequence.back().k));
        row.push_back(r.stabilized ? "1" : "0");
        row.push_back(format_double(r.route_gap));
        table.add(std::move(row));
    }
    run.write_table("effective", table);
}

void run_wulff(const CliRun& run) {
    const VectorFieldSpec field = run.cfg.make_field();
    const TorusGrid grid = run.cfg.make_grid();
    const int directions = static_cast<int>(run.cfg.get_int("effective.directions"));
    const WulffSet w = wulff_set(field, grid, directions, effective_options(run.cfg), run.mode);

    RowTable table;
    table.columns = coord_columns("u", grid.dim());
    table.columns.push_back("value");
    for (std::size_t j = 0; j < w.directions.size(); ++j) {
        std::vector<std::string> row;
        for (int a = 0; a < grid.dim(); ++a) row.push_back(format_double(w.directions[j][a]));
        row.push_back(format_double(w.values[j]));
        table.add(std::move(row));
    }
    run.write_table("wulff", table);
}

void run_corrector(const CliRun& run) {
    const VectorFieldSpec field = run.cfg.make_field();
    const TorusGrid grid = run.cfg.make_grid();
    const int k = static_cast<int>(run.cfg.get_int("metric.truncation"));
    if (k < 1) throw ConfigError("config: corrector requires metric.truncation >= 1");
    const int radius = static_cast<int>(run.cfg.get_int("metric.stencil_radius"));
    const Vec P = run.cfg.get_vec_list("effective.P").front();

    const KRouteResult level =
        effective_k_cycles(field, P, k, grid, run.cfg.get_double("effective.tol"), radius,
                           run.mode);
    const GridFunction w = corrector_field(field, grid, P, k, level.value, radius, run.mode);

    JsonReport json(run.command);
    json.field("field", field.kind_name());
    std::vector<double> tilt(P.begin(), P.begin() + grid.dim());
    json.numbers("P", tilt);
    json.integer("k", k);
    json.number("level", level.value);
    json.boolean("clipped_at_lower", level.clipped_at_lower);
    json.boolean("inflated_upper", level.inflated_upper);
    json.number("min", w.min());
    json.number("max", w.max());
    run.write_report("corrector", json);

    RowTable table;
    table.columns = coord_columns("i", grid.dim());
    table.columns.push_back("value");
    for (std::int64_t cell = 0; cell < grid.cells(); ++cell) {
        const IVec c = grid.coord(cell);
        std::vector<std::string> row;
        for (int a = 0; a < grid.dim(); ++a) row.push_back(format_int(c[a]));
        row.push_back(format_double(w[cell]));
        table.add(std::move(row));
    }
    run.write_table("corrector", table);
}

void write_snapshot(const CliRun& run, const std::string& stem, const OscillatorySolution& sol,
                    std::size_t ti) {
    RowTable table;
    table.columns = coord_columns("i", sol.dim);
    table.columns.push_back("value");
    std::vector<std::int64_t> c(static_cast<std::size_t>(sol.dim), 0);
    for (std::size_t idx = 0; idx < sol.snapshots[ti].size(); ++idx) {
        std::vector<std::string> row;
        for (int a = 0; a < sol.dim; ++a) row.push_back(format_int(c[static_cast<std::size_t>(a)]));
        row.push_back(format_double(sol.snapshots[ti][idx]));
        table.add(std::move(row));
        for (int a = sol.dim - 1; a >= 0; --a) {
            auto& v = c[static_cast<std::size_t>(a)];
            if (++v < sol.side) break;
            v = 0;
        }
    }
    run.write_table(stem, table);
}

void run_homogenize(const CliRun& run) {
    const VectorFieldSpec field = run.cfg.make_field();
    const TorusGrid grid = run.cfg.make_grid();
    const InitialData u0 = make_initial(run.cfg);
    const int directions = static_cast<int>(run.cfg.get_int("effective.directions"));
    const double T = run.cfg.get_double("solver.T");
    const double cfl = run.cfg.get_double("solver.cfl");
    const std::int64_t resolution = run.cfg.get_int("solver.resolution");
    const std::vector<double> eps_list = run.cfg.get_list("solver.epsilon");

    const WulffSet w = wulff_set(field, grid, directions, effective_options(run.cfg), run.mode);
    const HomogenizationTable table =
        homogenization_experiment(field, u0, eps_list, T, resolution, w, cfl, run.mode);

    RowTable rows;
    rows.columns = {"epsilon", "time", "error", "ratio"};
    for (const HomogenizationRow& row : table.rows)
        for (std::size_t ti = 0; ti < table.times.size(); ++ti)
            rows.add({format_double(row.epsilon), format_double(table.times[ti]),
                      format_double(row.time_errors[ti]), format_double(row.ratio)});
    run.write_table("homogenize", rows);

    if (run.cfg.get_bool("output.snapshots")) {
        SolverConfig config;
        config.T = T;
        config.cfl = cfl;
        config.resolution = resolution;
        for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
            config.epsilon = eps_list[ei];
            const OscillatorySolution sol =
                solve_oscillatory(field, u0, config, table.times, run.mode);
            for (std::size_t ti = 0; ti < table.times.size(); ++ti)
                write_snapshot(run, "snapshot_eps" + format_int(static_cast<std::int64_t>(ei)) +
                                        "_t" + format_int(static_cast<std::int64_t>(ti)),
                               sol, ti);
        }
    }
}

void run_evolve(const CliRun& run) {
    const VectorFieldSpec field = run.cfg.make_field();
    const InitialData u0 = make_initial(run.cfg);

    SolverConfig config;
    config.T = run.cfg.get_double("solver.T");
    config.cfl = run.cfg.get_double("solver.cfl");
    config.resolution = run.cfg.get_int("solver.resolution");
    config.domain_size = static_cast<int>(run.cfg.get_int("solver.domain"));
    config.epsilon = run.cfg.get_list("solver.epsilon").front();

    std::vector<double> times = run.cfg.get_list("solver.times");
    if (times.empty()) times.push_back(config.T);

    const OscillatorySolution sol = solve_oscillatory(field, u0, config, times, run.mode);

    RowTable table;
    table.columns.push_back("time");
    const std::vector<std::string> is = coord_columns("i", sol.dim);
    table.columns.insert(table.columns.end(), is.begin(), is.end());
    table.columns.push_back("value");
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        std::vector<std::int64_t> c(static_cast<std::size_t>(sol.dim), 0);
        for (std::size_t idx = 0; idx < sol.snapshots[ti].size(); ++idx) {
            std::vector<std::string> row;
            row.push_back(format_double(times[ti]));
            for (int a = 0; a < sol.dim; ++a)
                row.push_back(format_int(c[static_cast<std::size_t>(a)]));
            row.push_back(format_double(sol.snapshots[ti][idx]));
            table.add(std::move(row));
            for (int a = sol.dim - 1; a >= 0; --a) {
                auto& v = c[static_cast<std::size_t>(a)];
                if (++v < sol.side) break;
                v = 0;
            }
        }
    }
    run.write_table("evolve", table);
}

const char* kUsage =
    "usage: ghom <command> [options]\n"
    "\n"
    "commands\n"
    "  check-assumptions  divergence norm, Lipschitz/sup constants, A2 verdict (JSON)\n"
    "  sigma              support function of the control set at every cell\n"
    "  distance           single-source metric distances for level/tilt/truncation\n"
    "  cycle              negative-cycle certificate for the tilted metric graph\n"
    "  invariant-sets     reachability components on inner and outer graphs (JSON)\n"
    "  effective          effective Hamiltonian values for each momentum in effective.P\n"
    "  wulff              support values of the effective unit ball over a direction fan\n"
    "  corrector          truncated corrector field at the first momentum\n"
    "  homogenize         oscillatory-vs-homogenized error table over solver.epsilon\n"
    "  evolve             time snapshots of the oscillatory solve\n"
    "\n"
    "options\n"
    "  --config FILE   load key=value configuration (may repeat; later files win)\n"
    "  --set KEY=VAL   override one key (may repeat)\n"
    "  --out DIR       shorthand for --set output.directory=DIR\n"
    "  --strict        exit 4 when an assumption check fails\n"
    "  --help          this text (with the key reference)\n"
    "\n"
    "Every run writes <output.directory>/manifest.txt with the fully resolved\n"
    "configuration; rerunning the same command from that manifest reproduces\n"
    "the outputs byte for byte.  GHOM_THREADS=1 forces serial execution; any\n"
    "larger value sets the OpenMP thread count.\n"
    "\n"
    "exit codes: 0 success, 2 configuration error, 3 numerical failure,\n"
    "            4 assumption-check failure under --strict\n";

void print_keys() {
    std::fputs("\nconfiguration keys (canonical defaults in manifest.txt):\n", stdout);
    for (const std::string& key : RunConfig::schema_keys())
        std::fprintf(stdout, "  %s\n", key.c_str());
}

Exec exec_from_env() {
    const char* raw = std::getenv("GHOM_THREADS");
    if (!raw || !*raw) return Exec::Parallel;
    char* end = nullptr;
    const long n = std::strtol(raw, &end, 10);
    if (!end || *end || n < 0) throw ConfigError("GHOM_THREADS must be a nonnegative integer");
    if (n == 1) return Exec::Serial;
#ifdef _OPENMP
    if (n > 1) omp_set_num_threads(static_cast<int>(n));
#endif
    return Exec::Parallel;
}

int dispatch(int argc, const char* const* argv) {
    if (argc < 2 || std::string(argv[1]) == "--help" || std::string(argv[1]) == "-h") {
        std::fputs(kUsage, stdout);
        print_keys();
        return argc < 2 ? 2 : 0;
    }

    const std::string command = argv[1];
    const bool known =
        command == "check-assumptions" || command == "sigma" || command == "distance" ||
        command == "cycle" || command == "invariant-sets" || command == "effective" ||
        command == "wulff" || command == "corrector" || command == "homogenize" ||
        command == "evolve";
    if (!known) throw ConfigError("unknown command '" + command + "' (see --help)");

    CliRun run;
    run.command = command;
    run.mode = exec_from_env();

    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        auto value = [&](const char* flag) -> std::string {
            if (i + 1 >= argc) throw ConfigError(std::string(flag) + " needs an argument");
            return argv[++i];
        };
        if (arg == "--config") {
            run.cfg.load_file(value("--config"));
        } else if (arg == "--set") {
            const std::string kv = value("--set");
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE");
            run.cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        } else if (arg == "--out") {
            run.cfg.set("output.directory", value("--out"));
        } else if (arg == "--strict") {
            run.strict = true;
        } else if (arg == "--help" || arg == "-h") {
            std::fputs(kUsage, stdout);
            print_keys();
            return 0;
        } else {
            throw ConfigError("unknown option '" + arg + "' (see --help)");
        }
    }

    run.cfg.resolve();
    run.dir = run.cfg.get_string("output.directory");
    std::filesystem::create_directories(run.dir);
    write_file(run.dir + "/manifest.txt", run.cfg.serialize(command));

    if (command == "check-assumptions") run_check_assumptions(run);
    else if (command == "sigma") run_sigma(run);
    else if (command == "distance") run_distance(run);
    else if (command == "cycle") run_cycle(run);
    else if (command == "invariant-sets") run_invariant_sets(run);
    else if (command == "effective") run_effective(run);
    else if (command == "wulff") run_wulff(run);
    else if (command == "corrector") run_corrector(run);
    else if (command == "homogenize") run_homogenize(run);
    else run_evolve(run);
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "ghom: %s\n", e.what());
        return 2;
    } catch (const AssumptionError& e) {
        std::fprintf(stderr, "ghom: assumption check failed: %s\n", e.what());
        return 4;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "ghom: numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "ghom: %s\n", e.what());
        return 3;
    }
}

}  // namespace ghom
