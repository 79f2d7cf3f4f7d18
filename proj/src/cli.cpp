#include "frp/cli.hpp"

#include "frp/error.hpp"
#include "frp/fiberclass.hpp"
#include "frp/fuzzysim.hpp"
#include "frp/laminate.hpp"
#include "frp/laminate_io.hpp"
#include "frp/matdb.hpp"
#include "frp/service.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <csignal>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

namespace frp::cli {

namespace {

struct GlobalOptions {
    std::string db_path;
    std::string format = "csv";
    bool normalize = false;
    std::optional<double> tau_c;

    bool json() const { return format == "json"; }
    fuzzysim::RankOptions rank() const { return {normalize}; }
};

matdb::MaterialDb require_db(const GlobalOptions& g) {
    if (g.db_path.empty()) throw ValidationError("missing_db", "this command needs --db <path>");
    return matdb::load_db(g.db_path);
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'", path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("malformed_json", "'" + path + "' is not valid JSON: " + e.what(), path);
    }
}

matdb::RequirementVector read_requirement(const std::string& path, matdb::RecordSchema expected) {
    auto req = matdb::requirement_from_json(read_json_file(path));
    if (req.schema != expected) {
        throw ValidationError("invalid_requirement",
                              "'" + path + "' must use the " +
                                  std::string(matdb::schema_name(expected)) + " schema",
                              "schema");
    }
    return req;
}

void print_ranking(std::ostream& out, const GlobalOptions& g,
                   const std::vector<fuzzysim::SimilarityResult>& ranking, std::optional<std::size_t> top,
                   nlohmann::ordered_json extra = nlohmann::ordered_json::object()) {
    const std::size_t n = top ? std::min(*top, ranking.size()) : ranking.size();
    if (g.json()) {
        nlohmann::ordered_json results = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < n; ++i) {
            results.push_back({{"rank", ranking[i].rank},
                               {"name", ranking[i].record_name},
                               {"strength", ranking[i].strength}});
        }
        extra["results"] = results;
        out << extra.dump(2) << '\n';
        return;
    }
    if (n == 0) return;
    out << "rank,name,strength\n";
    for (std::size_t i = 0; i < n; ++i)
        fmt::print(out, "{},{},{:.6f}\n", ranking[i].rank, ranking[i].record_name, ranking[i].strength);
}

// Writes `text` to `path`, or to `out` when path is empty.
void emit(std::ostream& out, const std::string& path, const std::string& text) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write '" + path + "'", path);
    file << text;
    if (!file) throw IoError("error writing '" + path + "'", path);
}

// ----------------------------------------------------------------------------

int cmd_ingest(const GlobalOptions& g, const std::string& polymers_path, const std::string& fibers_path,
               std::ostream& out, std::ostream& err) {
    if (g.db_path.empty()) throw ValidationError("missing_db", "ingest needs --db <output path>");
    auto polymers = matdb::ingest_polymers_file(polymers_path);
    auto fibers = matdb::ingest_fibers_file(fibers_path);

    fmt::print(out, "polymers: {} rows, {} ingested, {} rejected ({})\n", polymers.input_rows,
               polymers.records.size(), polymers.rejected.size(), polymers_path);
    fmt::print(out, "fibers: {} rows, {} ingested, {} rejected ({})\n", fibers.input_rows,
               fibers.records.size(), fibers.rejected.size(), fibers_path);
    if (!polymers.clean() || !fibers.clean()) {
        for (const auto& r : polymers.rejected) fmt::print(err, "{}: {}\n", polymers_path, r.message);
        for (const auto& r : fibers.rejected) fmt::print(err, "{}: {}\n", fibers_path, r.message);
        fmt::print(err, "database not written\n");
        return kExitValidation;
    }
    const std::vector<matdb::ManifestEntry> manifest{{polymers_path, polymers.input_rows},
                                                     {fibers_path, fibers.input_rows}};
    const auto db = matdb::make_db(std::move(polymers.records), std::move(fibers.records), manifest);
    matdb::save_db(db, g.db_path);
    fmt::print(out, "wrote {} ({} polymers, {} fibers)\n", g.db_path, db.polymers.size(),
               db.fibers.size());
    return kExitOk;
}

int cmd_select_matrix(const GlobalOptions& g, const std::string& req_path,
                      std::optional<std::size_t> top, std::ostream& out) {
    const auto db = require_db(g);
    const auto req = read_requirement(req_path, matdb::RecordSchema::Polymer);
    const auto ranking = fuzzysim::rank_by_similarity(
        req, std::span<const matdb::PolymerRecord>(db.polymers), g.rank());
    print_ranking(out, g, ranking, top);
    return kExitOk;
}

int cmd_select_fiber(const GlobalOptions& g, const std::string& req_path, const std::string& matrix_name,
                     std::optional<std::size_t> top, std::ostream& out) {
    const auto db = require_db(g);
    const auto req = read_requirement(req_path, matdb::RecordSchema::Fiber);
    double tau_c = 0.0;
    if (g.tau_c) {
        tau_c = *g.tau_c;
    } else {
        if (matrix_name.empty())
            throw ValidationError("invalid_input", "select-fiber needs --matrix or --tau-c", "matrix");
        const auto* matrix = db.find_polymer(matrix_name);
        if (!matrix)
            throw ValidationError("unknown_matrix", "no polymer named '" + matrix_name + "'", matrix_name);
        tau_c = matrix->shear_strength();
    }
    const auto sel = fiberclass::select_fiber(req, std::span<const matdb::FiberRecord>(db.fibers), tau_c,
                                              g.rank());
    if (g.json()) {
        print_ranking(out, g, sel.ranking, top,
                      {{"class", fiberclass::to_string(sel.fiber_class)},
                       {"tau_c", sel.tau_c},
                       {"requirement_critical_length", sel.requirement_critical_length}});
    } else {
        fmt::print(out, "class={} l_c={:.6g} tau_c={:.6g}\n", fiberclass::to_string(sel.fiber_class),
                   sel.requirement_critical_length, sel.tau_c);
        print_ranking(out, g, sel.ranking, top);
    }
    return kExitOk;
}

struct FiberArgs {
    std::string name;
    std::optional<double> sigma;
    std::optional<double> diameter;
    std::optional<double> length;
    std::string matrix;
};

int cmd_classify_fiber(const GlobalOptions& g, const FiberArgs& a, std::ostream& out) {
    double sigma = 0.0;
    double d = 0.0;
    double l = 0.0;
    std::optional<matdb::MaterialDb> db;
    if (!a.name.empty() || (!a.matrix.empty() && !g.tau_c)) db = require_db(g);

    if (!a.name.empty()) {
        const auto* f = db->find_fiber(a.name);
        if (!f) throw ValidationError("unknown_fiber", "no fiber named '" + a.name + "'", a.name);
        sigma = f->tensile_strength;
        d = f->diameter;
        l = f->length;
    } else {
        if (!a.sigma || !a.diameter || !a.length)
            throw ValidationError("invalid_input",
                                  "give --fiber NAME or all of --sigma, --diameter, --length");
        sigma = *a.sigma;
        d = *a.diameter;
        l = *a.length;
    }

    double tau_c = 0.0;
    if (g.tau_c) {
        tau_c = *g.tau_c;
    } else if (!a.matrix.empty()) {
        const auto* m = db->find_polymer(a.matrix);
        if (!m) throw ValidationError("unknown_matrix", "no polymer named '" + a.matrix + "'", a.matrix);
        tau_c = m->shear_strength();
    } else {
        throw ValidationError("invalid_input", "classify-fiber needs --tau-c or --matrix", "tau_c");
    }

    const double lc = fiberclass::critical_length({sigma, d, tau_c});
    const auto cls = fiberclass::classify(l, lc);
    if (g.json()) {
        nlohmann::ordered_json j{{"l_c", lc}, {"class", fiberclass::to_string(cls)}};
        out << j.dump(2) << '\n';
    } else {
        fmt::print(out, "l_c={:.6g} class={}\n", lc, fiberclass::to_string(cls));
    }
    return kExitOk;
}

int cmd_analyze(const GlobalOptions& g, const std::string& spec_path, const std::string& out_path,
                std::ostream& out) {
    const auto spec = laminate::load_spec(spec_path);
    const auto report = laminate::analyze(spec);
    std::ostringstream text;
    if (g.json())
        text << laminate::to_json(report).dump(2) << '\n';
    else
        laminate::write_report_csv(text, report);
    emit(out, out_path, text.str());
    if (!out_path.empty())
        fmt::print(out, "mean_clme={:.6g} mean_ctme={:.6g}\n", report.mean_clme, report.mean_ctme);
    return kExitOk;
}

int cmd_sweep(const GlobalOptions& g, const std::string& spec_path, const std::string& range,
              const std::string& out_path, std::ostream& out) {
    const auto thetas = laminate::parse_theta_range(range);
    const auto spec = laminate::load_spec(spec_path);
    const auto rows = laminate::sweep_orientations(spec, thetas);
    std::ostringstream text;
    if (g.json())
        text << laminate::to_json(std::span<const laminate::SweepRow>(rows)).dump(2) << '\n';
    else
        laminate::write_sweep_csv(text, rows);
    emit(out, out_path, text.str());
    if (!out_path.empty()) fmt::print(out, "wrote {} rows to {}\n", rows.size(), out_path);
    return kExitOk;
}

service::Server* g_server = nullptr;

extern "C" void on_signal(int) {
    if (g_server) g_server->stop();
}

int cmd_serve(const GlobalOptions& g, const std::string& listen, std::ostream& out) {
    const auto addr = service::parse_listen(listen);
    std::shared_ptr<const matdb::MaterialDb> db;
    if (!g.db_path.empty()) db = std::make_shared<const matdb::MaterialDb>(matdb::load_db(g.db_path));

    service::Server server{service::Api(db, g.rank())};
    const int port = server.bind(addr.host, addr.port);
    if (port < 0) throw IoError("cannot listen on " + listen, listen);
    fmt::print(out, "listening on http://{}:{}\n", addr.host, port);
    out.flush();

    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    const bool ok = server.listen_after_bind();
    g_server = nullptr;
    return ok ? kExitOk : kExitIo;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Composite design decision support: material retrieval, fiber classification "
                 "and laminate stiffness analysis"};
    app.name("frp");
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--db", g.db_path, "Material database JSON (written by ingest)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--normalize", g.normalize, "Min-max normalize feature dimensions before scoring");
    app.add_option("--tau-c", g.tau_c, "Override the fiber-matrix bond strength tau_c (MPa)");

    std::string polymers_path, fibers_path;
    auto* ingest = app.add_subcommand("ingest", "Build the material database from CSV/JSON tables");
    ingest->add_option("--polymers", polymers_path, "Polymer table (.csv or .json)")->required();
    ingest->add_option("--fibers", fibers_path, "Fiber table (.csv or .json)")->required();

    std::string req_path;
    std::optional<std::size_t> top;
    auto* select_matrix = app.add_subcommand("select-matrix", "Rank polymers against a requirement");
    select_matrix->add_option("--requirements", req_path, "Requirement JSON")->required();
    select_matrix->add_option("--top", top, "Number of results (default: all)");

    std::string matrix_name;
    auto* select_fiber = app.add_subcommand(
        "select-fiber", "Predict the fiber class and rank fibers within it");
    select_fiber->add_option("--requirements", req_path, "Fiber requirement JSON")->required();
    select_fiber->add_option("--matrix", matrix_name, "Polymer supplying tau_c (shear strength)");
    select_fiber->add_option("--top", top, "Number of results (default: all)");

    FiberArgs fiber_args;
    auto* classify = app.add_subcommand("classify-fiber", "Critical length and length class of a fiber");
    classify->add_option("--fiber", fiber_args.name, "Fiber name from the database");
    classify->add_option("--sigma", fiber_args.sigma, "Fiber tensile strength (MPa)");
    classify->add_option("--diameter", fiber_args.diameter, "Fiber diameter (mm)");
    classify->add_option("--length", fiber_args.length, "Fiber length (mm)");
    classify->add_option("--matrix", fiber_args.matrix, "Polymer supplying tau_c (shear strength)");

    std::string spec_path, out_path, range;
    auto* analyze = app.add_subcommand("analyze", "Per-plane stiffness report for a laminate spec");
    analyze->add_option("--laminate", spec_path, "Laminate spec JSON")->required();
    analyze->add_option("--out", out_path, "Output file (default: stdout)");

    auto* sweep = app.add_subcommand(
        "sweep", "Mean stiffness with all planes at each angle.\n"
                 "Range is start:stop:step in degrees, stop included when aligned (0:90:15).");
    sweep->add_option("--laminate", spec_path, "Laminate spec JSON")->required();
    sweep->add_option("--thetas", range, "start:stop:step")->required();
    sweep->add_option("--out", out_path, "Output file (default: stdout)");

    std::string listen(service::kDefaultListen);
    auto* serve = app.add_subcommand("serve", "Run the JSON HTTP service");
    serve->add_option("--listen", listen, "host:port")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        // Subcommand help requests surface here too.
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        if (*ingest) return cmd_ingest(g, polymers_path, fibers_path, out, err);
        if (*select_matrix) return cmd_select_matrix(g, req_path, top, out);
        if (*select_fiber) return cmd_select_fiber(g, req_path, matrix_name, top, out);
        if (*classify) return cmd_classify_fiber(g, fiber_args, out);
        if (*analyze) return cmd_analyze(g, spec_path, out_path, out);
        if (*sweep) return cmd_sweep(g, spec_path, range, out_path, out);
        if (*serve) return cmd_serve(g, listen, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what();
        if (!e.detail().empty()) err << " [" << e.detail() << ']';
        err << '\n';
        return kExitValidation;
    }
    return kExitValidation;
}

}  // namespace frp::cli
