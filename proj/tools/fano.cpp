// Command-line front end.  Every numeric output is exact: integers and
// rationals are printed as decimal strings, never floats.  Exit codes:
// 0 when the requested computation succeeds and every check passes,
// 1 when checks ran but at least one failed, 2 on malformed input or
// violated preconditions (with {"error": ...} on stderr).

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "fano/json_io.hpp"

namespace {

using fano::Json;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string join_ints(const std::vector<int>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    return os.str();
}

std::string join_rats(const fano::RVec& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ' ';
        os << fano::to_string(v[i]);
    }
    return os.str();
}

void print_polytope_table(const fano::Polytope& P) {
    std::cout << "dim=" << P.ambient_dim() << " vertices=" << P.vertices().size() << "\n";
    for (const auto& v : P.vertices()) std::cout << join_rats(v) << "\n";
}

// Shared reporting for subcommands that emit BoundReport rows: JSON mode
// prints one row per line, table mode a summary plus the worst offender.
int finish_bound_rows(const std::vector<fano::BoundReport>& rows, const std::string& format) {
    std::size_t failing = 0;
    const fano::BoundReport* worst = nullptr;
    for (const auto& r : rows) {
        if (!r.holds) ++failing;
        if (!worst || r.lhs > worst->lhs) worst = &r;
    }
    if (format == "json") {
        for (const auto& r : rows) std::cout << fano::bound_report_to_json(r).dump() << "\n";
    } else {
        std::cout << "rows=" << rows.size() << " failing=" << failing << "\n";
        if (worst)
            std::cout << "worst case=\"" << worst->case_id << "\" lhs=" << fano::to_string(worst->lhs)
                      << " rhs=" << fano::to_string(worst->rhs) << " holds=" << (worst->holds ? "true" : "false")
                      << "\n";
    }
    return failing == 0 ? 0 : 1;
}

std::vector<fano::Polytope> polytopes_from_file(const std::string& path) {
    Json j = fano::parse_json_text(slurp(path), path);
    std::vector<fano::Polytope> out;
    if (j.is_array()) {
        for (const Json& el : j) out.push_back(fano::polytope_from_json(el));
    } else {
        out.push_back(fano::polytope_from_json(j));
    }
    if (out.empty()) throw std::invalid_argument(path + ": no polytopes in input");
    return out;
}

void print_theorem_row_table(const fano::TheoremCheck& c) {
    std::cout << "case=\"" << c.case_id << "\"";
    if (!c.error.empty()) {
        std::cout << " error=\"" << c.error << "\"\n";
        return;
    }
    std::cout << " dim=" << c.dim << " dual_vol=" << fano::to_string(c.dual_vol)
              << " bound=" << fano::to_string(c.bound) << " holds_strict=" << (c.holds_strict ? "true" : "false")
              << " equality=" << (c.equality ? "true" : "false")
              << " dual_of_reflexive_R=" << (c.dual_of_reflexive_R ? "true" : "false")
              << " ok=" << (c.ok ? "true" : "false") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computations on canonical Fano polytopes: Sylvester bounds, gluing, classification"};
    app.require_subcommand(1);

    std::string format = "table";
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "table"}));
    };

    int arg_n = 0;
    auto* cmd_sylvester = app.add_subcommand("sylvester", "print a term of the Sylvester sequence");
    cmd_sylvester->add_option("--n", arg_n, "1-based index")->required()->check(CLI::PositiveNumber);
    add_format(cmd_sylvester);

    int arg_d = 0;
    auto* cmd_bound = app.add_subcommand("bound", "print the dual volume bound for a dimension");
    cmd_bound->add_option("--d", arg_d, "dimension")->required()->check(CLI::PositiveNumber);
    add_format(cmd_bound);

    int d_min = 4, d_max = 13, t_min = 2, t_max = 13;
    auto* cmd_scan = app.add_subcommand("scan", "list decomposition shapes that escape the multinomial bound");
    auto* o_dmin = cmd_scan->add_option("--d-min", d_min, "smallest dimension");
    auto* o_dmax = cmd_scan->add_option("--d-max", d_max, "largest dimension");
    auto* o_tmin = cmd_scan->add_option("--t-min", t_min, "smallest number of parts");
    auto* o_tmax = cmd_scan->add_option("--t-max", t_max, "largest number of parts");
    add_format(cmd_scan);

    std::string spec_path;
    auto* cmd_construct = app.add_subcommand("construct", "glue simplices according to a spec file");
    cmd_construct->add_option("--spec", spec_path, "gluing spec JSON file")->required();
    add_format(cmd_construct);

    std::string in_path;
    auto* cmd_dual = app.add_subcommand("dual", "polar dual of a polytope");
    cmd_dual->add_option("--in", in_path, "polytope JSON file")->required();
    add_format(cmd_dual);

    auto* cmd_volume = app.add_subcommand("volume", "Euclidean and normalized volume of a polytope");
    cmd_volume->add_option("--in", in_path, "polytope JSON file")->required();
    add_format(cmd_volume);

    auto* cmd_points = app.add_subcommand("points", "lattice points of a polytope");
    cmd_points->add_option("--in", in_path, "polytope JSON file")->required();
    add_format(cmd_points);

    auto* cmd_check = app.add_subcommand("check", "canonical Fano predicates and the dual volume verdict");
    cmd_check->add_option("--in", in_path, "polytope JSON file")->required();
    add_format(cmd_check);

    std::string case_name, out_path;
    int jobs = 1;
    auto* cmd_classify = app.add_subcommand("classify", "enumerate and classify glued polytopes for a builtin case");
    cmd_classify->add_option("--case", case_name, "builtin case name")->required();
    cmd_classify->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    cmd_classify->add_option("--out", out_path, "write the report as JSON lines to this file");
    add_format(cmd_classify);

    auto* cmd_verify = app.add_subcommand("verify", "check the dual volume bound on polytopes from a file");
    cmd_verify->add_option("--in", in_path, "polytope JSON file (object or array)")->required();
    add_format(cmd_verify);

    std::string report_path;
    auto* cmd_staged = app.add_subcommand("staged-dim5", "push a four-dimensional classification one dimension up");
    cmd_staged->add_option("--report", report_path, "classification report (JSON lines)")->required();
    add_format(cmd_staged);

    auto* cmd_int5 = app.add_subcommand("int5", "bulk integral bound check on barycentric data");
    auto* o_int5_in = cmd_int5->add_option("--in", in_path, "barycentric data JSON file");
    add_format(cmd_int5);

    try {
        app.parse(argc, argv);

        if (*cmd_sylvester) {
            fano::Int s = fano::sylvester(arg_n);
            if (format == "json")
                std::cout << Json{{"n", arg_n}, {"value", fano::to_string(s)}}.dump() << "\n";
            else
                std::cout << fano::to_string(s) << "\n";
            return 0;
        }

        if (*cmd_bound) {
            fano::Int b = fano::bound_B(arg_d);
            if (format == "json")
                std::cout << Json{{"d", arg_d}, {"value", fano::to_string(b)}}.dump() << "\n";
            else
                std::cout << fano::to_string(b) << "\n";
            return 0;
        }

        if (*cmd_scan) {
            std::vector<fano::ExceptionTuple> rows;
            const bool defaults = o_dmin->count() + o_dmax->count() + o_tmin->count() + o_tmax->count() == 0;
            if (defaults) {
                // The proof thresholds: pairs are settled by dimension 9,
                // larger part counts by dimension 13.  Merge in cell order
                // (dimension, then part count, then the parts).
                auto pairs = fano::scan_exceptions(4, 9, 2, 2);
                auto rest = fano::scan_exceptions(4, 13, 3, 13);
                auto cell_less = [](const fano::ExceptionTuple& a, const fano::ExceptionTuple& b) {
                    if (a.d != b.d) return a.d < b.d;
                    if (a.dims.size() != b.dims.size()) return a.dims.size() < b.dims.size();
                    return a.dims < b.dims;
                };
                std::merge(pairs.begin(), pairs.end(), rest.begin(), rest.end(), std::back_inserter(rows), cell_less);
            } else {
                rows = fano::scan_exceptions(d_min, d_max, t_min, t_max);
            }
            for (const auto& e : rows) {
                if (format == "json")
                    std::cout << fano::exception_tuple_to_json(e).dump() << "\n";
                else
                    std::cout << "d=" << e.d << " dims=" << join_ints(e.dims) << "\n";
            }
            return 0;
        }

        if (*cmd_construct) {
            fano::GluingSpec spec = fano::gluing_spec_from_json(fano::parse_json_text(slurp(spec_path), spec_path));
            fano::GlueResult g = fano::glue(spec);
            if (format == "json") {
                Json j = fano::polytope_to_json(g.Q);
                Json prof = Json::object();
                prof["d"] = g.profile.d;
                prof["t"] = g.profile.t;
                prof["dims"] = g.profile.dims;
                prof["overlaps"] = g.profile.overlaps;
                j["profile"] = std::move(prof);
                j["spec"] = fano::gluing_spec_to_json(spec);
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "d=" << g.profile.d << " t=" << g.profile.t << " dims=" << join_ints(g.profile.dims)
                          << " overlaps=" << join_ints(g.profile.overlaps) << "\n";
                print_polytope_table(g.Q);
            }
            return 0;
        }

        if (*cmd_dual) {
            fano::Polytope P = fano::polytope_from_json(fano::parse_json_text(slurp(in_path), in_path));
            fano::Polytope D = fano::dual(P);
            if (format == "json")
                std::cout << fano::polytope_to_json(D).dump() << "\n";
            else
                print_polytope_table(D);
            return 0;
        }

        if (*cmd_volume) {
            fano::Polytope P = fano::polytope_from_json(fano::parse_json_text(slurp(in_path), in_path));
            fano::Rat vol = fano::volume(P);
            fano::Rat nvol = fano::normalized_volume(P);
            if (format == "json")
                std::cout << Json{{"volume", fano::to_string(vol)}, {"normalized_volume", fano::to_string(nvol)}}.dump()
                          << "\n";
            else
                std::cout << "volume=" << fano::to_string(vol) << "\nnormalized_volume=" << fano::to_string(nvol)
                          << "\n";
            return 0;
        }

        if (*cmd_points) {
            fano::Polytope P = fano::polytope_from_json(fano::parse_json_text(slurp(in_path), in_path));
            auto pts = fano::lattice_points(P);
            auto interior = fano::interior_lattice_points(P);
            if (format == "json") {
                Json j = Json::object();
                j["count"] = pts.size();
                j["points"] = fano::lattice_points_to_json(pts);
                j["interior_count"] = interior.size();
                j["interior"] = fano::lattice_points_to_json(interior);
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "count=" << pts.size() << " interior=" << interior.size() << "\n";
                for (const auto& p : pts) {
                    std::ostringstream os;
                    for (std::size_t i = 0; i < p.size(); ++i) {
                        if (i) os << ' ';
                        os << p[i].get_str();
                    }
                    std::cout << os.str() << "\n";
                }
            }
            return 0;
        }

        if (*cmd_check) {
            fano::Polytope P = fano::polytope_from_json(fano::parse_json_text(slurp(in_path), in_path));
            const bool canonical = fano::is_canonical_fano(P);
            const bool reflexive = canonical && fano::is_reflexive(P);
            const bool minimal = canonical && fano::is_minimal(P);
            fano::TheoremCheck row = fano::verify_theorem({P}).front();
            if (format == "json") {
                Json j = Json::object();
                j["canonical_fano"] = canonical;
                j["reflexive"] = reflexive;
                j["minimal"] = minimal;
                j["check"] = fano::theorem_check_to_json(row);
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "canonical_fano=" << (canonical ? "true" : "false")
                          << " reflexive=" << (reflexive ? "true" : "false")
                          << " minimal=" << (minimal ? "true" : "false") << "\n";
                print_theorem_row_table(row);
            }
            return (canonical && row.ok) ? 0 : 1;
        }

        if (*cmd_classify) {
            fano::ClassificationReport rep = fano::classify(fano::classification_case(case_name), jobs);
            const std::string lines = fano::classification_report_to_json_lines(rep);
            if (!out_path.empty()) {
                std::ofstream out(out_path);
                if (!out) throw std::invalid_argument("cannot open " + out_path + " for writing");
                out << lines;
            }
            if (format == "json") {
                std::cout << lines;
            } else {
                std::cout << "case=" << rep.case_name << " d=" << rep.d << " t=" << rep.t
                          << " dims=" << join_ints(rep.dims) << " candidates=" << rep.candidates
                          << " survivors=" << rep.survivors << " classes=" << rep.rows.size()
                          << " pass=" << (rep.pass ? "true" : "false") << "\n";
                for (std::size_t i = 0; i < rep.rows.size(); ++i) {
                    const auto& row = rep.rows[i];
                    std::cout << "class " << i << ": vol=" << fano::to_string(row.vol)
                              << " dual_vol=" << fano::to_string(row.dual_vol)
                              << " bound=" << fano::to_string(row.bound)
                              << " verdict=" << (row.verdict ? "true" : "false") << "\n";
                }
            }
            return rep.pass ? 0 : 1;
        }

        if (*cmd_verify) {
            auto checks = fano::verify_theorem(polytopes_from_file(in_path));
            bool all_ok = true;
            for (const auto& c : checks) {
                all_ok = all_ok && c.ok;
                if (format == "json")
                    std::cout << fano::theorem_check_to_json(c).dump() << "\n";
                else
                    print_theorem_row_table(c);
            }
            return all_ok ? 0 : 1;
        }

        if (*cmd_staged) {
            std::ifstream in(report_path);
            if (!in) throw std::invalid_argument("cannot open " + report_path);
            fano::ClassificationReport rep = fano::classification_report_from_json_lines(in);
            return finish_bound_rows(fano::staged_verify_dim5(rep), format);
        }

        if (*cmd_int5) {
            std::string path = in_path;
            if (o_int5_in->count() == 0) {
                const char* dir = std::getenv("FANO_DATA_DIR");
                if (!dir || !*dir)
                    throw std::invalid_argument("int5: pass --in FILE or set FANO_DATA_DIR");
                path = std::string(dir) + "/int5-barycentric.json";
            }
            fano::Int5Data data = fano::int5_data_from_json(fano::parse_json_text(slurp(path), path));
            return finish_bound_rows(fano::bulk_int5_check(data.list1, data.list2, data.d), format);
        }

        return 2;  // unreachable: require_subcommand(1)
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << Json{{"error", e.what()}}.dump() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << std::endl;
        return 2;
    }
}
