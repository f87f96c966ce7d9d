#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eqmat/materialisation.hpp"
#include "eqmat/ntriples.hpp"
#include "eqmat/oracle.hpp"
#include "eqmat/rule_model.hpp"
#include "eqmat/sparql.hpp"
#include "eqmat/term_dictionary.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const char* outcome_name(eqmat::Outcome outcome) {
    return outcome == eqmat::Outcome::Contradiction ? "contradiction" : "consistent";
}

nlohmann::json report_json(const eqmat::MaterialisationResult& result, const std::string& mode,
                           unsigned threads, double wall_seconds) {
    const eqmat::MaterialisationStats& s = result.stats;
    return nlohmann::json{
        {"mode", mode},
        {"thread_count", threads},
        {"wall_time_seconds", wall_seconds},
        {"stats",
         {{"rule_applications", s.rule_applications},
          {"derivations", s.derivations},
          {"derivations_rules", s.derivations_rules},
          {"derivations_rewrite", s.derivations_rewrite},
          {"derivations_reflexivity", s.derivations_reflexivity},
          {"successful_adds", s.successful_adds},
          {"merged_resources", s.merged_resources},
          {"marked_facts", s.marked_facts},
          {"serial_phases", s.serial_phases}}},
        {"triples_after_unmarked", result.triples_unmarked},
        {"triples_after_total", result.triples_total},
        {"outcome", outcome_name(result.outcome)},
    };
}

void report_table(std::ostream& out, const eqmat::MaterialisationResult& result,
                  const std::string& mode, unsigned threads, double wall_seconds) {
    const eqmat::MaterialisationStats& s = result.stats;
    out << "mode: " << mode << "\n"
        << "threads: " << threads << "\n"
        << "wall_time_seconds: " << wall_seconds << "\n"
        << "rule_applications: " << s.rule_applications << "\n"
        << "derivations: " << s.derivations << " (rules " << s.derivations_rules << ", rewrite "
        << s.derivations_rewrite << ", reflexivity " << s.derivations_reflexivity << ")\n"
        << "successful_adds: " << s.successful_adds << "\n"
        << "merged_resources: " << s.merged_resources << "\n"
        << "marked_facts: " << s.marked_facts << "\n"
        << "serial_phases: " << s.serial_phases << "\n"
        << "triples_after_unmarked: " << result.triples_unmarked << "\n"
        << "triples_after_total: " << result.triples_total << "\n"
        << "outcome: " << outcome_name(result.outcome) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"datalog materialisation over RDF with native owl:sameAs handling"};
    std::string rules_path, data_path, export_mode, out_path, query_path;
    std::string mode_name = "rew";
    std::string base_iri = "http://example.org/";
    unsigned threads = 1;
    bool stats = false, verify = false;

    app.add_option("--rules", rules_path, "rule file");
    app.add_option("--data", data_path, "N-Triples data file");
    app.add_option("--mode", mode_name, "ax stores every equal variant, rew one representative")
        ->check(CLI::IsMember({"ax", "rew"}));
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--stats", stats, "emit the run report as a JSON object");
    app.add_option("--export", export_mode, "write the result store")
        ->check(CLI::IsMember({"plain", "expanded"}));
    app.add_option("--out", out_path, "file for --export (default standard output)");
    app.add_option("--query", query_path, "query file; TSV answers go to standard output");
    app.add_flag("--verify", verify, "check a rewriting run against the reference oracle");
    app.add_option("--base-iri", base_iri, "prefix stripped by STR; empty keeps IRIs whole");
    CLI11_PARSE(app, argc, argv);

    try {
        eqmat::TermDictionary dict;
        std::vector<eqmat::Triple> facts;
        if (!data_path.empty()) {
            std::ifstream in(data_path);
            if (!in) {
                std::cerr << data_path << ": cannot open\n";
                return 1;
            }
            try {
                eqmat::parse_ntriples(in, dict, facts);
            } catch (const eqmat::NTriplesError& e) {
                std::cerr << data_path << ": " << e.what() << "\n";
                return 1;
            }
        }
        eqmat::Program program;
        if (!rules_path.empty()) {
            try {
                eqmat::ParsedRules parsed = eqmat::parse_rules(read_file(rules_path), dict);
                program = std::move(parsed.program);
                facts.insert(facts.end(), parsed.facts.begin(), parsed.facts.end());
            } catch (const eqmat::RuleParseError& e) {
                std::cerr << rules_path << ": " << e.what() << "\n";
                return 1;
            }
        }

        if (verify) {
            eqmat::EngineConfig config;
            config.mode = eqmat::Mode::Rew;
            config.threads = threads;
            eqmat::MaterialisationResult result = eqmat::materialise(facts, program, dict, config);
            eqmat::VerificationReport report = eqmat::verify_materialisation(
                *result.store, *result.rho, result.outcome == eqmat::Outcome::Contradiction,
                facts, program);
            std::cout << (report.no_equality_residue ? "PASS" : "FAIL")
                      << " no unmarked fact equates distinct resources\n"
                      << (report.store_normalized ? "PASS" : "FAIL")
                      << " every unmarked fact is in representative form\n"
                      << (report.matches_reference ? "PASS" : "FAIL")
                      << " expansion equals the reference fixpoint\n";
            if (!report.detail.empty()) std::cout << "detail: " << report.detail << "\n";
            return report.passed() ? 0 : 1;
        }

        eqmat::EngineConfig config;
        config.mode = mode_name == "ax" ? eqmat::Mode::Ax : eqmat::Mode::Rew;
        config.threads = threads;
        auto start = std::chrono::steady_clock::now();
        eqmat::MaterialisationResult result = eqmat::materialise(facts, program, dict, config);
        double wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        // Standard output carries at most one payload; reports move to
        // standard error when an export or query claims it.
        bool stdout_claimed = !query_path.empty() || (!export_mode.empty() && out_path.empty());
        std::ostream& report_out = stdout_claimed ? std::cerr : std::cout;
        if (stats)
            report_out << report_json(result, mode_name, threads, wall_seconds).dump(2) << "\n";
        else if (export_mode.empty() && query_path.empty())
            report_table(report_out, result, mode_name, threads, wall_seconds);

        if (!export_mode.empty()) {
            std::ofstream file;
            std::ostream* out = &std::cout;
            if (!out_path.empty()) {
                file.open(out_path);
                if (!file) {
                    std::cerr << out_path << ": cannot open\n";
                    return 1;
                }
                out = &file;
            }
            if (export_mode == "plain") {
                result.store->export_ntriples(*out, dict);
            } else {
                std::vector<eqmat::Triple> unmarked = result.store->unmarked_triples();
                eqmat::FactSet expanded = eqmat::expand_store(
                    eqmat::FactSet(unmarked.begin(), unmarked.end()), *result.rho);
                for (const eqmat::Triple& t : expanded) eqmat::write_ntriples_line(*out, dict, t);
            }
        }

        if (!query_path.empty()) {
            eqmat::SelectQuery q;
            try {
                q = eqmat::parse_query(read_file(query_path), dict);
            } catch (const eqmat::QueryParseError& e) {
                std::cerr << query_path << ": " << e.what() << "\n";
                return 1;
            }
            eqmat::QueryOptions opt;
            opt.base_iri = base_iri;
            std::cout << eqmat::render_tsv(eqmat::answer(*result.store, *result.rho, q, dict, opt),
                                           q, dict);
        }

        return result.outcome == eqmat::Outcome::Contradiction ? 2 : 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
