#pragma once

// Command-line front end. run() is the whole program minus main(), so the
// tests drive it with argument vectors and string streams.

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "combinatorics.hpp"
#include "qseries.hpp"
#include "straightening.hpp"
#include "voa_oracle.hpp"

namespace fsbasis::cli {

enum exit_code : int { ok = 0, usage = 1, mismatch = 2 };

enum class format { plain, json, csv };

struct run_config {
    int rank = 1;
    std::optional<int> module_index;
    int cap = 6;
    std::optional<int> degree;
    std::optional<std::string> weight;
    std::string method;
    format output = format::plain;
    std::optional<std::string> cache_path;
    bool check = false;
    std::string monomial_text;
};

namespace detail {

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? "\"\"" : std::string(1, c);
    }
    return out + "\"";
}

inline setup make_setup(const run_config& cfg) { return {cfg.rank, cfg.module_index.value_or(0)}; }

inline std::optional<weight_vector> make_weight(const run_config& cfg)
{
    if (!cfg.weight) {
        return std::nullopt;
    }
    return weight_vector::parse(*cfg.weight, cfg.rank);
}

// --- enumerate -------------------------------------------------------------

inline nlohmann::json enumerate_json(const run_config& cfg)
{
    const setup s = make_setup(cfg);
    const auto w = make_weight(cfg);
    nlohmann::json sectors = nlohmann::json::array();
    for (const auto& [key, ms] : group_by_sector(enumerate_admissible(s, cfg.cap, w), s.rank)) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& m : ms) {
            list.push_back(m.str());
        }
        sectors.push_back({{"weight", key.first.key()}, {"degree", key.second}, {"monomials", list}});
    }
    return {{"rank", s.rank}, {"module", s.module_index}, {"cap", cfg.cap}, {"sectors", sectors}};
}

inline void enumerate_text(const nlohmann::json& j, format f, std::ostream& out)
{
    if (f == format::csv) {
        out << "weight,degree,monomial\n";
    }
    for (const auto& sec : j.at("sectors")) {
        const auto w = sec.at("weight").get<std::string>();
        const int d = sec.at("degree").get<int>();
        if (f == format::csv) {
            for (const auto& m : sec.at("monomials")) {
                out << csv_field(w) << ',' << d << ',' << csv_field(m.get<std::string>()) << '\n';
            }
            continue;
        }
        out << "weight (" << w << ") degree " << d << ":";
        for (const auto& m : sec.at("monomials")) {
            const auto text = m.get<std::string>();
            out << "  " << (text.empty() ? "1" : text);
        }
        out << '\n';
    }
}

// --- character -------------------------------------------------------------

inline nlohmann::json character_json(const run_config& cfg, bool& agree)
{
    const setup s = make_setup(cfg);
    const auto w = make_weight(cfg);
    const std::string method = cfg.method.empty() ? "fermionic" : cfg.method;
    agree = true;

    auto table_for = [&](character_method m) {
        if (!w) {
            return character_table_for(s, cfg.cap, m);
        }
        character_table t{s, cfg.cap, {}};
        t.entries.emplace(*w, m == character_method::fermionic ? fermionic_character(s, *w, cfg.cap)
                                                               : enumerative_character(s, *w, cfg.cap));
        return t;
    };

    nlohmann::json out = {{"rank", s.rank}, {"module", s.module_index}, {"order", cfg.cap}, {"method", method}};
    if (w) {
        out["weight"] = w->key();
    }
    const auto primary = table_for(method == "enumerative" ? character_method::enumerative
                                                           : character_method::fermionic);
    out["series"] = to_json(primary.total());
    out["table"] = to_json(primary);
    if (method == "both") {
        const auto other = table_for(character_method::enumerative);
        out["agreement"] = true;
        for (const auto& [wt, chi] : primary.entries) {
            const auto& psi = other.entries.at(wt);
            for (int e = 0; e <= cfg.cap; ++e) {
                if (chi[e] != psi[e]) {
                    agree = false;
                    out["agreement"] = false;
                    out["first_mismatch"] = {
                        {"weight", wt.key()}, {"exponent", e}, {"fermionic", chi[e]}, {"enumerative", psi[e]}};
                    return out;
                }
            }
        }
    }
    return out;
}

inline void character_text(const nlohmann::json& j, format f, std::ostream& out)
{
    const auto& entries = j.at("table").at("entries");
    if (f == format::csv) {
        out << "weight,exponent,coefficient\n";
        for (const auto& [key, series] : entries.items()) {
            for (const auto& t : series.at("terms")) {
                out << csv_field(key) << ',' << t.at(0) << ',' << t.at(1) << '\n';
            }
        }
        return;
    }
    for (const auto& [key, series] : entries.items()) {
        out << "chi(" << key << ") = " << qseries_from_json(series).str() << '\n';
    }
    out << "chi = " << qseries_from_json(j.at("series")).str() << " + O(q^" << j.at("order").get<int>() + 1 << ")\n";
    if (j.contains("agreement")) {
        if (j.at("agreement").get<bool>()) {
            out << "fermionic and enumerative characters agree\n";
        } else {
            const auto& m = j.at("first_mismatch");
            out << "MISMATCH at weight (" << m.at("weight").get<std::string>() << ") q^" << m.at("exponent")
                << ": fermionic " << m.at("fermionic") << ", enumerative " << m.at("enumerative") << '\n';
        }
    }
}

// --- straighten ------------------------------------------------------------

inline nlohmann::json straighten_json(const run_config& cfg, bool& passed)
{
    const setup s = make_setup(cfg);
    const auto b = monomial::parse(cfg.monomial_text, s.rank);
    const std::string method = cfg.method.empty() ? "rewriting" : cfg.method;
    const lin_comb input(b);
    const lin_comb result =
        method == "elimination" ? straighten_by_elimination(input, s) : straighten_by_rewriting(input, s);
    nlohmann::json out = {{"rank", s.rank},
                          {"module", s.module_index},
                          {"method", method},
                          {"input", b.str()},
                          {"result", to_json(result)}};
    passed = true;
    if (cfg.check) {
        voa::lattice_module mod(s.rank);
        const auto lhs = mod.apply_monomial(b, s.module_index);
        voa::fock_vector rhs;
        for (const auto& [m, c] : result.terms()) {
            rhs.add(mod.apply_monomial(m, s.module_index), c);
        }
        const lin_comb other =
            method == "elimination" ? straighten_by_rewriting(input, s) : straighten_by_elimination(input, s);
        const bool oracle_ok = lhs == rhs;
        const bool methods_ok = other == result;
        passed = oracle_ok && methods_ok;
        out["check"] = {{"oracle_agrees", oracle_ok}, {"methods_agree", methods_ok}, {"passed", passed}};
    }
    return out;
}

inline void straighten_text(const nlohmann::json& j, format f, std::ostream& out)
{
    const lin_comb v = lin_comb_from_json(j.at("result"));
    if (f == format::csv) {
        out << "coefficient,monomial\n";
        for (const auto& [m, c] : v.terms()) {
            out << c.str() << ',' << csv_field(m.str()) << '\n';
        }
    } else {
        out << v.str() << '\n';
    }
    if (j.contains("check") && f == format::plain) {
        const auto& c = j.at("check");
        out << "oracle: " << (c.at("oracle_agrees").get<bool>() ? "agrees" : "DISAGREES") << ", rewriting vs elimination: "
            << (c.at("methods_agree").get<bool>() ? "agree" : "DISAGREE") << '\n';
    }
}

// --- verify ----------------------------------------------------------------

inline nlohmann::json verify_json(const run_config& cfg, bool& passed)
{
    const int degree = cfg.degree.value_or(4);
    if (degree < 0) {
        throw std::invalid_argument("--degree must be >= 0");
    }
    setup(cfg.rank, cfg.module_index.value_or(0));  // validates rank and module
    const auto w = make_weight(cfg);
    std::optional<voa::sector_cache> cache;
    if (cfg.cache_path) {
        cache = voa::sector_cache::load(*cfg.cache_path);
    }

    passed = true;
    nlohmann::json ranks = nlohmann::json::array();
    const int r_lo = cfg.module_index.value_or(0);
    const int r_hi = cfg.module_index.value_or(cfg.rank);
    for (int r = r_lo; r <= r_hi; ++r) {
        const setup s(cfg.rank, r);
        for (int d = 0; d <= degree; ++d) {
            const auto t = voa::graded_rank(s, d, w, cache ? &*cache : nullptr);
            passed = passed && t.all_equal();
            ranks.push_back({{"module", r},
                             {"degree", d},
                             {"count_admissible", t.count_admissible},
                             {"rank_admissible", t.rank_admissible},
                             {"rank_all_pbw", t.rank_all_pbw},
                             {"equal", t.all_equal()}});
        }
    }
    if (cache) {
        cache->save(*cfg.cache_path);
    }

    voa::relation_options opt;
    opt.max_total_depth = cfg.cap;
    opt.max_fock_degree = degree;
    const auto rep = voa::verify_relations(cfg.rank, opt);
    passed = passed && rep.passed;
    nlohmann::json constants = nlohmann::json::object();
    for (const auto& [r, c] : rep.init2_constants) {
        constants[std::to_string(r)] = c.str();
    }
    nlohmann::json out = {{"rank", cfg.rank},
                          {"degree", degree},
                          {"ranks", ranks},
                          {"relations",
                           {{"max_total_depth", opt.max_total_depth},
                            {"max_fock_degree", opt.max_fock_degree},
                            {"passed", rep.passed},
                            {"failed_check", rep.failed_check},
                            {"counterexample", rep.counterexample},
                            {"identities_checked", rep.identities_checked},
                            {"init2_constants", constants}}},
                          {"passed", passed}};
    if (w) {
        out["weight"] = w->key();
    }
    return out;
}

inline void verify_text(const nlohmann::json& j, format f, std::ostream& out)
{
    if (f == format::csv) {
        out << "module,degree,count_admissible,rank_admissible,rank_all_pbw\n";
        for (const auto& t : j.at("ranks")) {
            out << t.at("module") << ',' << t.at("degree") << ',' << t.at("count_admissible") << ','
                << t.at("rank_admissible") << ',' << t.at("rank_all_pbw") << '\n';
        }
        return;
    }
    for (const auto& t : j.at("ranks")) {
        out << "r=" << t.at("module") << " d=" << t.at("degree") << ": (" << t.at("count_admissible") << ", "
            << t.at("rank_admissible") << ", " << t.at("rank_all_pbw") << ")"
            << (t.at("equal").get<bool>() ? "" : "  MISMATCH") << '\n';
    }
    const auto& rel = j.at("relations");
    out << "relations (M <= " << rel.at("max_total_depth") << ", Fock degree <= " << rel.at("max_fock_degree")
        << "): ";
    if (rel.at("passed").get<bool>()) {
        out << "pass, " << rel.at("identities_checked") << " identities";
        for (const auto& [r, c] : rel.at("init2_constants").items()) {
            out << ", C" << r << " = " << c.get<std::string>();
        }
        out << '\n';
    } else {
        out << "FAIL in " << rel.at("failed_check").get<std::string>() << ": "
            << rel.at("counterexample").get<std::string>() << '\n';
    }
}

inline void emit(const nlohmann::json& j, format f, std::ostream& out,
                 void (*text)(const nlohmann::json&, format, std::ostream&))
{
    if (f == format::json) {
        out << j.dump(2) << '\n';
    } else {
        text(j, f, out);
    }
}

}  // namespace detail

/// Runs one invocation; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Particle bases, characters and straightening for W(Lambda_r) of affine sl(l+1), level 1",
                 "fsbasis"};
    app.require_subcommand(1);
    run_config cfg;
    const std::map<std::string, format> formats{{"plain", format::plain}, {"json", format::json}, {"csv", format::csv}};

    auto common = [&](CLI::App* sub) {
        sub->add_option("--rank", cfg.rank, "rank l >= 1")->check(CLI::PositiveNumber);
        sub->add_option("--module", cfg.module_index, "module index r in 0..l");
        sub->add_option("--format", cfg.output, "plain, json or csv")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    };

    auto* enumerate = app.add_subcommand("enumerate", "admissible monomials by sector");
    common(enumerate);
    enumerate->add_option("--cap", cfg.cap, "degree cap")->check(CLI::NonNegativeNumber);
    enumerate->add_option("--weight", cfg.weight, "restrict to weight n1,...,nl");

    auto* character = app.add_subcommand("character", "graded characters");
    common(character);
    character->add_option("--cap", cfg.cap, "truncation order")->check(CLI::NonNegativeNumber);
    character->add_option("--weight", cfg.weight, "restrict to weight n1,...,nl");
    character->add_option("--method", cfg.method, "fermionic, enumerative or both")
        ->check(CLI::IsMember({"fermionic", "enumerative", "both"}));

    auto* straighten = app.add_subcommand("straighten", "normal form of a monomial");
    common(straighten);
    straighten->add_option("monomial", cfg.monomial_text, "e.g. \"x1(-2) x1(-2)\"")->required();
    straighten->add_option("--method", cfg.method, "rewriting or elimination")
        ->check(CLI::IsMember({"rewriting", "elimination"}));
    straighten->add_flag("--check", cfg.check, "compare both sides in the lattice model");

    auto* verify = app.add_subcommand("verify", "rank sweep and relation suite");
    common(verify);
    verify->add_option("--degree", cfg.degree, "largest degree (also the Fock degree bound)")
        ->check(CLI::NonNegativeNumber);
    verify->add_option("--cap", cfg.cap, "largest total depth M in the relation suite")
        ->check(CLI::NonNegativeNumber);
    verify->add_option("--weight", cfg.weight, "restrict the rank sweep to one weight");
    verify->add_option("--cache", cfg.cache_path, "sector cache file (JSON)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        if (!app.get_subcommands().empty()) {
            err << "see --help\n";
        }
        return usage;
    }

    try {
        if (enumerate->parsed()) {
            detail::emit(detail::enumerate_json(cfg), cfg.output, out, detail::enumerate_text);
            return ok;
        }
        if (character->parsed()) {
            bool agree = true;
            detail::emit(detail::character_json(cfg, agree), cfg.output, out, detail::character_text);
            return agree ? ok : mismatch;
        }
        if (straighten->parsed()) {
            bool passed = true;
            detail::emit(detail::straighten_json(cfg, passed), cfg.output, out, detail::straighten_text);
            return passed ? ok : mismatch;
        }
        bool passed = true;
        detail::emit(detail::verify_json(cfg, passed), cfg.output, out, detail::verify_text);
        return passed ? ok : mismatch;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }
}

}  // namespace fsbasis::cli
