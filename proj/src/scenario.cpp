#include "rbp/scenario.hpp"

#include <cctype>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rbp/duality.hpp"
#include "rbp/oracle.hpp"
#include "rbp/simplex.hpp"

namespace rbp {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw input_error(where + ": " + what);
}

Rat jrat(const Json& j, const std::string& where) {
    if (j.is_string()) return rat_parse(j.get<std::string>());
    if (j.is_number_integer()) return make_rat(j.get<long>());
    fail(where, "expected a rational as \"p/q\" string or integer");
}

Vec jvec(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of rationals");
    Vec v;
    for (size_t i = 0; i < j.size(); ++i) v.push_back(jrat(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

Measure measure_over_space(const Json& j, const FiniteSpace& space, const std::string& where) {
    Vec w = jvec(j, where);
    if ((int)w.size() != space.n())
        fail(where, "expected " + std::to_string(space.n()) + " atom weights");
    return Measure{std::move(w)};
}

RobustSet parse_set(const Json& j, const PriorSet& priors, const std::string& where) {
    if (j.contains("constraints")) {
        std::vector<std::pair<Measure, Rat>> cons;
        for (size_t i = 0; i < j["constraints"].size(); ++i) {
            const Json& c = j["constraints"][i];
            const std::string cw = where + ".constraints[" + std::to_string(i) + "]";
            if (!c.contains("measure") || !c.contains("bound")) fail(cw, "needs measure and bound");
            cons.emplace_back(measure_over_space(c["measure"], priors.space, cw + ".measure"),
                              jrat(c["bound"], cw + ".bound"));
        }
        return from_constraints(priors, cons);
    }
    if (j.contains("generators")) {
        std::vector<Vec> pts;
        for (size_t i = 0; i < j["generators"].size(); ++i) {
            Vec raw = jvec(j["generators"][i], where + ".generators[" + std::to_string(i) + "]");
            if ((int)raw.size() != priors.space.n())
                fail(where, "generator must list all atom values");
            pts.push_back(quotient(priors, raw).coords);
        }
        return make_generator_set(priors, std::move(pts));
    }
    fail(where, "set needs either constraints or generators");
}

Event parse_block(const Json& j, const FiniteSpace& space, const std::string& where) {
    Event e = Event::none(space.n());
    if (!j.is_array()) fail(where, "expected an array of atom labels");
    for (const auto& lbl : j) e.members[space.index(lbl.get<std::string>())] = true;
    return e;
}

PriorSet parse_priors(const Json& root, const std::string& space_key, const std::string& priors_key,
                      const std::string& where) {
    if (!root.contains(space_key)) fail(where, "missing " + space_key + " block");
    if (!root.contains(priors_key)) fail(where, "missing " + priors_key + " block");
    const Json& js = root[space_key];
    if (!js.contains("atoms")) fail(where + "." + space_key, "missing atoms");
    std::vector<std::string> atoms;
    for (const auto& a : js["atoms"]) atoms.push_back(a.get<std::string>());
    FiniteSpace space(std::move(atoms));
    std::vector<ProbabilityMeasure> gens;
    for (size_t i = 0; i < root[priors_key].size(); ++i) {
        Vec w = jvec(root[priors_key][i], where + "." + priors_key + "[" + std::to_string(i) + "]");
        if ((int)w.size() != space.n()) fail(where, "prior generator must list all atom weights");
        gens.emplace_back(std::move(w));
    }
    if (gens.empty()) fail(where, priors_key + " must be non-empty");
    return PriorSet(std::move(space), std::move(gens));
}

std::string strip_front_matter(const std::string& text, std::string* name) {
    if (text.rfind("+++", 0) != 0) return text;
    auto end = text.find("\n+++", 3);
    if (end == std::string::npos) throw input_error("unterminated +++ front matter");
    std::istringstream fm(text.substr(3, end - 3));
    std::string line;
    while (std::getline(fm, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\""));
            auto last = s.find_last_not_of(" \t\"\r");
            s.erase(last == std::string::npos ? 0 : last + 1);
            return s;
        };
        if (trim(line.substr(0, eq)) == "name") *name = trim(line.substr(eq + 1));
    }
    return text.substr(end + 4);
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();

    Scenario sc;
    std::string body = strip_front_matter(buf.str(), &sc.name);
    Json root;
    try {
        root = Json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(path + ": " + e.what());
    }

    if (root.contains("name") && sc.name.empty()) sc.name = root["name"].get<std::string>();

    if (root.contains("space") || root.contains("priors"))
        sc.priors = parse_priors(root, "space", "priors", path);

    if (root.contains("sets")) {
        if (!sc.priors) fail(path, "sets need a priors block");
        for (const auto& [key, val] : root["sets"].items())
            sc.sets.emplace(key, parse_set(val, *sc.priors, path + ".sets." + key));
    }
    if (root.contains("qsets")) {
        if (!sc.priors) fail(path, "qsets need a priors block");
        for (const auto& [key, val] : root["qsets"].items()) {
            std::vector<ProbabilityMeasure> qs;
            for (size_t i = 0; i < val.size(); ++i) {
                Measure m = measure_over_space(val[i], sc.priors->space,
                                               path + ".qsets." + key + "[" + std::to_string(i) + "]");
                qs.emplace_back(std::move(m.weights));
            }
            sc.qsets.emplace(key, std::move(qs));
        }
    }
    if (root.contains("market")) {
        if (!sc.priors) fail(path, "market needs a priors block");
        const Json& jm = root["market"];
        if (!jm.contains("filtration") || !jm.contains("prices"))
            fail(path + ".market", "needs filtration and prices");
        std::vector<std::vector<Event>> filtration;
        for (const auto& level : jm["filtration"]) {
            std::vector<Event> part;
            for (const auto& block : level)
                part.push_back(parse_block(block, sc.priors->space, path + ".market.filtration"));
            filtration.push_back(std::move(part));
        }
        std::vector<std::vector<Vec>> prices;
        for (const auto& asset : jm["prices"]) {
            std::vector<Vec> path_prices;
            for (const auto& p : asset) {
                Vec v = jvec(p, path + ".market.prices");
                if ((int)v.size() != sc.priors->space.n())
                    fail(path + ".market.prices", "price vector must list all atoms");
                path_prices.push_back(std::move(v));
            }
            prices.push_back(std::move(path_prices));
        }
        sc.market = make_market(sc.priors->space, std::move(filtration), std::move(prices),
                                sc.priors->generators);
    }
    if (root.contains("transport")) {
        const Json& jt = root["transport"];
        PriorSet p1 = parse_priors(jt, "space1", "priors1", path + ".transport");
        PriorSet p2 = parse_priors(jt, "space2", "priors2", path + ".transport");
        if (!jt.contains("set1") || !jt.contains("set2") || !jt.contains("goal"))
            fail(path + ".transport", "needs set1, set2 and goal");
        RobustSet c1 = parse_set(jt["set1"], p1, path + ".transport.set1");
        RobustSet c2 = parse_set(jt["set2"], p2, path + ".transport.set2");
        ProductModel model = [&] {
            if (!jt.contains("couplings")) return make_product_model(p1, p2);
            std::vector<ProbabilityMeasure> cps;
            for (const auto& c : jt["couplings"]) {
                Vec w = jvec(c, path + ".transport.couplings");
                cps.emplace_back(std::move(w));
            }
            return make_product_model(p1, p2, std::move(cps));
        }();
        MarginalSystem sys = make_marginal_system(c1, c2);
        // Goal is a matrix over atoms1 x atoms2.
        const Json& jg = jt["goal"];
        if (!jg.is_array() || (int)jg.size() != p1.space.n())
            fail(path + ".transport.goal", "expected one row per first-space atom");
        Vec raw(model.product.space.n(), Rat(0));
        for (int a = 0; a < p1.space.n(); ++a) {
            Vec row = jvec(jg[a], path + ".transport.goal");
            if ((int)row.size() != p2.space.n())
                fail(path + ".transport.goal", "row has wrong width");
            for (int b = 0; b < p2.space.n(); ++b) raw[a * p2.space.n() + b] = row[b];
        }
        sc.transport = TransportBlock{std::move(model), std::move(sys), Vec{}};
        sc.transport->goal = quotient(sc.transport->model.product, raw).coords;
    }
    if (root.contains("families")) {
        if (!sc.priors) fail(path, "families need a priors block");
        for (const auto& [key, val] : root["families"].items()) {
            CoherentFamily fam;
            const std::string fw = path + ".families." + key;
            if (!val.contains("entries")) fail(fw, "missing entries");
            for (const auto& e : val["entries"]) {
                Measure q = measure_over_space(e["q"], sc.priors->space, fw + ".q");
                Vec raw = jvec(e["x"], fw + ".x");
                if ((int)raw.size() != sc.priors->space.n()) fail(fw, "x must list all atoms");
                fam.entries.emplace_back(ProbabilityMeasure(q.weights),
                                         quotient(*sc.priors, raw));
            }
            QsClass fill{zeros(sc.priors->qdim())};
            if (val.contains("fill")) {
                Vec raw = jvec(val["fill"], fw + ".fill");
                if ((int)raw.size() != sc.priors->space.n()) fail(fw, "fill must list all atoms");
                fill = quotient(*sc.priors, raw);
            }
            sc.families.emplace(key, std::make_pair(std::move(fam), std::move(fill)));
        }
    }
    if (root.contains("checks")) {
        for (const auto& c : root["checks"]) sc.checks.push_back(c);
    }
    return sc;
}

Json vec_to_json(const Vec& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(rat_str(x));
    return out;
}

Json poly_to_json(const HPolyhedron& poly) {
    HPolyhedron r = resolved(poly);
    Json out;
    out["dim"] = r.dim;
    out["nonneg"] = r.nonneg;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json jr;
        jr["coeffs"] = vec_to_json(row.a);
        jr["bound"] = rat_str(row.b);
        rows.push_back(std::move(jr));
    }
    out["rows"] = std::move(rows);
    return out;
}

namespace {

const PriorSet& need_priors(const Scenario& sc) {
    if (!sc.priors) throw input_error("scenario has no priors block");
    return *sc.priors;
}

const RobustSet& need_set(const Scenario& sc, const std::string& name) {
    auto it = sc.sets.find(name);
    if (it == sc.sets.end()) throw input_error("scenario has no set named '" + name + "'");
    return it->second;
}

std::vector<ProbabilityMeasure> resolve_qset(const Scenario& sc, const std::string& spec) {
    const PriorSet& priors = need_priors(sc);
    if (spec == "diracs") return dirac_alternative(priors);
    if (spec == "priors") return priors.generators;
    if (spec.rfind("file:", 0) == 0) {
        std::ifstream in(spec.substr(5));
        if (!in) throw input_error("cannot open qset file '" + spec.substr(5) + "'");
        Json j = Json::parse(in, nullptr, true, true);
        std::vector<ProbabilityMeasure> qs;
        for (const auto& row : j) {
            Vec w = jvec(row, spec);
            qs.emplace_back(std::move(w));
        }
        return qs;
    }
    auto it = sc.qsets.find(spec);
    if (it == sc.qsets.end()) throw input_error("unknown qset '" + spec + "'");
    return it->second;
}

Vec parse_point(const std::string& spec, int want_dim) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : spec) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (!isspace((unsigned char)ch)) {
            cur += ch;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    Vec v = vec_parse(parts);
    if ((int)v.size() != want_dim)
        throw input_error("point needs " + std::to_string(want_dim) + " coordinates");
    return v;
}

void emit_table(const Json& j, std::ostream& os, int indent = 0) {
    const std::string pad(indent, ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_object() || v.is_array()) {
                os << pad << k << ":\n";
                emit_table(v, os, indent + 2);
            } else {
                os << pad << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump())
                   << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_object() || v.is_array()) {
                os << pad << "-\n";
                emit_table(v, os, indent + 2);
            } else {
                os << pad << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            }
        }
    } else {
        os << pad << j.dump() << "\n";
    }
}

// The CLI re-verifies every witness it is about to print; the fault flag
// corrupts the report first so the re-verification path itself is testable.
void reverify_bipolar_report(const RobustSet& s, const RobustSet& bip, BipolarReport& rep,
                             bool inject_fault) {
    if (inject_fault) {
        Vec bogus = zeros(s.qdim());
        rep.witness = bogus;  // zero is in every bipolar; claimed to escape S
    }
    if (rep.witness) {
        if (rep.equal) throw internal_error("report carries a witness but claims equality");
        if (!set_member(bip, *rep.witness) || set_member(s, *rep.witness))
            throw internal_error("emitted witness failed re-verification");
    }
}

}  // namespace

int run_command(const std::string& command, const CliOptions& opts, std::string* out_report) {
    auto t0 = std::chrono::steady_clock::now();
    Scenario sc = load_scenario(opts.scenario_path);
    Json rep;
    rep["command"] = command;
    if (!sc.name.empty()) rep["scenario"] = sc.name;
    int exit_code = 0;

    if (command == "polar") {
        const RobustSet& s = need_set(sc, opts.set_name);
        if (opts.form == "ca") {
            rep["polar_ca"] = poly_to_json(polar_ca(s).poly);
        } else if (opts.form == "ks") {
            KsPolar kp = polar_ks(s, resolve_qset(sc, opts.qset_spec));
            Json entries = Json::array();
            for (const auto& e : kp.entries) {
                Json je;
                je["q"] = vec_to_json(e.q.weights);
                je["feasible_z"] = poly_to_json(e.feasible_z);
                entries.push_back(std::move(je));
            }
            rep["polar_ks"] = std::move(entries);
        } else {
            throw input_error("unknown polar form '" + opts.form + "'");
        }
    } else if (command == "bipolar") {
        const RobustSet& s = need_set(sc, opts.set_name);
        RobustSet b = [&] {
            if (opts.route == "ca") return bipolar_ca(s);
            auto qs = resolve_qset(sc, opts.qset_spec);
            if (opts.route == "lifted") return bipolar_lifted(s, qs);
            if (opts.route == "diamond") return bipolar_diamond(s, qs);
            if (opts.route == "star") return bipolar_star_disjoint(s, qs);
            throw input_error("unknown bipolar route '" + opts.route + "'");
        }();
        rep["route"] = opts.route;
        rep["bipolar"] = poly_to_json(*b.poly);
        if (!opts.point.empty()) {
            Vec x = parse_point(opts.point, s.qdim());
            bool inside = set_member(b, x);
            rep["point"] = vec_to_json(x);
            rep["member"] = inside;
            if (!inside) {
                auto mu = refute_membership(s, x);
                if (!mu) throw internal_error("non-member without a separating measure");
                if (opts.inject_certificate_fault) (*mu)[0] += 1;
                if (dot(*mu, x) <= 1)
                    throw internal_error("emitted certificate failed re-verification");
                auto sup = lp_optimize(*mu, member_poly(bipolar_ca(s)), Sense::maximize);
                if (sup.status != LpStatus::optimal || sup.value > 1)
                    throw internal_error("emitted certificate failed re-verification");
                rep["certificate"] = vec_to_json(*mu);
            }
        }
    } else if (command == "check-bipolar") {
        const RobustSet& s = need_set(sc, opts.set_name);
        auto qs = resolve_qset(sc, opts.qset_spec);
        BipolarReport br = check_bipolar_theorem(s, qs);
        RobustSet bip = bipolar_lifted(s, qs);
        reverify_bipolar_report(s, bip, br, opts.inject_certificate_fault);
        rep["equal"] = br.equal;
        rep["properties"] = Json{{"convex", br.properties.convex},
                                 {"solid", br.properties.solid},
                                 {"closed", br.properties.closed},
                                 {"sensitive", br.properties.sensitive}};
        if (br.witness) rep["witness"] = vec_to_json(*br.witness);
        exit_code = br.equal ? 0 : 1;
    } else if (command == "sensitivity") {
        const RobustSet& s = need_set(sc, opts.set_name);
        auto qs = resolve_qset(sc, opts.qset_spec);
        SensitivityReport sr = is_sensitive(s, qs);
        if (opts.inject_certificate_fault) sr.witness = zeros(s.qdim());
        rep["sensitive"] = sr.sensitive;
        if (sr.envelope.polyhedral()) rep["envelope"] = poly_to_json(*sr.envelope.poly);
        if (sr.witness) {
            if (!set_member(sr.envelope, *sr.witness) || set_member(s, *sr.witness))
                throw internal_error("emitted witness failed re-verification");
            rep["witness"] = vec_to_json(*sr.witness);
        }
        exit_code = sr.sensitive ? 0 : 1;
    } else if (command == "aggregate") {
        const PriorSet& priors = need_priors(sc);
        auto it = sc.families.find(opts.family);
        if (it == sc.families.end())
            throw input_error("scenario has no family named '" + opts.family + "'");
        const auto& [fam, fill] = it->second;
        CoherenceReport cr = is_coherent(priors, fam);
        rep["coherent"] = cr.coherent;
        if (cr.coherent) {
            QsClass agg = build_aggregator(priors, fam, fill);
            rep["aggregator"] = vec_to_json(agg.coords);
        } else {
            auto [i, j, atom] = *cr.conflict;
            rep["conflict"] = Json{{"entry_a", i}, {"entry_b", j},
                                   {"atom", priors.space.atoms[atom]}};
            exit_code = 1;
        }
    } else if (command == "superhedge") {
        if (!sc.market) throw input_error("scenario has no market block");
        RobustSet c = superhedge_set(*sc.market);
        DualMartingaleReport dm = verify_dual_martingale(*sc.market);
        rep["superhedge"] = poly_to_json(*c.poly);
        Json verts = Json::array();
        for (const auto& v : vertex_enumerate(dm.martingale_polytope)) verts.push_back(vec_to_json(v));
        rep["martingale_vertices"] = std::move(verts);
        rep["polar_matches_martingale"] = dm.match;
        if (dm.counterexample) rep["counterexample"] = vec_to_json(*dm.counterexample);
        exit_code = dm.match ? 0 : 1;
    } else if (command == "transport") {
        if (!sc.transport) throw input_error("scenario has no transport block");
        TransportReport tr = check_no_gap(sc.transport->goal, sc.transport->model, sc.transport->sys);
        MarginalPolarReport mp = marginal_polar_identity(sc.transport->model, sc.transport->sys);
        rep["primal_value"] = rat_str(tr.primal_value);
        rep["dual_value"] = rat_str(tr.dual_value);
        rep["gap_zero"] = tr.gap_zero;
        rep["degenerate"] = tr.degenerate;
        rep["c_equals_d"] = tr.c_equals_d;
        rep["polar_identity"] = tr.polar_identity;
        rep["optimal_mu"] = vec_to_json(tr.optimal_mu);
        rep["optimal_x1"] = vec_to_json(tr.optimal_x1);
        rep["optimal_x2"] = vec_to_json(tr.optimal_x2);
        rep["marginal_identity_probes"] = mp.probes;
    } else if (command == "oracle") {
        const RobustSet& s = need_set(sc, opts.set_name);
        Vec x = parse_point(opts.point, s.qdim());
        OracleSetDescription desc;
        if (s.polyhedral())
            desc.constraints = member_poly(s);
        else
            desc.generators = s.points;
        bool oracle_says = oracle_membership(desc, x, opts.max_denominator);
        bool main_says = set_member(bipolar_ca(s), x);
        rep["point"] = vec_to_json(x);
        rep["member"] = oracle_says;
        rep["agrees_with_bipolar"] = (oracle_says == main_says);
        exit_code = (oracle_says == main_says) ? 0 : 1;
    } else {
        throw input_error("unknown command '" + command + "'");
    }

    std::ostringstream os;
    if (opts.output == "table")
        emit_table(rep, os);
    else
        os << rep.dump(2) << "\n";
    *out_report = os.str();

    if (opts.timing) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        std::cerr << "wall_ms=" << ms << "\n";
    }
    return exit_code;
}

}  // namespace rbp
