#include "pmtomo/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pmtomo/acceptance.hpp"
#include "pmtomo/deconv.hpp"
#include "pmtomo/errors.hpp"
#include "pmtomo/husimi.hpp"
#include "pmtomo/inference.hpp"
#include "pmtomo/io.hpp"
#include "pmtomo/pomalg.hpp"
#include "pmtomo/sampling.hpp"

namespace pmtomo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Descriptors

template <class T>
T get(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

Complex parse_complex(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError("complex numbers are given as a number or [re, im]");
}

AnalyticProbe parse_probe(const json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "gaussian") return AnalyticProbe::gaussian(get(j, "n", 1.0));
    if (type == "chirped") return AnalyticProbe::chirped(j.at("a").get<double>(), j.at("b").get<double>());
    if (type == "number_basis") return AnalyticProbe::number_basis(parse_state(j.at("state")));
    throw ConfigError("unknown probe type '" + type + "' (gaussian, chirped, number_basis)");
}

GeneratingOperator parse_sigma(const json& j) {
    if (j.is_string() && j.get<std::string>() == "vacuum") return GeneratingOperator::vacuum();
    if (j.is_object() && j.contains("components")) {
        std::vector<GeneratingOperator::Component> comps;
        for (const auto& c : j.at("components"))
            comps.push_back({c.at("weight").get<double>(), parse_state(c.at("state"))});
        return GeneratingOperator(std::move(comps));
    }
    return GeneratingOperator::pure(parse_state(j));
}

std::size_t coherent_dim(Complex z) {
    const double r = std::abs(z);
    return static_cast<std::size_t>(std::ceil(r * r + 10.0 * r + 30.0));
}

Grid parse_grid(const json& j) {
    const auto points = j.at("points").get<std::size_t>();
    if (points % 2 == 0) throw ConfigError("grid.points must be odd so that the origin is a node");
    return Grid::symmetric(j.at("half_width").get<double>(), points);
}

// Maps library and JSON errors raised while reading a config to ConfigError.
template <class F>
auto as_config_error(const char* what, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Output helpers

class Outputs {
  public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    void json_file(const std::string& name, const json& j) {
        io::write_json_file(dir_ / name, j);
        files_.push_back(name);
    }

    template <class Writer>
    void text_file(const std::string& name, Writer&& w) {
        std::ostringstream os;
        w(os);
        io::write_text_file(dir_ / name, os.str());
        files_.push_back(name);
    }

    const std::vector<std::string>& files() const { return files_; }

  private:
    fs::path dir_;
    std::vector<std::string> files_;
};

const ModelSpec& need_model(const ExperimentConfig& c, const std::string& cmd) {
    if (!c.model) throw ConfigError(cmd + " needs a 'model' descriptor");
    return *c.model;
}

const StateVector& need_state(const ExperimentConfig& c, const std::string& cmd) {
    if (!c.state) throw ConfigError(cmd + " needs a 'state' descriptor");
    return *c.state;
}

Grid grid_for(const ExperimentConfig& c, const StateVector& s) { return c.grid ? *c.grid : default_grid(s.dim()); }

std::vector<double> exact_moments(const StateVector& s, Axis axis, int K) {
    std::vector<double> m(K + 1);
    for (int k = 0; k <= K; ++k) m[k] = exact_moment(s, axis, k);
    return m;
}

json table_json(const CoefficientTable& t) { return {{"k_max", t.k_max}, {"sQ", t.sQ}, {"sP", t.sP}}; }

// ---------------------------------------------------------------------------
// Commands

bool cmd_simulate(const ExperimentConfig& c, Outputs& out) {
    const auto& model = need_model(c, "simulate");
    const auto& state = need_state(c, "simulate");
    json moments{{"model", model.name()}, {"k_max", c.k_max}};
    moments["exact"] = {{"Q", exact_moments(state, Axis::Q, c.k_max)}, {"P", exact_moments(state, Axis::P, c.k_max)}};

    if (const auto* h = std::get_if<BalancedHomodyne>(&model.variant())) {
        const auto q = homodyne_moment12(state, h->r, h->theta);
        const auto u = uncertainty_product(state, h->r);
        moments["homodyne"] = {{"theta", h->theta}, {"m1", q.m1}, {"m2", q.m2}, {"uncertainty_product", u.product},
                               {"bound_ok", u.bound_ok}};
        out.json_file("moments.json", moments);
        return true;
    }

    const Grid grid = grid_for(c, state);
    const auto [f, g] = detector_kernels(model, grid);
    const auto rq = position_density(state, grid);
    const auto rp = momentum_density(state, grid);
    const auto mq = measured_marginal_density(model, state, Axis::Q, grid);
    const auto mp = measured_marginal_density(model, state, Axis::P, grid);
    out.text_file("densities.csv", [&](std::ostream& os) {
        io::write_densities_csv(os, grid, {"rho_q", "rho_p", "kernel_q", "kernel_p", "measured_q", "measured_p"},
                                {rq.values, rp.values, f.values, g.values, mq.values, mp.values});
    });
    moments["measured"] = {{"Q", measured_moments(model, state, Axis::Q, c.k_max)},
                           {"P", measured_moments(model, state, Axis::P, c.k_max)}};
    moments["table"] = table_json(coefficient_table(model, c.k_max));
    out.json_file("moments.json", moments);

    if (c.samples > 0) {
        for (Axis axis : {Axis::Q, Axis::P}) {
            const auto& d = axis == Axis::Q ? mq : mp;
            auto s = sample_outcomes(d, c.samples, c.seed + (axis == Axis::Q ? 0 : 1));
            s.source = model.name() + " measured " + to_string(axis);
            out.text_file(std::string("samples_") + (axis == Axis::Q ? "q" : "p") + ".csv",
                          [&](std::ostream& os) { write_samples_csv(os, s); });
        }
    }
    return true;
}

bool cmd_recover(const ExperimentConfig& c, Outputs& out) {
    const auto& model = need_model(c, "recover");
    const auto& state = need_state(c, "recover");
    const auto table = coefficient_table(model, c.k_max);
    std::optional<Grid> grid;
    if (c.samples > 0) grid = grid_for(c, state);

    json report{{"model", model.name()}, {"k_max", c.k_max}, {"samples", c.samples},
                {"source", c.samples > 0 ? "empirical" : "analytic"}};
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    for (Axis axis : {Axis::Q, Axis::P}) {
        const std::string a = axis == Axis::Q ? "q" : "p";
        MomentSequence measured;
        if (c.samples > 0) {
            const auto d = measured_marginal_density(model, state, axis, *grid);
            measured = empirical_moments(sample_outcomes(d, c.samples, c.seed + (axis == Axis::Q ? 0 : 1)), c.k_max);
        } else {
            measured = MomentSequence::exact(measured_moments(model, state, axis, c.k_max));
        }
        const auto recovered = recover_moments(measured, table, axis);
        const auto exact = exact_moments(state, axis, c.k_max);

        json entry{{"measured", io::to_json(measured)}, {"recovered", io::to_json(recovered)}, {"exact", exact}};
        entry["above_reliability_ceiling"] = measured.above_reliability_ceiling;
        if (c.k_max >= 6) {
            entry["hankel"] = io::to_json(hankel_check(recovered));
            entry["determinacy"] = io::to_json(determinacy_check(recovered));
        } else {
            entry["determinacy"] = {{"skipped", "needs k_max >= 6"}};
        }
        report[to_string(axis)] = entry;

        names.insert(names.end(), {"exact_" + a, "measured_" + a, "recovered_" + a});
        columns.insert(columns.end(), {exact, measured.m, recovered.m});
        if (recovered.has_errors()) {
            names.insert(names.end(), {"measured_se_" + a, "recovered_se_" + a});
            columns.insert(columns.end(), {measured.se, recovered.se});
        }
    }
    out.text_file("moments.csv", [&](std::ostream& os) { io::write_moment_table_csv(os, names, columns); });
    out.json_file("recover.json", report);
    return true;
}

bool is_vacuum_kernel(const GridDensity& k) {
    double peak = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < k.grid.points; ++i) {
        const double x = k.grid.at(i);
        const double ref = std::exp(-x * x) / std::sqrt(std::numbers::pi);
        peak = std::max(peak, ref);
        diff = std::max(diff, std::abs(k.values[i] - ref));
    }
    return diff <= 1e-10 * peak;
}

bool cmd_deconvolve(const ExperimentConfig& c, Outputs& out) {
    const auto& model = need_model(c, "deconvolve");
    const auto& state = need_state(c, "deconvolve");
    const Grid grid = grid_for(c, state);
    const auto [f, g] = detector_kernels(model, grid);

    json report{{"model", model.name()}, {"eps", c.deconv.eps}, {"order", c.deconv.order}};
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    for (Axis axis : {Axis::Q, Axis::P}) {
        const std::string a = axis == Axis::Q ? "q" : "p";
        const auto& kernel = axis == Axis::Q ? f : g;
        const auto truth = axis == Axis::Q ? position_density(state, grid) : momentum_density(state, grid);
        const auto measured = measured_marginal_density(model, state, axis, grid);
        const auto fourier = fourier_deconvolve_full(measured, kernel, c.deconv.eps);
        json entry{{"fourier_l1", l1_distance(fourier.density, truth)},
                   {"floored_fraction", fourier.floored_fraction}};
        names.insert(names.end(), {"true_" + a, "measured_" + a, "fourier_" + a});
        columns.insert(columns.end(), {truth.values, measured.values, fourier.density.values});
        if (is_vacuum_kernel(kernel)) {
            const auto diff = gaussian_differential_deconvolve_full(measured, c.deconv.order);
            entry["differential_l1"] = l1_distance(diff.density, truth);
            entry["routes_l1"] = l1_distance(diff.density, fourier.density);
            entry["term_norms"] = diff.term_norms;
            names.push_back("differential_" + a);
            columns.push_back(diff.density.values);
        } else {
            entry["differential_l1"] = nullptr;
            entry["differential_skipped"] = "kernel is not the vacuum density exp(-x^2)/sqrt(pi)";
        }
        report[to_string(axis)] = entry;
    }
    out.text_file("deconvolved.csv", [&](std::ostream& os) { io::write_densities_csv(os, grid, names, columns); });
    out.json_file("deconv.json", report);
    return true;
}

bool cmd_husimi(const ExperimentConfig& c, Outputs& out) {
    const auto& state = need_state(c, "husimi");
    const auto rho = DensityMatrix::pure(state);
    const double r_max = c.husimi.r_max.value_or(std::sqrt(static_cast<double>(state.dim())) + 6.0);
    const std::size_t r_points = c.husimi.r_points.value_or(static_cast<std::size_t>(std::ceil(40.0 * r_max)) + 1);
    const auto q = husimi_q(rho, radial_nodes(r_max, r_points), angular_nodes(c.husimi.theta_points));
    out.text_file("husimi_q.csv", [&](std::ostream& os) { io::write_polar_csv(os, q); });

    ReconstructionOptions opt;
    opt.r_fit = c.husimi.r_fit;
    const int top = c.husimi.max_order;
    const std::size_t dim = static_cast<std::size_t>(top) + 1;
    json re(json::array()), im(json::array()), errors(json::array());
    std::vector<std::vector<json>> rr(dim, std::vector<json>(dim)), ii(dim, std::vector<json>(dim));
    double worst = 0.0;
    for (int n = 0; n <= top; ++n)
        for (int m = 0; n + m <= top; ++m) {
            const Complex est = reconstruct_element(q, n, m - n, opt);
            const Complex exact = rho(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
            rr[n][m] = est.real();
            ii[n][m] = est.imag();
            const double e = std::abs(est - exact);
            worst = std::max(worst, e);
            errors.push_back({{"n", n}, {"m", m}, {"abs_error", e}});
        }
    for (std::size_t n = 0; n < dim; ++n) {
        re.push_back(rr[n]);
        im.push_back(ii[n]);
    }
    out.json_file("reconstructed.json", {{"r_max", r_max},
                                         {"r_points", r_points},
                                         {"theta_points", c.husimi.theta_points},
                                         {"polar_mass", polar_mass(q)},
                                         {"reconstructed", {{"dim", dim}, {"real", re}, {"imag", im}}},
                                         {"exact", io::to_json(rho)},
                                         {"errors", errors},
                                         {"max_abs_error", worst}});
    return true;
}

bool cmd_lemma(const ExperimentConfig& c, Outputs& out) {
    json rows = json::array();
    bool all = true;
    CounterRng shape(c.seed, 1u << 20);
    for (std::size_t i = 0; i < c.lemma.constructions; ++i) {
        const std::size_t dim = 2 + i % 3;
        const std::size_t r = 1 + shape() % 4;
        const std::size_t k = 1 + shape() % 4;
        const auto rep = verify_lemma1(random_projective_product_pom(dim, r, k, c.seed, i));
        all = all && rep.pass;
        rows.push_back({{"index", i}, {"dim", dim}, {"rows", r}, {"cols", k}, {"report", io::to_json(rep)}});
    }
    const auto adv = adversarial_search(c.lemma.attempts, c.seed + 1);
    const bool pass = all && adv.counterexamples == 0;
    out.json_file("lemma.json", {{"pass", pass},
                                 {"constructions", rows},
                                 {"adversarial", io::to_json(adv, c.lemma.log)}});
    return pass;
}

bool cmd_report(const ExperimentConfig& c, Outputs& out) {
    acceptance::Options opt;
    if (c.seed_set) opt.seed = c.seed;
    if (c.statistical_samples) opt.statistical_samples = *c.statistical_samples;
    opt.lemma_constructions = c.lemma.constructions;
    opt.adversarial_attempts = c.lemma.attempts;
    std::vector<int> ids = c.criteria;
    if (ids.empty())
        for (int i = 1; i <= acceptance::kCriterionCount; ++i) ids.push_back(i);
    json list = json::array();
    bool all = true;
    for (const auto& r : acceptance::run_all(ids, opt)) {
        all = all && r.pass;
        list.push_back(acceptance::to_json(r));
    }
    out.json_file("report.json", {{"all_pass", all}, {"seed", opt.seed}, {"criteria", list}});
    return all;
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

// ---------------------------------------------------------------------------

ModelSpec parse_model(const json& j) {
    return as_config_error("model", [&] {
        const auto type = j.at("type").get<std::string>();
        if (type == "SequentialVN")
            return ModelSpec::sequential_vn(j.at("lambda").get<double>(), parse_probe(j.at("probe")));
        if (type == "ArthursKelly")
            return ModelSpec::arthurs_kelly(j.at("lambda").get<double>(), j.at("mu").get<double>(),
                                            parse_probe(j.at("probe1")), parse_probe(j.at("probe2")));
        if (type == "EightPort") return ModelSpec::eight_port(parse_sigma(j.contains("sigma") ? j.at("sigma") : json("vacuum")));
        if (type == "BalancedHomodyne")
            return ModelSpec::balanced_homodyne(j.at("r").get<double>(), get(j, "theta", 0.0));
        throw ConfigError("unknown model type '" + type +
                          "' (SequentialVN, ArthursKelly, EightPort, BalancedHomodyne)");
    });
}

StateVector parse_state(const json& j) {
    return as_config_error("state", [&] {
        if (j.is_string() && j.get<std::string>() == "vacuum") return StateVector::number(0);
        const auto type = j.at("type").get<std::string>();
        if (type == "number") return StateVector::number(j.at("n").get<std::size_t>(), get<std::size_t>(j, "dim", 0));
        if (type == "fock") {
            std::vector<Complex> c;
            for (const auto& x : j.at("coefficients")) c.push_back(parse_complex(x));
            return StateVector::normalized(std::move(c));
        }
        if (type == "coherent") {
            const Complex z(get(j, "re", 0.0), get(j, "im", 0.0));
            return StateVector::coherent(z, get<std::size_t>(j, "dim", coherent_dim(z)));
        }
        if (type == "chirped")
            return StateVector::chirped_gaussian(j.at("a").get<double>(), j.at("b").get<double>(),
                                                 get<std::size_t>(j, "dim", 80));
        throw ConfigError("unknown state type '" + type + "' (number, fock, coherent, chirped)");
    });
}

ExperimentConfig parse_config(const json& doc) {
    return as_config_error("config", [&] {
        if (!doc.is_object()) throw ConfigError("config must be a JSON object");
        static const std::vector<std::string> known = {"model", "state", "k_max", "samples", "seed", "grid",
                                                       "outputs", "deconv", "husimi", "lemma", "criteria",
                                                       "statistical_samples", "description"};
        for (const auto& [key, value] : doc.items())
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw ConfigError("unknown config key '" + key + "'");
        ExperimentConfig c;
        c.source = doc;
        if (doc.contains("model")) c.model = parse_model(doc.at("model"));
        if (doc.contains("state")) c.state = parse_state(doc.at("state"));
        c.k_max = get(doc, "k_max", c.k_max);
        if (c.k_max < 0 || c.k_max > kMaxTableOrder)
            throw ConfigError("k_max must lie in [0, " + std::to_string(kMaxTableOrder) + "]");
        c.samples = get<std::size_t>(doc, "samples", 0);
        c.seed = get<std::uint64_t>(doc, "seed", c.seed);
        c.seed_set = doc.contains("seed");
        if (doc.contains("grid")) c.grid = parse_grid(doc.at("grid"));
        c.outputs = get<std::string>(doc, "outputs", c.outputs.string());
        if (doc.contains("deconv")) {
            const auto& d = doc.at("deconv");
            c.deconv.eps = get(d, "eps", c.deconv.eps);
            c.deconv.order = get(d, "order", c.deconv.order);
        }
        if (doc.contains("husimi")) {
            const auto& h = doc.at("husimi");
            if (h.contains("r_max")) c.husimi.r_max = h.at("r_max").get<double>();
            if (h.contains("r_points")) c.husimi.r_points = h.at("r_points").get<std::size_t>();
            c.husimi.theta_points = get(h, "theta_points", c.husimi.theta_points);
            c.husimi.max_order = get(h, "max_order", c.husimi.max_order);
            c.husimi.r_fit = get(h, "r_fit", c.husimi.r_fit);
        }
        if (doc.contains("lemma")) {
            const auto& l = doc.at("lemma");
            c.lemma.constructions = get(l, "constructions", c.lemma.constructions);
            c.lemma.attempts = get(l, "attempts", c.lemma.attempts);
            c.lemma.log = get(l, "log", c.lemma.log);
        }
        if (doc.contains("criteria")) {
            c.criteria = doc.at("criteria").get<std::vector<int>>();
            for (int id : c.criteria)
                if (id < 1 || id > acceptance::kCriterionCount)
                    throw ConfigError("no acceptance criterion " + std::to_string(id));
        }
        if (doc.contains("statistical_samples")) c.statistical_samples = doc.at("statistical_samples").get<std::size_t>();
        return c;
    });
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

CommandResult run_command(const std::string& command, const ExperimentConfig& config) {
    Outputs out(config.outputs);
    bool ok = true;
    if (command == "simulate")
        ok = cmd_simulate(config, out);
    else if (command == "recover")
        ok = cmd_recover(config, out);
    else if (command == "deconvolve")
        ok = cmd_deconvolve(config, out);
    else if (command == "husimi")
        ok = cmd_husimi(config, out);
    else if (command == "lemma")
        ok = cmd_lemma(config, out);
    else if (command == "report")
        ok = cmd_report(config, out);
    else
        throw ConfigError("unknown command '" + command + "'");

    // The timestamp sits on its own line; everything else is a pure function
    // of the config and seed.
    json manifest{{"command", command}, {"seed", config.seed}, {"files", out.files()}, {"success", ok},
                  {"config", config.source}};
    manifest["generated_at"] = utc_timestamp();
    io::write_json_file(config.outputs / "manifest.json", manifest);
    return {out.files(), ok};
}

} // namespace pmtomo
