// fidelity: maximum-fidelity statistical inference from the command line.
//
// Subcommands: gof, fit, landscape, ttest, twosample, binary, binned, gof2d,
// null-table, experiment. JSON (schema "fidelity/1") on stdout or --out.
// Exit codes: 0 ok, 2 usage error, 3 data error (ties/support violations),
// 4 no acceptable fit.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "fidelity/discrete_data.hpp"
#include "fidelity/estimation.hpp"
#include "fidelity/experiments.hpp"
#include "fidelity/io.hpp"
#include "fidelity/multidim.hpp"
#include "fidelity/twosample.hpp"
#include <json.hpp>

using nlohmann::json;
namespace fid = fidelity;

namespace {

json num(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fid::io::round12(v);
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw fid::data_error("cannot write " + out_path);
        out << j.dump(2) << "\n";
    }
}

json report_json(const fid::FidelityReport& rep) {
    json j{{"schema", "fidelity/1"},
           {"f", num(rep.f)},
           {"p", num(rep.p)},
           {"n", rep.n},
           {"geometry", rep.geometry}};
    if (!rep.warnings.empty()) j["warnings"] = rep.warnings;
    if (!rep.composition.empty()) {
        json comp = json::array();
        for (const auto& c : rep.composition) {
            comp.push_back({{"f", num(c.f)}, {"n", c.n}, {"geometry", fid::to_string(c.geometry)}});
        }
        j["composition"] = comp;
    }
    return j;
}

json params_json(const fid::ParamMap& p) {
    json j;
    for (const auto& [k, v] : p) j[k] = num(v);
    return j;
}

fid::Sample load_sample(const std::string& path, const std::string& column,
                        const fid::ModelDistribution& model) {
    auto values = fid::io::read_data(
        path, column.empty() ? std::nullopt : std::optional<std::string>(column));
    return fid::Sample(std::move(values), model.geometry());
}

// "name=lo:hi:count[:log]" per axis, comma separated between axes
fid::ParamBox parse_grid(const std::string& text, int default_res) {
    fid::ParamBox box;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("grid: expected name=lo:hi[:count[:log]], got '" +
                                        item + "'");
        }
        fid::AxisSpec ax;
        ax.name = item.substr(0, eq);
        ax.resolution = default_res;
        std::string rest = item.substr(eq + 1);
        std::istringstream parts(rest);
        std::string tok;
        std::vector<std::string> toks;
        while (std::getline(parts, tok, ':')) toks.push_back(tok);
        if (toks.size() < 2) {
            throw std::invalid_argument("grid: axis '" + ax.name + "' needs lo:hi");
        }
        ax.lower = std::stod(toks[0]);
        ax.upper = std::stod(toks[1]);
        if (toks.size() >= 3 && !toks[2].empty()) ax.resolution = std::stoi(toks[2]);
        if (toks.size() >= 4 && toks[3] == "log") ax.scale = fid::AxisScale::log;
        box.axes.push_back(ax);
    }
    if (box.axes.empty()) throw std::invalid_argument("grid: no axes given");
    return box;
}

int exit_code_for(const fid::FidelityReport& rep) {
    return rep.warnings.empty() ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximum-fidelity statistical inference"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string out_path;
    app.add_option("--out", out_path, "write JSON output to a file instead of stdout")
        ->capture_default_str();
    int threads = 0;
    app.add_option("--threads", threads,
                   "worker threads (default: machine parallelism; results do not depend on it)");

    // ---- gof ----
    auto* gof = app.add_subcommand("gof", "concordance of a model with data");
    gof->configurable()->fallthrough();
    std::string gof_model, gof_data, gof_column;
    gof->add_option("--model", gof_model, "model spec, e.g. family=gauss,beta=0,alpha=1")
        ->required();
    gof->add_option("--data", gof_data, "data file (one number per line, or CSV)")->required();
    gof->add_option("--column", gof_column, "CSV column name");

    // ---- fit ----
    auto* fitc = app.add_subcommand("fit", "fidelity-maximizing parameter estimation");
    fitc->configurable()->fallthrough();
    std::string fit_model, fit_data, fit_column, fit_params, fit_box, fit_stat = "fidelity";
    fitc->add_option("--model", fit_model, "model spec with initial parameter values")
        ->required();
    fitc->add_option("--fit", fit_params, "comma list of parameters to fit (e.g. mu,sigma)")
        ->required();
    fitc->add_option("--data", fit_data, "data file")->required();
    fitc->add_option("--column", fit_column, "CSV column name");
    fitc->add_option("--box", fit_box, "explicit boxes name=lo:hi[:count[:log]],...");
    fitc->add_option("--statistic", fit_stat, "statistic to extremize (default fidelity)");

    // ---- landscape ----
    auto* land = app.add_subcommand("landscape", "concordance over a parameter grid");
    land->configurable()->fallthrough();
    std::string land_model, land_data, land_column, land_grid, land_out;
    land->add_option("--model", land_model)->required();
    land->add_option("--grid", land_grid, "axes, e.g. mu=-2:2:101,sigma=0.2:3:101")->required();
    land->add_option("--data", land_data)->required();
    land->add_option("--column", land_column);
    land->add_option("--tsv", land_out, "landscape TSV path (default stdout)");

    // ---- ttest ----
    auto* tt = app.add_subcommand("ttest", "generalized two-dataset model comparison");
    tt->configurable()->fallthrough();
    std::string tt_m1, tt_m2, tt_a, tt_b, tt_share;
    tt->add_option("--model1", tt_m1)->required();
    tt->add_option("--model2", tt_m2)->required();
    tt->add_option("--a", tt_a, "first data file")->required();
    tt->add_option("--b", tt_b, "second data file")->required();
    tt->add_option("--share", tt_share, "comma list of shared parameters (rest separate)");

    // ---- twosample ----
    auto* ts = app.add_subcommand("twosample", "nonparametric two-sample fidelity test");
    ts->configurable()->fallthrough();
    std::string ts_a, ts_b;
    std::size_t ts_replicates = 20000;
    std::uint64_t ts_seed = 0;
    bool ts_seed_set = false;
    ts->add_option("--a", ts_a)->required();
    ts->add_option("--b", ts_b)->required();
    ts->add_option("--null-replicates", ts_replicates, "null Monte Carlo replicates");
    ts->add_option("--seed", ts_seed, "null-build RNG seed (required)")
        ->each([&](const std::string&) { ts_seed_set = true; });

    // ---- binary ----
    auto* bin = app.add_subcommand("binary", "binomial cumulative inference");
    bin->configurable()->fallthrough();
    std::int64_t bin_n = 0, bin_k = 0;
    double bin_level = 0.90;
    std::string bin_mode = "midpoint";
    bin->add_option("--n", bin_n, "trial count")->required();
    bin->add_option("--k", bin_k, "success count")->required();
    bin->add_option("--level", bin_level, "interval level (default 0.90)");
    bin->add_option("--mode", bin_mode, "midpoint|exact");

    // ---- binned ----
    auto* bnd = app.add_subcommand("binned", "fidelity inference for binned data");
    bnd->configurable()->fallthrough();
    std::string bnd_model, bnd_data;
    std::size_t bnd_replicates = 999;
    std::uint64_t bnd_seed = 0;
    bool bnd_seed_set = false, bnd_estimate = false;
    bnd->add_option("--model", bnd_model)->required();
    bnd->add_option("--data", bnd_data, "CSV rows: edge_lo,edge_hi,count")->required();
    bnd->add_option("--replicates", bnd_replicates);
    bnd->add_option("--seed", bnd_seed)->each([&](const std::string&) { bnd_seed_set = true; });
    bnd->add_flag("--estimate", bnd_estimate, "deterministic estimate instead of the median method");

    // ---- gof2d ----
    auto* g2 = app.add_subcommand("gof2d", "2D concordance via inverse Monte Carlo");
    g2->configurable()->fallthrough();
    std::string g2_model, g2_data, g2_method = "r-theta";
    g2->add_option("--model", g2_model, "e.g. gauss2d:x0=7,y0=3,a=3,b=2,phi=1.0472")->required();
    g2->add_option("--data", g2_data, "CSV with columns x,y")->required();
    g2->add_option("--method", g2_method, "r-theta|model-xy|coordinate-xy");

    // ---- null-table ----
    auto* nt = app.add_subcommand("null-table", "emit mu, sigma, alpha, beta rows");
    nt->configurable()->fallthrough();
    std::string nt_geometry = "line", nt_list;
    std::size_t nt_n = 0;
    nt->add_option("--geometry", nt_geometry, "line|circle")->required();
    nt->add_option("--n", nt_n, "single n");
    nt->add_option("--n-list", nt_list, "comma list of n values");

    // ---- experiment ----
    auto* ex = app.add_subcommand("experiment", "scripted Monte Carlo experiments");
    ex->configurable()->fallthrough();
    std::string ex_name, ex_dir = ".", ex_overrides;
    std::uint64_t ex_seed = 0;
    bool ex_seed_set = false, ex_quick = false;
    std::size_t ex_realizations = 0;
    ex->add_option("--name", ex_name, "experiment name (see --list)")->required();
    ex->add_option("--seed", ex_seed)->each([&](const std::string&) { ex_seed_set = true; });
    ex->add_option("--out", ex_dir, "output directory")->required();
    ex->add_option("--realizations", ex_realizations);
    ex->add_flag("--quick", ex_quick, "reduced realizations for CI");
    ex->add_option("--overrides", ex_overrides, "key=value,key=value experiment overrides");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*gof) {
            const auto model = fid::ModelDistribution::parse(gof_model);
            const auto sample = load_sample(gof_data, gof_column, model);
            const auto rep = fid::concordance(model, sample);
            emit(report_json(rep), out_path);
            return exit_code_for(rep);
        }

        if (*fitc) {
            fid::ParamBox box;
            if (!fit_box.empty()) box = parse_grid(fit_box, 101);
            const auto model = fid::ModelDistribution::parse(fit_model);
            const auto sample = load_sample(fit_data, fit_column, model);
            const auto stat = fid::statistic_from_string(fit_stat);
            std::istringstream names(fit_params);
            std::string name;
            std::vector<std::string> fit_names;
            while (std::getline(names, name, ',')) fit_names.push_back(name);
            for (const auto& pname : fit_names) {
                const auto canon = fid::ModelDistribution::canonical_param(model.family(), pname);
                bool have = false;
                for (const auto& ax : box.axes) {
                    if (fid::ModelDistribution::canonical_param(model.family(), ax.name) == canon)
                        have = true;
                }
                if (!have) {
                    box.axes.push_back(fid::default_axis(model.family(), pname,
                                                         model.params().at(canon), sample));
                }
            }

            const auto res = fid::fit(stat, model.family(), model.params(), box, sample);
            json j{{"schema", "fidelity/1"},
                   {"statistic", fid::to_string(stat)},
                   {"params", params_json(res.params)},
                   {"statistic_value", num(res.statistic)},
                   {"f", num(res.f)},
                   {"p", num(res.p)},
                   {"evaluations", res.evaluations}};
            emit(j, out_path);
            return 0;
        }

        if (*land) {
            const auto grid = parse_grid(land_grid, 101);
            const auto model = fid::ModelDistribution::parse(land_model);
            const auto sample = load_sample(land_data, land_column, model);
            const auto ls = fid::landscape(model.family(), model.params(), grid, sample);

            std::ostream* os = &std::cout;
            std::ofstream file;
            const std::string dest = land_out.empty() ? out_path : land_out;
            if (!dest.empty()) {
                file.open(dest);
                if (!file) throw fid::data_error("cannot write " + dest);
                os = &file;
            }
            for (const auto& ax : ls.axes) *os << ax.name << '\t';
            *os << "f\tp\n";
            std::vector<std::size_t> idx(ls.axes.size(), 0);
            for (std::size_t cell = 0; cell < ls.cells(); ++cell) {
                std::size_t rem = cell;
                for (std::size_t d = ls.axes.size(); d-- > 0;) {
                    idx[d] = rem % ls.axes[d].resolution;
                    rem /= ls.axes[d].resolution;
                }
                for (std::size_t d = 0; d < ls.axes.size(); ++d) {
                    const auto& ax = ls.axes[d];
                    const double t = static_cast<double>(idx[d]) / (ax.resolution - 1);
                    const double v = ax.scale == fid::AxisScale::log
                                         ? ax.lower * std::pow(ax.upper / ax.lower, t)
                                         : ax.lower + (ax.upper - ax.lower) * t;
                    *os << fid::io::format_double(v, 12) << '\t';
                }
                *os << fid::io::format_double(ls.f[cell], 12) << '\t'
                    << fid::io::format_double(ls.p[cell], 12) << '\n';
            }
            return 0;
        }

        if (*tt) {
            const auto m1 = fid::ModelDistribution::parse(tt_m1);
            const auto m2 = fid::ModelDistribution::parse(tt_m2);
            const auto a = load_sample(tt_a, "", m1);
            const auto b = load_sample(tt_b, "", m2);

            fid::SharingSpec spec;
            for (const auto& pi : fid::ModelDistribution::param_info(m1.family())) {
                spec.shared[pi.name] = false;
            }
            std::istringstream in(tt_share);
            std::string name;
            while (std::getline(in, name, ',')) {
                if (name.empty()) continue;
                spec.shared[fid::ModelDistribution::canonical_param(m1.family(), name)] = true;
            }
            const auto res = fid::two_sample_fit(m1.family(), m1.params(), m2.family(),
                                                 m2.params(), spec, a, b);
            json j{{"schema", "fidelity/1"},
                   {"params1", params_json(res.params1)},
                   {"params2", params_json(res.params2)},
                   {"f1", num(res.f1)},
                   {"f2", num(res.f2)},
                   {"f_joint", num(res.f_joint)},
                   {"p1", num(res.p1)},
                   {"p2", num(res.p2)},
                   {"p_joint", num(res.p_joint)},
                   {"evaluations", res.evaluations}};
            emit(j, out_path);
            return 0;
        }

        if (*ts) {
            if (!ts_seed_set) throw fid::data_error("--seed is required for twosample");
            auto av = fid::io::read_data(ts_a);
            auto bv = fid::io::read_data(ts_b);
            const fid::Sample a(std::move(av), fid::Geometry::line());
            const fid::Sample b(std::move(bv), fid::Geometry::line());
            const auto res = fid::twosample_fidelity(a, b);

            const char* cache_env = std::getenv("FIDELITY_CACHE_DIR");
            const auto null = fid::cached_null(a.size(), b.size(), ts_replicates, ts_seed,
                                               cache_env ? cache_env : "");
            const double p = fid::twosample_p(res, null);
            json j{{"schema", "fidelity/1"}, {"f1", num(res.f1)}, {"f2", num(res.f2)},
                   {"f", num(res.f)},        {"n1", res.n1},      {"n2", res.n2},
                   {"p", num(p)},            {"null_replicates", null.replicates()}};
            if (!res.warnings.empty()) j["warnings"] = res.warnings;
            emit(j, out_path);
            return res.warnings.empty() ? 0 : 3;
        }

        if (*bin) {
            const double q_star = fid::solve_binary_q(bin_n, bin_k);
            const auto mode = bin_mode == "exact" ? fid::IntervalMode::exact
                                                  : fid::IntervalMode::midpoint;
            const auto iv = fid::binary_interval(bin_n, bin_k, bin_level, mode);
            const auto c = fid::binomial_cumulative(bin_n, q_star, bin_k);
            json j{{"schema", "fidelity/1"},
                   {"n", bin_n},
                   {"k", bin_k},
                   {"q_star", num(q_star)},
                   {"c_m_at", json{{"q", num(q_star)},
                                   {"c_l", num(c.c_l)},
                                   {"c_m", num(c.c_m)},
                                   {"c_h", num(c.c_h)}}},
                   {"interval", json{{"level", bin_level},
                                     {"mode", bin_mode},
                                     {"q_lo", num(iv.q_lo)},
                                     {"q_hi", num(iv.q_hi)},
                                     {"lo_one_sided", iv.lo_one_sided},
                                     {"hi_one_sided", iv.hi_one_sided}}}};
            emit(j, out_path);
            return 0;
        }

        if (*bnd) {
            const auto model = fid::ModelDistribution::parse(bnd_model);
            const auto data = fid::io::read_binned(bnd_data);
            json j{{"schema", "fidelity/1"}, {"n", static_cast<std::size_t>(data.total())}};
            if (bnd_estimate) {
                j["f_estimate"] = num(fid::binned_fidelity_estimate(model, data));
            } else {
                if (!bnd_seed_set) throw fid::data_error("--seed is required for the median method");
                fid::Rng rng(bnd_seed);
                const auto rep = fid::binned_fidelity_median(model, data, rng, bnd_replicates);
                j["f_median"] = num(rep.f);
                j["p"] = num(rep.p);
                j["replicates"] = bnd_replicates;
                if (!rep.warnings.empty()) j["warnings"] = rep.warnings;
                emit(j, out_path);
                return exit_code_for(rep);
            }
            emit(j, out_path);
            return 0;
        }

        if (*g2) {
            const auto model = fid::io::parse_model_2d(g2_model);
            const auto pts = fid::io::read_points_2d(g2_data);
            const auto method = fid::transform_method_from_string(g2_method);
            const auto rep = fid::concordance_2d(*model, pts, method);
            json j = report_json(rep);
            j["method"] = fid::to_string(method);
            emit(j, out_path);
            return exit_code_for(rep);
        }

        if (*nt) {
            const auto kind = nt_geometry == "circle" ? fid::Geometry::Kind::circle
                                                      : fid::Geometry::Kind::line;
            std::vector<std::size_t> ns;
            if (nt_n > 0) ns.push_back(nt_n);
            std::istringstream in(nt_list);
            std::string tok;
            while (std::getline(in, tok, ',')) {
                if (!tok.empty()) ns.push_back(std::stoull(tok));
            }
            if (ns.empty()) throw fid::data_error("null-table: give --n or --n-list");

            std::ostream* os = &std::cout;
            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path);
                os = &file;
            }
            *os << "n\tmu\tsigma\talpha\tbeta\trule\n";
            for (auto n : ns) {
                const auto& a = fid::null_approx(n, kind);
                const char* rule = a.rule == fid::PValueRule::trivial       ? "trivial"
                                   : a.rule == fid::PValueRule::exact_sqrt  ? "exact"
                                   : a.rule == fid::PValueRule::exponential ? "exponential"
                                                                            : "gamma";
                *os << n << '\t' << fid::io::format_double(a.mu, 11) << '\t'
                    << fid::io::format_double(std::sqrt(a.sigma2), 11) << '\t'
                    << fid::io::format_double(a.alpha, 11) << '\t'
                    << fid::io::format_double(a.beta, 11) << '\t' << rule << '\n';
            }
            return 0;
        }

        if (*ex) {
            if (!ex_seed_set) throw fid::data_error("--seed is required for experiments");
            fid::experiments::ExperimentConfig cfg;
            cfg.name = ex_name;
            cfg.seed = ex_seed;
            cfg.realizations = ex_realizations;
            cfg.quick = ex_quick;
            cfg.threads = threads;
            std::istringstream in(ex_overrides);
            std::string tok;
            while (std::getline(in, tok, ',')) {
                const auto eq = tok.find('=');
                if (eq != std::string::npos) {
                    cfg.overrides[tok.substr(0, eq)] = tok.substr(eq + 1);
                }
            }
            const auto summary = fid::experiments::run_experiment(cfg, ex_dir);
            json j{{"schema", "fidelity/1"},
                   {"experiment", summary.name},
                   {"metric", summary.metric},
                   {"pass", summary.pass}};
            for (const auto& [k, v] : summary.values) j["values"][k] = num(v);
            emit(j, out_path);
            return 0;
        }
    } catch (const fid::no_fit_error& e) {
        json j{{"schema", "fidelity/1"},
               {"error", {{"code", "no_fit"}, {"message", e.what()}, {"context", json::object()}}}};
        std::cout << j.dump(2) << "\n";
        return 4;
    } catch (const fid::data_error& e) {
        json j{{"schema", "fidelity/1"},
               {"error", {{"code", "data_error"}, {"message", e.what()}, {"context", json::object()}}}};
        std::cout << j.dump(2) << "\n";
        return 3;
    } catch (const std::exception& e) {
        json j{{"schema", "fidelity/1"},
               {"error", {{"code", "usage_error"}, {"message", e.what()}, {"context", json::object()}}}};
        std::cout << j.dump(2) << "\n";
        return 2;
    }
    return 0;
}
