#include "homkit/cli.hpp"
#include "homkit/json_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <sstream>

namespace homkit
{

namespace
{
struct Outcome
{
    Json report;
    std::string verdict;
    bool pass = true;
};

std::uint64_t effective_seed(std::uint64_t flag)
{
    if (const char *env = std::getenv("HOMKIT_SEED"))
    {
        try
        {
            size_t used = 0;
            unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size())
                return v;
        }
        catch (const std::exception &)
        {
        }
        throw InputError("HOMKIT_SEED must be a non-negative integer");
    }
    return flag;
}

template <class Fn> auto in_file(const std::string &path, Fn &&fn)
{
    try
    {
        return fn(read_json_file(path));
    }
    catch (const InputError &e)
    {
        std::string msg = e.what();
        if (msg.rfind(path, 0) == 0)
            throw;
        throw InputError(path + ": " + msg);
    }
}

QMatrix matrix_file(const std::string &path, const char *key)
{
    return in_file(path, [&](const Json &j) {
        if (j.is_object() && j.contains(key))
            return matrix_from_json(j.at(key), key);
        return matrix_from_json(j, key);
    });
}

std::vector<int> parse_index_list(const std::string &text, const LieAlgebra &alg, const char *flag)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ','))
    {
        if (part.empty())
            continue;
        int idx = -1;
        for (int i = 0; i < alg.dim(); ++i)
            if (alg.labels()[i] == part)
                idx = i;
        if (idx < 0)
        {
            try
            {
                size_t used = 0;
                idx = std::stoi(part, &used);
                if (used != part.size())
                    idx = -1;
            }
            catch (const std::exception &)
            {
                idx = -1;
            }
        }
        if (idx < 0 || idx >= alg.dim())
            throw InputError(std::string(flag) + ": unknown basis element '" + part + "'");
        out.push_back(idx);
    }
    return out;
}

Outcome do_classify(const std::string &path)
{
    auto hs = in_file(path, [](const Json &j) { return structure_from_json(j); });
    auto cls = classify(hs);
    Outcome o;
    o.report = to_json(cls);
    o.verdict = "classify: " + cls.name() + " " + to_string(cls.degeneracy);
    return o;
}

Outcome do_jacobi(const std::string &path)
{
    auto alg = in_file(path, [](const Json &j) { return algebra_from_json(j); });
    auto jr = jacobi_residual(alg);
    Outcome o;
    o.report["dim"] = alg.dim();
    o.report["residual"] = to_json(jr.max_abs);
    o.pass = jr.vanishes();
    if (!o.pass)
    {
        int d = alg.dim();
        const auto &v = jr.residual.values<Rational>();
        for (int a = 0; a < d && !o.report.contains("failing"); ++a)
            for (int b = a + 1; b < d && !o.report.contains("failing"); ++b)
                for (int c = b + 1; c < d && !o.report.contains("failing"); ++c)
                    for (int e = 0; e < d; ++e)
                        if (sgn(v[((size_t(a) * d + b) * d + c) * d + e]) != 0)
                        {
                            o.report["failing"] = "Jacobi (" + alg.labels()[a] + "," + alg.labels()[b] + "," +
                                                  alg.labels()[c] + ")";
                            break;
                        }
    }
    o.verdict = std::string("jacobi: ") + (o.pass ? "ok" : "FAIL " + o.report["failing"].get<std::string>());
    return o;
}

Outcome do_reductive(const std::string &path, const std::string &m, const std::string &h)
{
    auto alg = in_file(path, [](const Json &j) { return algebra_from_json(j); });
    ReductiveSplit split{parse_index_list(m, alg, "--m"), parse_index_list(h, alg, "--h")};
    auto rep = check_reductive(alg, split);
    Outcome o;
    o.report["reductive"] = rep.reductive;
    o.report["violations"] = rep.violations;
    Json hp = Json::array();
    for (const auto &row : rep.h_prime)
    {
        Json r = Json::array();
        for (const auto &q : row)
            r.push_back(to_json(q));
        hp.push_back(r);
    }
    o.report["h_prime"] = hp;
    o.pass = rep.reductive;
    o.verdict = std::string("reductive: ") + (o.pass ? "ok" : "FAIL " + rep.violations.front());
    return o;
}

struct PlaneWaveArgs
{
    int n = 1;
    std::string f_path, h_path;
    int points = 10;
    std::uint64_t seed = 1;
    double tol_g = 1e-10, tol_r = 1e-8, tol_s = 1e-10, tol_geo = 1e-10;
    std::string out;
};

PlaneWaveData load_plane_wave(const PlaneWaveArgs &a)
{
    if (a.n < 1)
        throw InputError("--n must be at least 1");
    QMatrix f = a.f_path.empty() ? QMatrix(a.n, a.n) : matrix_file(a.f_path, "F");
    QMatrix h = a.h_path.empty() ? QMatrix(a.n, a.n) : matrix_file(a.h_path, "H");
    try
    {
        return PlaneWaveData(a.n, f, h);
    }
    catch (const InputError &e)
    {
        throw InputError(std::string("--F/--H: ") + e.what());
    }
}

Outcome do_verify(const PlaneWaveArgs &a)
{
    auto pw = load_plane_wave(a);
    if (a.points < 1)
        throw InputError("--points must be positive");
    std::uint64_t seed = effective_seed(a.seed);
    auto res = as_residuals(pw, sample_points(pw.n, a.points, seed));
    Outcome o;
    o.report["n"] = pw.n;
    o.report["points"] = a.points;
    o.report["seed"] = seed;
    o.report["residuals"] = to_json(res);
    Json tol;
    tol["r_g"] = a.tol_g;
    tol["r_R"] = a.tol_r;
    tol["r_S"] = a.tol_s;
    tol["r_geo"] = a.tol_geo;
    o.report["tolerances"] = tol;
    std::vector<std::string> failing;
    auto check = [&](const char *name, double v, double t) {
        if (!(v < t))
            failing.push_back(name);
    };
    check("r_g", res.r_g, a.tol_g);
    check("r_R", res.r_R, a.tol_r);
    check("r_S", res.r_S, a.tol_s);
    check("r_geo", res.r_geo, a.tol_geo);
    o.pass = failing.empty();
    o.report["pass"] = o.pass;
    if (!o.pass)
        o.report["failing"] = failing;
    std::string joined;
    for (const auto &f : failing)
        joined += " " + f;
    o.verdict = std::string("planewave verify: ") + (o.pass ? "ok" : "FAIL" + joined);
    return o;
}

Outcome do_pw_algebra(const PlaneWaveArgs &a)
{
    auto alg = pw_isometry_algebra(load_plane_wave(a));
    Outcome o;
    o.report = to_json(alg);
    if (!a.out.empty())
        write_json_file(a.out, o.report);
    o.verdict = "planewave algebra: dim " + std::to_string(alg.dim());
    return o;
}

Outcome do_reduce(const std::string &kind, const std::string &path, const std::string &out)
{
    ReductionReport rep;
    Outcome o;
    try
    {
        if (kind == "nondeg")
            rep = nondegenerate_reduce(in_file(path, [](const Json &j) { return nondegenerate_from_json(j); }));
        else
            rep = degenerate_reduce(in_file(path, [](const Json &j) { return degenerate_from_json(j); }));
    }
    catch (const InputError &)
    {
        throw;
    }
    catch (const Error &e)
    {
        o.report["verdict"] = "failed";
        o.report["failing"] = e.what();
        o.pass = false;
        o.verdict = std::string("reduce: FAIL ") + e.what();
        if (!out.empty())
            write_json_file(out, o.report);
        return o;
    }
    o.report = to_json(rep);
    o.pass = rep.verdict != Verdict::inconsistent;
    o.verdict = "reduce: " + to_string(rep.verdict) + (rep.failing.empty() ? "" : " " + rep.failing);
    if (!out.empty())
        write_json_file(out, o.report);
    return o;
}

Outcome do_gen(const std::string &kind, int n, std::uint64_t seed_flag, const std::string &occ,
               int isotropy, const std::string &out)
{
    std::uint64_t seed = effective_seed(seed_flag);
    GenerateOptions opt;
    if (isotropy >= 0)
    {
        if (isotropy > 2)
            throw InputError("--isotropy must be 0, 1 or 2");
        opt.isotropy = isotropy;
    }
    if (!occ.empty())
    {
        std::vector<int> o;
        std::stringstream ss(occ);
        std::string part;
        while (std::getline(ss, part, ','))
        {
            if (part.empty())
                continue;
            try
            {
                o.push_back(std::stoi(part));
            }
            catch (const std::exception &)
            {
                throw InputError("--occupancy: bad entry '" + part + "'");
            }
            if (o.back() < 0 || o.back() >= n)
                throw InputError("--occupancy: direction " + part + " out of range");
        }
        opt.occupancy = o;
    }
    Outcome o;
    o.report = kind == "nondeg" ? to_json(generate_nondegenerate(n, seed, opt)) : to_json(generate_degenerate(n, seed, opt));
    if (!out.empty())
        write_json_file(out, o.report);
    o.verdict = "gen: " + kind + " n=" + std::to_string(n) + " seed=" + std::to_string(seed);
    return o;
}
} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"homkit: homogeneous structures, isometry algebras and plane waves"};
    app.set_help_flag("--help", "Print help and exit");
    app.fallthrough();
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "Print only the verdict line");

    std::string file;
    auto *classify_cmd = app.add_subcommand("classify", "Classify a homogeneous structure tensor");
    classify_cmd->add_option("file", file, "Structure JSON")->required()->check(CLI::ExistingFile);

    auto *jacobi_cmd = app.add_subcommand("jacobi", "Jacobi residual of a Lie algebra");
    jacobi_cmd->add_option("file", file, "Algebra JSON")->required()->check(CLI::ExistingFile);

    std::string m_list, h_list;
    auto *reductive_cmd = app.add_subcommand("reductive", "Check a reductive split m + h");
    reductive_cmd->add_option("file", file, "Algebra JSON")->required()->check(CLI::ExistingFile);
    reductive_cmd->add_option("--m", m_list, "Comma-separated m elements (labels or indices)")->required();
    reductive_cmd->add_option("--h", h_list, "Comma-separated h elements (labels or indices)")->required();

    PlaneWaveArgs pwa;
    auto *pw_cmd = app.add_subcommand("planewave", "Singular homogeneous plane wave");
    pw_cmd->require_subcommand(1);
    pw_cmd->add_option("--n", pwa.n, "Transverse dimension")->required();
    pw_cmd->add_option("--F", pwa.f_path, "Antisymmetric F matrix JSON")->check(CLI::ExistingFile);
    pw_cmd->add_option("--H", pwa.h_path, "Symmetric H matrix JSON")->check(CLI::ExistingFile);
    auto *verify_cmd = pw_cmd->add_subcommand("verify", "Parallelism residuals at sampled points");
    verify_cmd->add_option("--points", pwa.points, "Number of chart points");
    verify_cmd->add_option("--seed", pwa.seed, "Sampling seed (HOMKIT_SEED overrides)");
    verify_cmd->add_option("--tol-g", pwa.tol_g, "Tolerance for the metric residual");
    verify_cmd->add_option("--tol-r", pwa.tol_r, "Tolerance for the curvature residual");
    verify_cmd->add_option("--tol-s", pwa.tol_s, "Tolerance for the torsion residual");
    verify_cmd->add_option("--tol-geo", pwa.tol_geo, "Tolerance for the geodesic residual");
    auto *alg_cmd = pw_cmd->add_subcommand("algebra", "Emit the isometry algebra");
    alg_cmd->add_option("--out", pwa.out, "Output path");

    std::string kind, out_path;
    auto *reduce_cmd = app.add_subcommand("reduce", "Reduce a T1+T3 ansatz");
    reduce_cmd->add_option("--case", kind, "nondeg or deg")->required()->check(CLI::IsMember({"nondeg", "deg"}));
    reduce_cmd->add_option("file", file, "Ansatz JSON")->required()->check(CLI::ExistingFile);
    reduce_cmd->add_option("--out", out_path, "Report output path");

    int gen_n = 2, isotropy = -1;
    std::uint64_t gen_seed = 1;
    std::string occupancy;
    auto *gen_cmd = app.add_subcommand("gen", "Generate a Jacobi-consistent ansatz");
    gen_cmd->add_option("--case", kind, "nondeg or deg")->required()->check(CLI::IsMember({"nondeg", "deg"}));
    gen_cmd->add_option("--n", gen_n, "Transverse dimension")->check(CLI::Range(1, 4));
    gen_cmd->add_option("--seed", gen_seed, "Seed (HOMKIT_SEED overrides)");
    gen_cmd->add_option("--occupancy", occupancy, "Comma-separated occupied directions (deg only)");
    gen_cmd->add_option("--isotropy", isotropy, "0 none, 1 full, 2 one random element");
    gen_cmd->add_option("--out", out_path, "Output path");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return 0;
    }
    catch (const CLI::ParseError &e)
    {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try
    {
        Outcome o;
        if (*classify_cmd)
            o = do_classify(file);
        else if (*jacobi_cmd)
            o = do_jacobi(file);
        else if (*reductive_cmd)
            o = do_reductive(file, m_list, h_list);
        else if (*verify_cmd)
            o = do_verify(pwa);
        else if (*alg_cmd)
            o = do_pw_algebra(pwa);
        else if (*reduce_cmd)
            o = do_reduce(kind, file, out_path);
        else
            o = do_gen(kind, gen_n, gen_seed, occupancy, isotropy, out_path);
        if (quiet)
            out << o.verdict << "\n";
        else
            out << o.report.dump(2) << "\n";
        return o.pass ? 0 : 1;
    }
    catch (const InputError &e)
    {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const Error &e)
    {
        err << "failed: " << e.what() << "\n";
        return 1;
    }
}

} // namespace homkit
