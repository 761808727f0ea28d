#include "homkit/cli.hpp"
#include "homkit/json_io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace homkit;
namespace fs = std::filesystem;

namespace
{
const std::string kData = HOMKIT_DATA_DIR;

struct Result
{
    int code;
    std::string out, err;
};

Result cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "homkit");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string &name)
{
    return (fs::temp_directory_path() / ("homkit_test_" + name)).string();
}

std::string slurp(const std::string &path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const std::string &path, const std::string &text) { std::ofstream(path) << text; }
} // namespace

TEST_CASE("tensor JSON round trip")
{
    Tensor t(3, {Valence::down, Valence::up}, ScalarKind::exact);
    t.set({0, 2}, Scalar(Rational(-5, 7)));
    Json j = to_json(t);
    CHECK(j["entries"]["0,2"] == "-5/7");
    CHECK(j["entries"].size() == 1);
    CHECK(tensor_from_json(j, "t") == t);

    Json f = Json::parse(R"({"dim": 2, "valence": ["d"], "entries": {"1": 0.25}})");
    Tensor ft = tensor_from_json(f, "t");
    CHECK_FALSE(ft.is_exact());
    CHECK(ft.get({1}).real() == 0.25);
    CHECK_THROWS_AS(tensor_from_json(Json::parse(R"({"dim": 2, "valence": ["d"], "entries": {"5": "1"}})"), "t"),
                    InputError);
    CHECK_THROWS_AS(tensor_from_json(Json::parse(R"({"dim": 2, "valence": ["x"]})"), "t"), InputError);
}

TEST_CASE("algebra JSON round trip and label keys")
{
    auto l = pw_isometry_algebra(random_plane_wave(2, 3));
    Json j = to_json(l);
    auto back = algebra_from_json(j);
    CHECK(back.structure() == l.structure());
    CHECK(back.labels() == l.labels());
    for (const auto &[k, v] : j["brackets"].items())
    {
        auto comma = k.find(',');
        CHECK(std::stoi(k.substr(0, comma)) < std::stoi(k.substr(comma + 1)));
    }
    Json byname = Json::parse(R"({"labels": ["a", "b", "c"], "brackets": {"b,a": {"c": "1"}}})");
    auto h = algebra_from_json(byname);
    CHECK(h.coeff(0, 1, 2) == -1);
    CHECK_THROWS_AS(algebra_from_json(Json::parse(R"({"dim": 2, "brackets": {"0,0": {"1": "1"}}})")), InputError);
    CHECK_THROWS_AS(algebra_from_json(Json::parse(R"({"dim": 2, "brackets": {"0,1": {"1": 0.5}}})")), InputError);
}

TEST_CASE("structure and ansatz JSON round trips")
{
    auto hs = appendix_structure(random_plane_wave(2, 1));
    auto back = structure_from_json(to_json(hs));
    CHECK(back.s() == hs.s());
    CHECK(back.metric().g() == hs.metric().g());

    GenerateOptions opt;
    opt.isotropy = 1;
    auto nd = generate_nondegenerate(3, 2, opt);
    auto nd2 = nondegenerate_from_json(to_json(nd));
    CHECK(to_json(nd2).dump() == to_json(nd).dump());

    auto dg = generate_degenerate(3, 6);
    auto dg2 = degenerate_from_json(to_json(dg));
    CHECK(to_json(dg2).dump() == to_json(dg).dump());
    CHECK_THROWS_AS(degenerate_from_json(Json::parse(R"({"n": 2})")), InputError);
}

TEST_CASE("cli: classify, jacobi, reductive")
{
    auto r = cli({"classify", kData + "/appendixA_n2.json"});
    CHECK(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["class"] == "T1+T3");
    CHECK(j["degeneracy"] == "null");

    r = cli({"jacobi", kData + "/so3.json"});
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["residual"] == "0");

    std::string bad = temp_path("bad_alg.json");
    write(bad, R"({"dim": 3, "brackets": {"0,1": {"2": "1"}, "0,2": {"0": "1"}}})");
    r = cli({"jacobi", bad});
    CHECK(r.code == 1);
    CHECK(Json::parse(r.out).contains("failing"));

    r = cli({"reductive", kData + "/so3.json", "--m", "L1,L2", "--h", "L3"});
    CHECK(r.code == 0);
    r = cli({"reductive", kData + "/so3.json", "--m", "L3", "--h", "L1,L2"});
    CHECK(r.code == 1);
    r = cli({"reductive", kData + "/so3.json", "--m", "L3", "--h", "L9"});
    CHECK(r.code == 2);
}

TEST_CASE("cli: planewave verify and algebra")
{
    auto r = cli({"planewave", "--n", "2", "--F", kData + "/f.json", "--H", kData + "/h.json", "verify", "--points",
                  "10", "--seed", "1"});
    CHECK(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["residuals"]["r_R"].get<double>() < 1e-8);

    r = cli({"planewave", "--n", "2", "--F", kData + "/f.json", "--H", kData + "/h.json", "verify", "--tol-r",
             "1e-30", "--tol-g", "1e-30"});
    CHECK(r.code == 1);
    CHECK(Json::parse(r.out)["failing"].size() >= 1);

    std::string out = temp_path("alg.json");
    r = cli({"--quiet", "planewave", "--n", "2", "--F", kData + "/f.json", "--H", kData + "/h.json", "algebra",
             "--out", out});
    CHECK(r.code == 0);
    CHECK(r.out == "planewave algebra: dim 6\n");
    CHECK(jacobi_residual(algebra_from_json(read_json_file(out))).vanishes());

    r = cli({"planewave", "--n", "3", "--F", kData + "/f.json", "verify"});
    CHECK(r.code == 2);
    CHECK(r.err.find("F") != std::string::npos);
}

TEST_CASE("cli: gen and reduce")
{
    std::string a1 = temp_path("a1.json"), a2 = temp_path("a2.json"), rep = temp_path("rep.json");
    CHECK(cli({"gen", "--case", "deg", "--n", "3", "--seed", "7", "--out", a1}).code == 0);
    CHECK(cli({"gen", "--case", "deg", "--n", "3", "--seed", "7", "--out", a2}).code == 0);
    CHECK(slurp(a1) == slurp(a2));
    auto r = cli({"reduce", "--case", "deg", a1, "--out", rep});
    CHECK(r.code == 0);
    auto j = read_json_file(rep);
    CHECK(j["verdict"] == "plane_wave");
    CHECK(j.contains("plane_wave"));
    CHECK(j["residuals"].contains("3 S = dF C"));

    CHECK(cli({"gen", "--case", "nondeg", "--n", "3", "--seed", "2", "--isotropy", "1", "--out", a1}).code == 0);
    r = cli({"--quiet", "reduce", "--case", "nondeg", a1});
    CHECK(r.code == 0);
    CHECK(r.out == "reduce: symmetric_space\n");

    write(a2, R"({"case": "nondeg", "n": 2, "lambda": "1", "aleph_sign": 1, "F": [["0", "1"], ["-1", "0"]]})");
    r = cli({"reduce", "--case", "nondeg", a2});
    CHECK(r.code == 1);
    CHECK(Json::parse(r.out)["failing"] == "(V,Z,Z)");

    r = cli({"reduce", "--case", "deg", a2});
    CHECK(r.code == 2);
}

TEST_CASE("cli: HOMKIT_SEED overrides --seed")
{
    std::string a = temp_path("s1.json"), b = temp_path("s2.json");
    setenv("HOMKIT_SEED", "13", 1);
    CHECK(cli({"gen", "--case", "deg", "--n", "2", "--seed", "1", "--out", a}).code == 0);
    unsetenv("HOMKIT_SEED");
    CHECK(cli({"gen", "--case", "deg", "--n", "2", "--seed", "13", "--out", b}).code == 0);
    CHECK(slurp(a) == slurp(b));
    setenv("HOMKIT_SEED", "x", 1);
    CHECK(cli({"gen", "--case", "deg", "--n", "2"}).code == 2);
    unsetenv("HOMKIT_SEED");
}

TEST_CASE("cli: malformed input exits with 2 and names the problem")
{
    std::string broken = temp_path("broken.json");
    write(broken, "{not json");
    auto r = cli({"jacobi", broken});
    CHECK(r.code == 2);
    CHECK(r.err.find(broken) != std::string::npos);

    write(broken, R"({"metric": "light_cone", "S": {"dim": 4, "valence": ["d", "d", "d"], "entries": {"0,0,1": "x"}}})");
    r = cli({"classify", broken});
    CHECK(r.code == 2);
    CHECK(r.err.find("S.entries") != std::string::npos);

    CHECK(cli({"classify", kData + "/so3.json", "--bogus"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"gen", "--case", "other"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("cli: output is byte-stable")
{
    auto a = cli({"classify", kData + "/appendixA_n2.json"});
    auto b = cli({"classify", kData + "/appendixA_n2.json"});
    CHECK(a.out == b.out);
    auto c = cli({"planewave", "--n", "2", "--F", kData + "/f.json", "verify", "--seed", "4"});
    auto d = cli({"planewave", "--n", "2", "--F", kData + "/f.json", "verify", "--seed", "4"});
    CHECK(c.out == d.out);
}
