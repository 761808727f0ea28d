#include "homkit/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace homkit
{

namespace
{
[[noreturn]] void bad(const std::string &field, const std::string &what)
{
    throw InputError("field '" + field + "': " + what);
}

const Json &member(const Json &j, const char *key, const std::string &field)
{
    if (!j.is_object() || !j.contains(key))
        bad(field, std::string("missing key '") + key + "'");
    return j.at(key);
}

int int_from_json(const Json &j, const std::string &field)
{
    if (!j.is_number_integer())
        bad(field, "expected an integer");
    return j.get<int>();
}

std::vector<int> split_index(const std::string &key, const std::string &field)
{
    std::vector<int> out;
    if (key.empty())
        return out;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ','))
    {
        try
        {
            size_t used = 0;
            int v = std::stoi(part, &used);
            if (used != part.size())
                throw std::invalid_argument(part);
            out.push_back(v);
        }
        catch (const std::exception &)
        {
            bad(field, "bad index key '" + key + "'");
        }
    }
    return out;
}

std::string join_index(const std::vector<int> &idx)
{
    std::string s;
    for (size_t i = 0; i < idx.size(); ++i)
        s += (i ? "," : "") + std::to_string(idx[i]);
    return s;
}

Tensor zero_tensor(int n, int rank)
{
    return Tensor(n, std::vector<Valence>(size_t(rank), Valence::down), ScalarKind::exact);
}

Tensor optional_tensor(const Json &j, const char *key, int n, int rank)
{
    if (!j.contains(key))
        return zero_tensor(n, rank);
    Tensor t = tensor_from_json(j.at(key), key);
    if (!t.is_exact())
        bad(key, "must be exact (\"p/q\" strings)");
    if (t.dim() != n || t.rank() != rank)
        bad(key, "expected rank " + std::to_string(rank) + " over " + std::to_string(n) + " directions");
    return t;
}

QMatrix optional_matrix(const Json &j, const char *key, int n)
{
    if (!j.contains(key))
        return QMatrix(n, n);
    QMatrix m = matrix_from_json(j.at(key), key);
    if (m.rows() != n || m.cols() != n)
        bad(key, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    return m;
}

QMatrix tensor_to_matrix(const Tensor &t)
{
    QMatrix m(t.dim(), t.dim());
    m.data() = t.values<Rational>();
    return m;
}

DMatrix tensor_to_dmatrix(const Tensor &t)
{
    DMatrix m(t.dim(), t.dim());
    m.data() = t.values<double>();
    return m;
}
} // namespace

Json to_json(const Rational &q) { return format_rational(q); }

Json to_json(const Scalar &s)
{
    if (s.is_exact())
        return format_rational(s.rational());
    return s.real();
}

Scalar scalar_from_json(const Json &j, const std::string &field)
{
    if (j.is_string() || j.is_number_integer())
        return Scalar(rational_from_json(j, field));
    if (j.is_number_float())
        return Scalar(j.get<double>());
    bad(field, "expected a \"p/q\" string or a number");
}

Rational rational_from_json(const Json &j, const std::string &field)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (j.is_string())
    {
        try
        {
            return parse_rational(j.get<std::string>());
        }
        catch (const Error &e)
        {
            bad(field, e.what());
        }
    }
    if (j.is_number_float())
        bad(field, "exact value expected; write it as a \"p/q\" string");
    bad(field, "expected a \"p/q\" string or an integer");
}

Json to_json(const Tensor &t)
{
    Json j;
    j["dim"] = t.dim();
    j["rank"] = t.rank();
    Json val = Json::array();
    for (auto v : t.valence())
        val.push_back(v == Valence::up ? "u" : "d");
    j["valence"] = val;
    Json entries = Json::object();
    std::vector<int> idx(size_t(t.rank()), 0);
    do
    {
        Scalar s = t.get(idx);
        if (!s.is_zero())
            entries[join_index(idx)] = to_json(s);
    } while (next_index(idx, t.dim()));
    j["entries"] = entries;
    return j;
}

Tensor tensor_from_json(const Json &j, const std::string &field)
{
    int dim = int_from_json(member(j, "dim", field), field + ".dim");
    if (dim < 1)
        bad(field, "dim must be positive");
    std::vector<Valence> valence;
    const Json &val = member(j, "valence", field);
    if (!val.is_array())
        bad(field + ".valence", "expected an array");
    for (const auto &v : val)
    {
        if (v == "u")
            valence.push_back(Valence::up);
        else if (v == "d")
            valence.push_back(Valence::down);
        else
            bad(field + ".valence", "entries must be \"u\" or \"d\"");
    }
    if (j.contains("rank") && int_from_json(j.at("rank"), field + ".rank") != int(valence.size()))
        bad(field, "rank disagrees with valence length");
    const Json &entries = j.contains("entries") ? j.at("entries") : Json::object();
    if (!entries.is_object())
        bad(field + ".entries", "expected an object");

    bool real = false;
    for (const auto &[k, v] : entries.items())
        real = real || v.is_number_float();
    Tensor t(dim, valence, real ? ScalarKind::real : ScalarKind::exact);
    for (const auto &[k, v] : entries.items())
    {
        auto idx = split_index(k, field + ".entries");
        if (idx.size() != valence.size())
            bad(field + ".entries", "key '" + k + "' has the wrong number of indices");
        for (int i : idx)
            if (i < 0 || i >= dim)
                bad(field + ".entries", "index out of range in key '" + k + "'");
        Scalar s = scalar_from_json(v, field + ".entries." + k);
        if (real && s.is_exact())
            s = Scalar(to_double(s.rational()));
        t.set(idx, s);
    }
    return t;
}

Json to_json(const QMatrix &m)
{
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i)
    {
        Json row = Json::array();
        for (int k = 0; k < m.cols(); ++k)
            row.push_back(format_rational(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

Json to_json(const DMatrix &m)
{
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i)
    {
        Json row = Json::array();
        for (int k = 0; k < m.cols(); ++k)
            row.push_back(m(i, k));
        rows.push_back(row);
    }
    return rows;
}

QMatrix matrix_from_json(const Json &j, const std::string &field)
{
    if (!j.is_array())
        bad(field, "expected an array of rows");
    int rows = int(j.size());
    int cols = rows ? int(j[0].is_array() ? j[0].size() : 0) : 0;
    QMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
    {
        if (!j[i].is_array() || int(j[i].size()) != cols)
            bad(field, "rows must be arrays of equal length");
        for (int k = 0; k < cols; ++k)
            m(i, k) = rational_from_json(j[i][k], field + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    return m;
}

Json to_json(const LieAlgebra &alg)
{
    Json j;
    j["dim"] = alg.dim();
    j["labels"] = alg.labels();
    Json br = Json::object();
    int d = alg.dim();
    const Tensor &f = alg.structure();
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b)
        {
            Json row = Json::object();
            for (int c = 0; c < d; ++c)
            {
                Scalar s = f.get({a, b, c});
                if (!s.is_zero())
                    row[std::to_string(c)] = to_json(s);
            }
            if (!row.empty())
                br[std::to_string(a) + "," + std::to_string(b)] = row;
        }
    j["brackets"] = br;
    return j;
}

LieAlgebra algebra_from_json(const Json &j, const std::string &field)
{
    std::vector<std::string> labels;
    int dim;
    if (j.contains("labels"))
    {
        if (!j.at("labels").is_array())
            bad(field + ".labels", "expected an array of strings");
        for (const auto &l : j.at("labels"))
        {
            if (!l.is_string())
                bad(field + ".labels", "expected an array of strings");
            labels.push_back(l.get<std::string>());
        }
        dim = int(labels.size());
        if (j.contains("dim") && int_from_json(j.at("dim"), field + ".dim") != dim)
            bad(field, "dim disagrees with the number of labels");
    }
    else
    {
        dim = int_from_json(member(j, "dim", field), field + ".dim");
        labels = LieAlgebra::default_labels(dim);
    }
    if (dim < 1)
        bad(field, "dim must be positive");
    auto resolve = [&](const std::string &key, const std::string &where) {
        for (int i = 0; i < dim; ++i)
            if (labels[i] == key)
                return i;
        auto idx = split_index(key, where);
        if (idx.size() != 1 || idx[0] < 0 || idx[0] >= dim)
            bad(where, "unknown basis element '" + key + "'");
        return idx[0];
    };

    BracketTable table(labels);
    std::set<std::pair<int, int>> seen;
    const Json &br = j.contains("brackets") ? j.at("brackets") : Json::object();
    if (!br.is_object())
        bad(field + ".brackets", "expected an object");
    for (const auto &[key, row] : br.items())
    {
        std::string where = field + ".brackets." + key;
        auto comma = key.find(',');
        if (comma == std::string::npos)
            bad(where, "key must be \"a,b\"");
        int a = resolve(key.substr(0, comma), where);
        int b = resolve(key.substr(comma + 1), where);
        if (a == b)
            bad(where, "bracket of an element with itself must vanish");
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
            bad(where, "bracket given twice");
        if (!row.is_object())
            bad(where, "expected an object of components");
        for (const auto &[c, v] : row.items())
        {
            Rational q = rational_from_json(v, where + "." + c);
            int ci = resolve(c, where);
            if (a < b)
                table.set(a, b, ci, q);
            else
                table.set(b, a, ci, -q);
        }
    }
    return table.build();
}

Json to_json(const HomogeneousStructure &hs)
{
    Json j;
    const Tensor &g = hs.metric().g();
    if (g.is_exact())
        j["metric"] = to_json(tensor_to_matrix(g));
    else
        j["metric"] = to_json(tensor_to_dmatrix(g));
    j["S"] = to_json(hs.s());
    return j;
}

HomogeneousStructure structure_from_json(const Json &j, const std::string &field)
{
    Tensor s = tensor_from_json(member(j, "S", field), field + ".S");
    const Json &mj = member(j, "metric", field);
    FrameMetric metric = [&] {
        if (mj.is_string())
        {
            std::string name = mj.get<std::string>();
            if (name == "light_cone" && s.dim() >= 2)
                return FrameMetric::light_cone(s.dim() - 2);
            if (name == "euclidean")
                return FrameMetric::euclidean(s.dim());
            bad(field + ".metric", "named metric must be \"light_cone\" or \"euclidean\"");
        }
        QMatrix g = matrix_from_json(mj, field + ".metric");
        if (s.is_exact())
            return FrameMetric(g);
        return FrameMetric(to_double(g));
    }();
    try
    {
        return HomogeneousStructure(metric, s);
    }
    catch (const InputError &e)
    {
        bad(field, e.what());
    }
}

Json to_json(const StructureClass &c)
{
    Json j;
    j["class"] = c.name();
    j["degeneracy"] = to_string(c.degeneracy);
    j["xi_norm"] = to_json(c.xi_norm);
    return j;
}

Json to_json(const PlaneWaveData &pw)
{
    Json j;
    j["n"] = pw.n;
    j["F"] = to_json(pw.F);
    j["H"] = to_json(pw.H);
    return j;
}

Json to_json(const ASResiduals &r)
{
    Json j;
    j["r_g"] = r.r_g;
    j["r_R"] = r.r_R;
    j["r_S"] = r.r_S;
    j["r_geo"] = r.r_geo;
    return j;
}

Json to_json(const NondegenerateAnsatz &a)
{
    Json j;
    j["case"] = "nondeg";
    j["n"] = a.n;
    j["lambda"] = to_json(a.lambda);
    j["aleph_sign"] = a.aleph_sign;
    j["F"] = to_json(a.F);
    j["C"] = to_json(a.C);
    j["R"] = to_json(a.R);
    j["Scurv"] = to_json(a.Scurv);
    Json hb = Json::array();
    for (const auto &m : a.h_basis)
        hb.push_back(to_json(m));
    j["h_basis"] = hb;
    return j;
}

Json to_json(const DegenerateAnsatz &a)
{
    Json j;
    j["case"] = "deg";
    j["n"] = a.n;
    j["lambda"] = to_json(a.lambda);
    Json w = Json::array();
    for (const auto &q : a.W)
        w.push_back(to_json(q));
    j["W"] = w;
    j["F"] = to_json(a.F);
    j["aleph"] = to_json(a.aleph);
    j["C"] = to_json(a.C);
    j["occupancy"] = a.occupancy;
    j["h"] = to_json(a.h);
    j["Y"] = to_json(a.Y);
    j["R"] = to_json(a.R);
    j["S3"] = to_json(a.S3);
    j["N"] = to_json(a.N);
    j["rvz_boost"] = to_json(a.rvz_boost);
    j["rvz_rot"] = to_json(a.rvz_rot);
    return j;
}

NondegenerateAnsatz nondegenerate_from_json(const Json &j)
{
    if (j.contains("case") && j.at("case") != "nondeg")
        bad("case", "expected \"nondeg\"");
    int n = int_from_json(member(j, "n", "ansatz"), "n");
    if (n < 1)
        bad("n", "must be at least 1");
    int sign = int_from_json(member(j, "aleph_sign", "ansatz"), "aleph_sign");
    auto a = NondegenerateAnsatz::zero(n, rational_from_json(member(j, "lambda", "ansatz"), "lambda"), sign);
    a.F = optional_matrix(j, "F", n);
    a.C = optional_tensor(j, "C", n, 3);
    a.R = optional_tensor(j, "R", n, 3);
    a.Scurv = optional_tensor(j, "Scurv", n, 4);
    if (j.contains("h_basis"))
    {
        if (!j.at("h_basis").is_array())
            bad("h_basis", "expected an array of matrices");
        for (size_t k = 0; k < j.at("h_basis").size(); ++k)
            a.h_basis.push_back(matrix_from_json(j.at("h_basis")[k], "h_basis[" + std::to_string(k) + "]"));
    }
    a.validate();
    return a;
}

DegenerateAnsatz degenerate_from_json(const Json &j)
{
    if (j.contains("case") && j.at("case") != "deg")
        bad("case", "expected \"deg\"");
    int n = int_from_json(member(j, "n", "ansatz"), "n");
    if (n < 1)
        bad("n", "must be at least 1");
    auto a = DegenerateAnsatz::zero(n, rational_from_json(member(j, "lambda", "ansatz"), "lambda"));
    if (j.contains("W"))
    {
        const Json &w = j.at("W");
        if (!w.is_array() || int(w.size()) != n)
            bad("W", "expected an array of n values");
        for (int i = 0; i < n; ++i)
            a.W[i] = rational_from_json(w[i], "W[" + std::to_string(i) + "]");
    }
    if (j.contains("occupancy"))
    {
        if (!j.at("occupancy").is_array())
            bad("occupancy", "expected an array of direction indices");
        for (const auto &v : j.at("occupancy"))
            a.occupancy.push_back(int_from_json(v, "occupancy"));
    }
    a.F = optional_matrix(j, "F", n);
    a.aleph = optional_matrix(j, "aleph", n);
    a.h = optional_matrix(j, "h", n);
    a.Y = optional_matrix(j, "Y", n);
    a.rvz_boost = optional_matrix(j, "rvz_boost", n);
    a.C = optional_tensor(j, "C", n, 3);
    a.R = optional_tensor(j, "R", n, 3);
    a.S3 = optional_tensor(j, "S3", n, 3);
    a.N = optional_tensor(j, "N", n, 4);
    a.rvz_rot = optional_tensor(j, "rvz_rot", n, 3);
    a.validate();
    return a;
}

Json to_json(const ReductionReport &r)
{
    Json j;
    j["verdict"] = to_string(r.verdict);
    if (!r.failing.empty())
        j["failing"] = r.failing;
    j["lambda"] = to_json(r.lambda);
    Json res = Json::object();
    for (const auto &x : r.residuals)
        res[x.name] = to_json(x.value);
    j["residuals"] = res;
    Json red = Json::array();
    for (const auto &d : r.redefinitions)
    {
        Json e;
        e["name"] = d.name;
        e["labels"] = d.labels;
        e["basis_change"] = to_json(d.basis_change);
        red.push_back(e);
    }
    j["redefinitions"] = red;
    if (r.plane_wave)
        j["plane_wave"] = to_json(*r.plane_wave);
    if (r.algebra)
        j["algebra"] = to_json(*r.algebra);
    return j;
}

Json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError(path + ": cannot open file");
    try
    {
        return Json::parse(in);
    }
    catch (const Json::parse_error &e)
    {
        throw InputError(path + ": invalid JSON (" + e.what() + ")");
    }
}

void write_json_file(const std::string &path, const Json &j)
{
    std::ofstream out(path);
    if (!out)
        throw InputError(path + ": cannot write file");
    out << j.dump(2) << "\n";
}

} // namespace homkit
