#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "mzjm/cli.hpp"
#include "mzjm/random.hpp"

namespace mzjm::cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kStateStream = 1;
constexpr std::uint64_t kUnitaryStream = 2;

[[noreturn]] void bad(const std::string &what) { throw InputError("scenario: " + what); }

const json &require(const json &obj, const char *key, const std::string &where) {
    const auto it = obj.find(key);
    if (it == obj.end()) bad(where + " is missing \"" + key + "\"");
    return *it;
}

void reject_unknown(const json &obj, std::initializer_list<const char *> allowed, const std::string &where) {
    for (const auto &item : obj.items()) {
        bool known = false;
        for (const char *k : allowed) known = known || item.key() == k;
        if (!known) bad(where + " has unknown key \"" + item.key() + "\"");
    }
}

double number(const json &v, const std::string &where) {
    if (!v.is_number()) bad(where + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad(where + " must be finite");
    return x;
}

cplx complex_entry(const json &v, const std::string &where) {
    if (v.is_number()) return {number(v, where), 0.0};
    if (v.is_array() && v.size() == 2) return {number(v[0], where), number(v[1], where)};
    bad(where + " must be a number or an [re, im] pair");
}

CMatrix matrix_from(const json &v, const std::string &where) {
    if (!v.is_array() || v.empty()) bad(where + " must be a non-empty array of rows");
    const std::size_t dim = v.size();
    CMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        if (!v[i].is_array() || v[i].size() != dim) bad(where + " must be square");
        for (std::size_t j = 0; j < dim; ++j) out(i, j) = complex_entry(v[i][j], where);
    }
    return out;
}

json matrix_to(const CMatrix &m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix quanton_from(const json &v) {
    if (!v.is_object()) bad("quanton must be an object");
    reject_unknown(v, {"bloch", "matrix"}, "quanton");
    if (v.contains("bloch")) {
        const json &b = v["bloch"];
        if (!b.is_array() || b.size() != 3) bad("quanton.bloch must have three components");
        return QubitState::from_bloch({number(b[0], "quanton.bloch"), number(b[1], "quanton.bloch"),
                                       number(b[2], "quanton.bloch")})
            .matrix();
    }
    return matrix_from(require(v, "matrix", "quanton"), "quanton.matrix");
}

// Acts on levels 0 and 1, identity elsewhere.
CMatrix embed_qubit(const CMatrix &q, std::size_t dim) {
    CMatrix out = CMatrix::identity(dim);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) out(i, j) = q(i, j);
    }
    return out;
}

void check_dim(std::size_t dim) {
    if (dim < kMinDetectorDim || dim > kMaxDetectorDim) {
        throw Error(ErrorKind::BadDimension, "detector dimension " + std::to_string(dim) + " outside [2, 8]");
    }
}

CMatrix detector_state_from(const json &v, std::size_t dim, std::uint64_t seed) {
    if (v.is_string()) {
        const std::string name = v.get<std::string>();
        check_dim(dim);
        if (name == "ground") {
            CMatrix g(dim);
            g(0, 0) = 1.0;
            return g;
        }
        if (name == "maximally-mixed") return CMatrix::identity(dim) * (1.0 / static_cast<double>(dim));
        if (name == "random") return random_detector_state(dim, derive_seed(seed, kStateStream));
        if (name == "random-pure") {
            Rng rng(derive_seed(seed, kStateStream));
            return random_pure_detector_state(dim, rng);
        }
        bad("unknown detector state preset \"" + name + "\"");
    }
    if (!v.is_object()) bad("detector.state must be a preset name or {\"matrix\": ...}");
    reject_unknown(v, {"matrix"}, "detector.state");
    return matrix_from(require(v, "matrix", "detector.state"), "detector.state.matrix");
}

CMatrix detector_unitary_from(const json &v, std::size_t dim, std::uint64_t seed) {
    std::string name;
    double theta = 0.0;
    if (v.is_string()) {
        name = v.get<std::string>();
    } else if (v.is_object() && v.contains("matrix")) {
        reject_unknown(v, {"matrix"}, "detector.unitary");
        return matrix_from(v["matrix"], "detector.unitary.matrix");
    } else if (v.is_object()) {
        reject_unknown(v, {"preset", "theta"}, "detector.unitary");
        const json &p = require(v, "preset", "detector.unitary");
        if (!p.is_string()) bad("detector.unitary.preset must be a string");
        name = p.get<std::string>();
        if (v.contains("theta")) theta = number(v["theta"], "detector.unitary.theta");
    } else {
        bad("detector.unitary must be a preset or an object");
    }
    check_dim(dim);
    if (name == "identity") return CMatrix::identity(dim);
    if (name == "pauli-x") return embed_qubit(pauli_x(), dim);
    if (name == "x-rotation") {
        const CMatrix r = std::cos(theta / 2.0) * CMatrix::identity(2) - cplx{0.0, std::sin(theta / 2.0)} * pauli_x();
        return embed_qubit(r, dim);
    }
    if (name == "random") return random_unitary(dim, derive_seed(seed, kUnitaryStream));
    bad("unknown detector unitary preset \"" + name + "\"");
}

std::optional<ExplicitStrategy> strategy_from(const json &v, std::size_t dim) {
    if (v.is_string()) {
        if (v.get<std::string>() == "optimal") return std::nullopt;
        bad("strategy must be \"optimal\" or an object");
    }
    if (!v.is_object()) bad("strategy must be \"optimal\" or an object");
    reject_unknown(v, {"basis", "subset"}, "strategy");
    ExplicitStrategy s;
    const json basis = v.value("basis", json("computational"));
    if (basis.is_string()) {
        if (basis.get<std::string>() != "computational") bad("strategy.basis preset must be \"computational\"");
        s.basis = CMatrix::identity(dim);
    } else {
        s.basis = matrix_from(basis, "strategy.basis");
    }
    const json &subset = require(v, "subset", "strategy");
    if (!subset.is_array()) bad("strategy.subset must be an array of indices");
    for (const json &k : subset) {
        if (!k.is_number_unsigned()) bad("strategy.subset entries must be non-negative integers");
        s.subset.push_back(k.get<std::size_t>());
    }
    return s;
}

}  // namespace

MZISetup Scenario::setup() const { return MZISetup(QubitState(quanton), detector_state, detector_unitary, phi); }

Strategy Scenario::make_strategy(const MZISetup &s) const {
    if (!strategy) return optimal_strategy(s);
    return Strategy(strategy->basis, strategy->subset);
}

Scenario parse_scenario(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error &e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) bad("top level must be an object");
    reject_unknown(doc, {"id", "quanton", "detector", "phi", "strategy", "seed"}, "scenario");

    Scenario sc;
    sc.id = doc.value("id", std::string("scenario"));
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) bad("seed must be a non-negative integer");
        sc.seed = doc["seed"].get<std::uint64_t>();
    }
    sc.quanton = quanton_from(require(doc, "quanton", "scenario"));

    const json &det = require(doc, "detector", "scenario");
    if (!det.is_object()) bad("detector must be an object");
    reject_unknown(det, {"dim", "state", "unitary"}, "detector");
    const json &state = require(det, "state", "detector");
    if (det.contains("dim")) {
        if (!det["dim"].is_number_unsigned()) bad("detector.dim must be a positive integer");
        sc.detector_dim = det["dim"].get<std::size_t>();
    } else if (state.is_object() && state.contains("matrix") && state["matrix"].is_array()) {
        sc.detector_dim = state["matrix"].size();
    } else {
        bad("detector.dim is required with preset states");
    }
    sc.detector_state = detector_state_from(state, sc.detector_dim, sc.seed);
    sc.detector_unitary = detector_unitary_from(require(det, "unitary", "detector"), sc.detector_dim, sc.seed);
    if (sc.detector_state.dim() != sc.detector_dim) {
        throw Error(ErrorKind::DimensionMismatch, "detector.state does not match detector.dim");
    }
    sc.phi = doc.contains("phi") ? number(doc["phi"], "phi") : 0.0;
    sc.strategy = doc.contains("strategy") ? strategy_from(doc["strategy"], sc.detector_dim) : std::nullopt;

    // Validate eagerly so errors surface at load time.
    const MZISetup s = sc.setup();
    (void)sc.make_strategy(s);
    return sc;
}

Scenario load_scenario(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scenario file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

std::string emit_scenario(const Scenario &sc) {
    json doc;
    doc["id"] = sc.id;
    doc["seed"] = sc.seed;
    doc["quanton"] = {{"matrix", matrix_to(sc.quanton)}};
    doc["detector"] = {{"dim", sc.detector_dim},
                       {"state", {{"matrix", matrix_to(sc.detector_state)}}},
                       {"unitary", {{"matrix", matrix_to(sc.detector_unitary)}}}};
    doc["phi"] = sc.phi;
    if (sc.strategy) {
        doc["strategy"] = {{"basis", matrix_to(sc.strategy->basis)}, {"subset", sc.strategy->subset}};
    } else {
        doc["strategy"] = "optimal";
    }
    return doc.dump(2) + "\n";
}

}  // namespace mzjm::cli
