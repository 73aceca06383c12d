#include "jetlift/serialize.hpp"

#include "jetlift/errors.hpp"

#include "json.hpp"

namespace jetlift {

namespace {

using Json = nlohmann::ordered_json;

Json parse_doc(const std::string& text, const char* type) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw JetliftError(std::string("invalid JSON: ") + e.what());
    }
    check_arg(j.is_object(), "JSON document must be an object");
    check_arg(j.value("version", 0) == 1, "unsupported document version");
    check_arg(j.value("type", std::string()) == type,
              std::string("expected a \"") + type + "\" document");
    return j;
}

int need_int(const Json& j, const char* key) {
    check_arg(j.contains(key) && j.at(key).is_number_integer(),
              std::string("missing integer field \"") + key + "\"");
    return j.at(key).get<int>();
}

std::string need_str(const Json& j, const char* key) {
    check_arg(j.contains(key) && j.at(key).is_string(),
              std::string("missing string field \"") + key + "\"");
    return j.at(key).get<std::string>();
}

const Json& need_array(const Json& j, const char* key) {
    check_arg(j.contains(key) && j.at(key).is_array(),
              std::string("missing array field \"") + key + "\"");
    return j.at(key);
}

Json axes_of(uint32_t mask) {
    Json a = Json::array();
    for (int i = 1; i <= 32; ++i)
        if (mask & (1u << (i - 1))) a.push_back(i);
    return a;
}

uint32_t mask_of(const Json& axes, int dim) {
    check_arg(axes.is_array(), "dx must be an array of axes");
    uint32_t mask = 0;
    for (const Json& e : axes) {
        check_arg(e.is_number_integer(), "dx entries must be integers");
        int a = e.get<int>();
        check_arg(a >= 1 && a <= dim, "dx axis out of range");
        uint32_t bit = 1u << (a - 1);
        check_arg(!(mask & bit), "dx axis repeated");
        mask |= bit;
    }
    return mask;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json lf_to(const LocalFunction& f) {
    Json j;
    j["version"] = 1;
    j["type"] = "lf";
    j["dim"] = f.dim();
    j["expr"] = f.str();
    return j;
}

Json ldo_to(const Ldo& a) {
    Json j;
    j["version"] = 1;
    j["type"] = "ldo";
    j["dim"] = a.dim();
    j["arity"] = a.arity();
    j["polarized"] = a.polarized();
    j["expr"] = a.str();
    return j;
}

Json hform_to(const HorizontalForm& w) {
    Json j;
    j["version"] = 1;
    j["type"] = "hform";
    j["dim"] = w.dim();
    j["degree"] = w.degree();
    Json comps = Json::array();
    for (const auto& [m, f] : w.components()) {
        Json c;
        c["dx"] = axes_of(m);
        c["coeff"] = f.str();
        comps.push_back(std::move(c));
    }
    j["components"] = std::move(comps);
    return j;
}

Json oform_to(const OperatorForm& f) {
    Json j;
    j["version"] = 1;
    j["type"] = "oform";
    j["dim"] = f.dim();
    j["arity"] = f.arity();
    j["degree"] = f.degree();
    Json comps = Json::array();
    for (const auto& [m, a] : f.components()) {
        Json c;
        c["dx"] = axes_of(m);
        c["op"] = a.str();
        comps.push_back(std::move(c));
    }
    j["components"] = std::move(comps);
    return j;
}

OperatorForm oform_from(const Json& j) {
    int dim = need_int(j, "dim");
    int arity = need_int(j, "arity");
    int degree = need_int(j, "degree");
    OperatorForm f(dim, arity, degree);
    for (const Json& c : need_array(j, "components")) {
        uint32_t mask = mask_of(need_array(c, "dx"), dim);
        Ldo a = parse_ldo(need_str(c, "op"), dim, arity);
        f.add_component(mask, a);
    }
    return f;
}

Json dend_to(const DEndElement& f) {
    Json j;
    j["version"] = 1;
    j["type"] = "dend";
    j["dim"] = f.dim();
    j["arity"] = f.arity();
    j["degree"] = f.degree();
    Json fams = Json::array();
    for (const auto& [eps, form] : f.families()) {
        Json fam;
        Json keys = Json::array();
        for (uint32_t m : eps) keys.push_back(axes_of(m));
        fam["eps"] = std::move(keys);
        fam["form"] = oform_to(form);
        fams.push_back(std::move(fam));
    }
    j["families"] = std::move(fams);
    return j;
}

DEndElement dend_from(const Json& j) {
    int dim = need_int(j, "dim");
    int arity = need_int(j, "arity");
    int degree = need_int(j, "degree");
    DEndElement f(dim, arity, degree);
    for (const Json& fam : need_array(j, "families")) {
        const Json& keys = need_array(fam, "eps");
        check_arg(static_cast<int>(keys.size()) == arity,
                  "family key needs one wedge subset per slot");
        std::vector<uint32_t> eps;
        for (const Json& k : keys) eps.push_back(mask_of(k, dim));
        check_arg(fam.contains("form") && fam.at("form").is_object(),
                  "missing object field \"form\"");
        f.add_family(eps, oform_from(fam.at("form")));
    }
    return f;
}

Json tower_to(const ShLieTower& t) {
    Json j;
    j["version"] = 1;
    j["type"] = "tower";
    j["dim"] = t.dim;
    j["kmax"] = t.kmax;
    j["window"] = t.window;
    Json brs = Json::array();
    for (const auto& [k, el] : t.brackets) {
        Json b;
        b["arity"] = k;
        b["element"] = dend_to(el);
        brs.push_back(std::move(b));
    }
    j["brackets"] = std::move(brs);
    Json res = Json::array();
    for (const auto& [k, el] : t.residuals) {
        Json b;
        b["arity"] = k;
        b["element"] = dend_to(el);
        res.push_back(std::move(b));
    }
    j["residuals"] = std::move(res);
    return j;
}

} // namespace

std::string to_json_text(const LocalFunction& f) { return dump(lf_to(f)); }
std::string to_json_text(const Ldo& a) { return dump(ldo_to(a)); }
std::string to_json_text(const HorizontalForm& w) { return dump(hform_to(w)); }
std::string to_json_text(const OperatorForm& f) { return dump(oform_to(f)); }
std::string to_json_text(const DEndElement& f) { return dump(dend_to(f)); }
std::string to_json_text(const ShLieTower& t) { return dump(tower_to(t)); }

LocalFunction lf_from_json(const std::string& text) {
    Json j = parse_doc(text, "lf");
    return parse_lf(need_str(j, "expr"), need_int(j, "dim"));
}

Ldo ldo_from_json(const std::string& text) {
    Json j = parse_doc(text, "ldo");
    bool polarized = j.value("polarized", false);
    return parse_ldo(need_str(j, "expr"), need_int(j, "dim"),
                     need_int(j, "arity"), polarized);
}

HorizontalForm hform_from_json(const std::string& text) {
    Json j = parse_doc(text, "hform");
    int dim = need_int(j, "dim");
    int degree = need_int(j, "degree");
    HorizontalForm w(dim, degree);
    for (const Json& c : need_array(j, "components")) {
        uint32_t mask = mask_of(need_array(c, "dx"), dim);
        w.add_component(mask, parse_lf(need_str(c, "coeff"), dim));
    }
    return w;
}

OperatorForm oform_from_json(const std::string& text) {
    return oform_from(parse_doc(text, "oform"));
}

DEndElement dend_from_json(const std::string& text) {
    return dend_from(parse_doc(text, "dend"));
}

ShLieTower tower_from_json(const std::string& text) {
    Json j = parse_doc(text, "tower");
    ShLieTower t;
    t.dim = need_int(j, "dim");
    t.kmax = need_int(j, "kmax");
    t.window = need_int(j, "window");
    for (const Json& b : need_array(j, "brackets")) {
        int k = need_int(b, "arity");
        check_arg(b.contains("element") && b.at("element").is_object(),
                  "missing object field \"element\"");
        t.brackets.emplace(k, dend_from(b.at("element")));
    }
    for (const Json& b : need_array(j, "residuals")) {
        int k = need_int(b, "arity");
        check_arg(b.contains("element") && b.at("element").is_object(),
                  "missing object field \"element\"");
        t.residuals.emplace(k, dend_from(b.at("element")));
    }
    return t;
}

std::string json_doc_type(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return "";
    if (!j.contains("type") || !j.at("type").is_string()) return "";
    return j.at("type").get<std::string>();
}

} // namespace jetlift
