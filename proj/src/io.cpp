#include "revscatter/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace revscatter {

using nlohmann::json;

namespace {

json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return j;
}

void save(json j, const std::string& path, const std::string& hash) {
    j["version"] = kToolVersion;
    j["config"] = hash;
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write " + path);
    out << std::setw(2) << j << "\n";
}

template <class T>
T field(const json& j, const char* name, const std::string& path) {
    if (!j.contains(name))
        throw SchemaError(path + ": missing field \"" + name + "\"");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw SchemaError(path + ": field \"" + name + "\": " + e.what());
    }
}

}  // namespace

RadiusProfile read_profile_json(const std::string& path) {
    json j = load(path);
    int m = field<int>(j, "m", path);
    double r_o = field<double>(j, "r_o", path);
    bool has_samples = j.contains("q_samples");
    bool has_series = j.contains("sine_coeffs");
    if (has_samples == has_series)
        throw SchemaError(path +
                          ": exactly one of \"q_samples\"/\"sine_coeffs\" required");
    if (has_series) {
        SineSeries s{field<std::vector<double>>(j, "sine_coeffs", path)};
        int grid_n = j.contains("grid_n") ? field<int>(j, "grid_n", path)
                                          : kDefaultGridN;
        return RadiusProfile::from_series(m, r_o, std::move(s), grid_n);
    }
    int grid_n = field<int>(j, "grid_n", path);
    auto q = field<std::vector<double>>(j, "q_samples", path);
    if (static_cast<int>(q.size()) != grid_n + 1)
        throw SchemaError(path + ": q_samples length must be grid_n + 1");
    return RadiusProfile::from_samples(m, r_o, Grid(0.0, 1.0, grid_n), std::move(q));
}

void write_profile_json(const RadiusProfile& p, const std::string& path,
                        const std::string& hash) {
    json j;
    j["m"] = p.m;
    j["r_o"] = p.r_o;
    if (p.series) {
        j["sine_coeffs"] = p.series->coeffs;
        j["grid_n"] = p.grid.n;
    } else {
        j["grid_n"] = p.grid.n;
        j["q_samples"] = p.q;
    }
    save(std::move(j), path, hash);
}

ZeroSet read_zeroset_json(const std::string& path) {
    json j = load(path);
    ZeroSet zs;
    zs.n0 = field<int>(j, "n0", path);
    zs.psi_norm = field<double>(j, "psi_norm", path);
    zs.bound_taus = field<std::vector<double>>(j, "bound_states_tau", path);
    zs.radius = field<double>(j, "radius", path);
    if (!j.contains("resonances"))
        throw SchemaError(path + ": missing field \"resonances\"");
    for (const auto& e : j.at("resonances")) {
        ResonanceEntry r;
        r.k = Complex(field<double>(e, "re", path), field<double>(e, "im", path));
        r.mult = e.contains("mult") ? field<int>(e, "mult", path) : 1;
        if (r.k.real() < 0.0)
            throw SchemaError(path + ": resonances must be Re >= 0 representatives");
        if (r.k.imag() >= 0.0)
            throw SchemaError(path + ": resonances must have Im < 0");
        zs.resonances.push_back(r);
    }
    if (j.contains("sup_support")) zs.sup_support = field<int>(j, "sup_support", path);
    zs.fit_tail();
    return zs;
}

void write_zeroset_json(const ZeroSet& zs, const std::string& path,
                        const std::string& hash) {
    json j;
    j["n0"] = zs.n0;
    j["psi_norm"] = zs.psi_norm;
    j["bound_states_tau"] = zs.bound_taus;
    j["radius"] = zs.radius;
    j["sup_support"] = zs.sup_support;
    j["resonances"] = json::array();
    for (const auto& r : zs.resonances)
        j["resonances"].push_back(
            {{"re", r.k.real()}, {"im", r.k.imag()}, {"mult", r.mult}});
    save(std::move(j), path, hash);
}

Potential read_potential_json(const std::string& path) {
    json j = load(path);
    int grid_n = field<int>(j, "grid_n", path);
    auto p = field<std::vector<double>>(j, "p_samples", path);
    if (static_cast<int>(p.size()) != grid_n + 1)
        throw SchemaError(path + ": p_samples length must be grid_n + 1");
    return Potential{Grid(0.0, 1.0, grid_n), std::move(p)};
}

void write_potential_json(const Potential& p, const std::string& path,
                          const std::string& hash) {
    json j;
    j["grid_n"] = p.grid.n;
    j["p_samples"] = p.p;
    save(std::move(j), path, hash);
}

struct CsvWriter::Impl {
    std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::string& hash,
                     const std::string& columns)
    : impl_(new Impl) {
    impl_->out.open(path);
    if (!impl_->out) throw SchemaError("cannot write " + path);
    impl_->out << "# version " << kToolVersion << "\n";
    impl_->out << "# config " << hash << "\n";
    impl_->out << columns << "\n";
    impl_->out << std::setprecision(15);
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) impl_->out << ',';
        impl_->out << v;
        first = false;
    }
    impl_->out << '\n';
}

std::string config_hash(const std::string& canonical) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace revscatter
