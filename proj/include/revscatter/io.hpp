#pragma once

#include <iosfwd>
#include <string>

#include "revscatter/jost.hpp"
#include "revscatter/resonance.hpp"

namespace revscatter {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kToolVersion = "revscatter 0.1.0";

// Profile JSON: { "m", "r_o", "grid_n", "q_samples" } or
// { "m", "r_o", "sine_coeffs" }; exactly one of q_samples / sine_coeffs.
// Writers stamp "version" and "config" (hash) fields; readers ignore them.
RadiusProfile read_profile_json(const std::string& path);
void write_profile_json(const RadiusProfile& p, const std::string& path,
                        const std::string& hash = {});

// ZeroSet JSON: { "n0", "psi_norm", "bound_states_tau",
// "resonances": [{"re","im","mult"}], "radius" }; Re >= 0 representatives.
ZeroSet read_zeroset_json(const std::string& path);
void write_zeroset_json(const ZeroSet& zs, const std::string& path,
                        const std::string& hash = {});

// Potential JSON: { "grid_n", "p_samples" } on [0,1].
Potential read_potential_json(const std::string& path);
void write_potential_json(const Potential& p, const std::string& path,
                          const std::string& hash = {});

// CSV with a header block (# version, # config <hash>) and one title row.
struct CsvWriter {
    explicit CsvWriter(const std::string& path, const std::string& config_hash,
                       const std::string& columns);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    void row(std::initializer_list<double> values);

  private:
    struct Impl;
    Impl* impl_;
};

// FNV-1a over the canonical config string; hex-encoded.
std::string config_hash(const std::string& canonical);

}  // namespace revscatter
