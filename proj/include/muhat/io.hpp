#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "muhat/decay.hpp"
#include "muhat/goodfn.hpp"
#include "muhat/graphs.hpp"
#include "muhat/measures.hpp"
#include "muhat/slicing.hpp"

namespace muhat::io {

// Shortest round-trip formatting; output files are byte-stable across runs.
inline std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) {
        for (int prec = 1; prec < 17; ++prec) {
            char probe[40];
            std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
            std::sscanf(probe, "%lf", &back);
            if (back == v) return probe;
        }
    }
    return buf;
}

// Writes atomically enough for our purposes: assemble in memory, write a
// temp file, rename. Error paths never leave partial output behind.
inline void write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        out << content;
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("failed writing output file: " + path);
        }
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- measures: {"atoms": [[x, y], ...], "weights": [...]} -----------------

inline std::string to_json(const AtomicMeasure2D& mu) {
    nlohmann::json j;
    j["atoms"] = nlohmann::json::array();
    for (std::size_t i = 0; i < mu.size(); ++i) j["atoms"].push_back({mu.x[i], mu.y[i]});
    j["weights"] = mu.w;
    return j.dump();
}

inline std::string to_json(const AtomicMeasure1D& nu) {
    nlohmann::json j;
    j["atoms"] = nu.t;
    j["weights"] = nu.w;
    return j.dump();
}

inline AtomicMeasure2D measure2d_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("measure file is not valid JSON: ") + e.what());
    }
    if (!j.contains("atoms") || !j.contains("weights"))
        throw std::invalid_argument("measure file needs \"atoms\" and \"weights\"");
    std::vector<double> x, y, w;
    for (const auto& a : j["atoms"]) {
        if (!a.is_array() || a.size() != 2)
            throw std::invalid_argument("2d measure atoms must be [x, y] pairs");
        x.push_back(a[0].get<double>());
        y.push_back(a[1].get<double>());
    }
    for (const auto& v : j["weights"]) w.push_back(v.get<double>());
    return AtomicMeasure2D(std::move(x), std::move(y), std::move(w));
}

inline AtomicMeasure1D measure1d_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("measure file is not valid JSON: ") + e.what());
    }
    if (!j.contains("atoms") || !j.contains("weights"))
        throw std::invalid_argument("measure file needs \"atoms\" and \"weights\"");
    std::vector<double> t, w;
    for (const auto& v : j["atoms"]) t.push_back(v.get<double>());
    for (const auto& v : j["weights"]) w.push_back(v.get<double>());
    return AtomicMeasure1D(std::move(t), std::move(w));
}

// --- functions: CSV with header "x,value", strictly increasing x ----------

inline std::string to_csv(const SampledFunction& f) {
    std::string out = "x,value\n";
    for (std::size_t i = 0; i < f.size(); ++i)
        out += fmt(f.xs[i]) + "," + fmt(f.values[i]) + "\n";
    return out;
}

inline SampledFunction function_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("function file is empty");
    std::vector<double> xs, vals;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("function file line " + std::to_string(lineno) +
                                        ": expected x,value");
        try {
            xs.push_back(std::stod(line.substr(0, comma)));
            vals.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw std::invalid_argument("function file line " + std::to_string(lineno) +
                                        ": malformed number");
        }
    }
    return SampledFunction(std::move(xs), std::move(vals));
}

// --- decay estimates: CSV R, sup_modulus, argmax_xi1, argmax_xi2 ----------

inline std::string to_csv(const DecayEstimate& est) {
    std::string out = "R,sup_modulus,argmax_xi1,argmax_xi2\n";
    for (const auto& a : est.annuli)
        out += fmt(a.R) + "," + fmt(a.sup_modulus) + "," + fmt(a.argmax.xi1) + "," +
               fmt(a.argmax.xi2) + "\n";
    return out;
}

inline std::string summary_json(const DecayEstimate& est) {
    nlohmann::json j;
    j["fitted_slope"] = est.fitted_slope;
    j["exponent_s"] = est.exponent_s;
    j["conservative_s"] = est.conservative_s;
    j["constant_C"] = est.constant_C;
    j["resolution_cutoff"] = est.resolution_cutoff;
    j["resolution_warning"] = est.resolution_warning;
    return j.dump();
}

// --- energy reports: CSV t, tube_mass, energy ("inf" allowed) -------------

inline std::string to_csv(const EnergyReport& rep) {
    std::string out = "t,tube_mass,energy\n";
    for (const auto& s : rep.slices)
        out += fmt(s.t) + "," + fmt(s.tube_mass) + "," + fmt(s.energy) + "\n";
    return out;
}

// --- good-function sidecar -------------------------------------------------

inline std::string sidecar_json(const GoodFunction& g) {
    nlohmann::json j;
    j["N"] = g.N;
    j["epsilon"] = g.epsilon;
    j["delta"] = g.delta;
    j["horizontal_idx"] = g.horizontal_idx;
    j["vertical_idx"] = g.vertical_idx;
    return j.dump();
}

inline GoodFunction goodfunction_from_files(const std::string& fn_csv,
                                            const std::string& sidecar_text) {
    GoodFunction g;
    g.fn = function_from_csv(fn_csv);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(sidecar_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("sidecar is not valid JSON: ") + e.what());
    }
    g.N = j.at("N").get<std::int64_t>();
    g.epsilon = j.at("epsilon").get<double>();
    g.delta = j.at("delta").get<double>();
    g.horizontal_idx = j.at("horizontal_idx").get<std::vector<std::size_t>>();
    g.vertical_idx = j.at("vertical_idx").get<std::vector<std::size_t>>();
    g.check_invariants();
    return g;
}

// --- frequency lists: CSV xi1, xi2 -----------------------------------------

inline std::vector<FrequencyPoint> freqs_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("frequency file is empty");
    std::vector<FrequencyPoint> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("frequency file line " + std::to_string(lineno) +
                                        ": expected xi1,xi2");
        try {
            out.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
        } catch (const std::exception&) {
            throw std::invalid_argument("frequency file line " + std::to_string(lineno) +
                                        ": malformed number");
        }
    }
    if (out.empty()) throw std::invalid_argument("frequency file has no rows");
    return out;
}

}  // namespace muhat::io
