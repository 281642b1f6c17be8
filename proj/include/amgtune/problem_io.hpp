#pragma once

#include <filesystem>
#include <fstream>

#include "amgtune/dataset.hpp"
#include "amgtune/matrix_market.hpp"
#include "amgtune/problem.hpp"

namespace amgtune {

inline std::string sanitize_id(const std::string& id) {
    std::string s = id;
    for (char& c : s)
        if (c == '/' || c == ' ') c = '_';
    return s;
}

/// Writes NAME.mtx, NAME.rhs and NAME.meta under dir and returns the stem.
inline std::string save_problem(const ProblemInstance& prob, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::string stem = sanitize_id(prob.id);
    write_matrix_market(prob.matrix, dir + "/" + stem + ".mtx", /*symmetric_format=*/true);
    write_matrix_market_vector(prob.rhs, dir + "/" + stem + ".rhs");
    std::ofstream meta(dir + "/" + stem + ".meta");
    if (!meta) throw std::runtime_error("cannot write " + dir + "/" + stem + ".meta");
    meta << prob.metadata_record() << "\n";
    return stem;
}

inline ProblemInstance load_problem(const std::string& dir, const std::string& stem) {
    ProblemInstance prob;
    prob.matrix = read_matrix_market(dir + "/" + stem + ".mtx");
    prob.rhs = read_matrix_market_vector(dir + "/" + stem + ".rhs");
    std::ifstream meta(dir + "/" + stem + ".meta");
    if (!meta) throw std::runtime_error("cannot open " + dir + "/" + stem + ".meta");
    std::string kv;
    while (meta >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "id") prob.id = val;
        else if (key == "dim") prob.dim = std::stoi(val);
        else if (key == "p") prob.p = std::stoi(val);
        else if (key == "disc") prob.discretization = val;
        else if (key == "mesh") prob.mesh_family = val;
        else if (key == "pattern") prob.pattern = val;
        else if (key == "eps") prob.eps = std::stod(val);
        else if (key == "gamma") prob.gamma = std::stod(val);
    }
    return prob;
}

/// problems.txt: one stem per line, generation order.
inline void save_problem_index(const std::vector<std::string>& stems, const std::string& dir) {
    std::ofstream out(dir + "/problems.txt");
    if (!out) throw std::runtime_error("cannot write " + dir + "/problems.txt");
    for (const std::string& s : stems) out << s << "\n";
}

inline std::vector<std::string> load_problem_index(const std::string& dir) {
    std::ifstream in(dir + "/problems.txt");
    if (!in) throw std::runtime_error("cannot open " + dir + "/problems.txt");
    std::vector<std::string> stems;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) stems.push_back(line);
    return stems;
}

inline std::vector<ProblemInstance> load_problem_set(const std::string& dir) {
    std::vector<ProblemInstance> probs;
    for (const std::string& stem : load_problem_index(dir)) probs.push_back(load_problem(dir, stem));
    return probs;
}

// --- dataset files -----------------------------------------------------------

inline void save_samples(const std::vector<CostSample>& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const CostSample& s : samples) out << sample_record(s) << "\n";
    if (!out) throw std::runtime_error("write failed for " + path);
}

inline std::vector<CostSample> load_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<CostSample> samples;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) samples.push_back(parse_sample_record(line));
    return samples;
}

} // namespace amgtune
