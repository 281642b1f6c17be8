#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>

#include "amgtune/nn.hpp"

namespace amgtune {

inline constexpr int kModelFormatVersion = 1;

/// Structured text model file: a version line, the architecture block, then
/// every parameter array with its shape and full-precision values.
inline void save_model(const SurrogateModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "amgtune-model " << kModelFormatVersion << "\n";
    out << "m " << model.spec.m << "\n";
    out << "in_channels " << model.spec.in_channels << "\n";
    out << "blocks " << model.spec.blocks.size() << "\n";
    for (const auto& b : model.spec.blocks)
        out << "block " << b.convs << " " << b.filters << " " << b.kernel << "\n";
    out << "dense " << model.spec.dense_widths.size() << "\n";
    for (int w : model.spec.dense_widths) out << w << "\n";
    out << "trained_epochs " << model.trained_epochs << "\n";
    char buf[64];
    if (std::isfinite(model.best_val_mse))
        std::snprintf(buf, sizeof buf, "%.17g", model.best_val_mse);
    else
        std::snprintf(buf, sizeof buf, "inf");
    out << "best_val_mse " << buf << "\n";
    out << "seed " << model.seed << "\n";
    for (const ParamArray& p : model.params) {
        out << "param " << p.name << " " << p.shape.size();
        for (int d : p.shape) out << " " << d;
        out << "\n";
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", p.value[i]);
            out << buf << ((i + 1) % 8 == 0 || i + 1 == p.value.size() ? "\n" : " ");
        }
    }
    out << "end\n";
    if (!out) throw std::runtime_error("write failed for " + path);
}

inline SurrogateModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "amgtune-model")
        throw std::runtime_error(path + ": not a model file");
    if (version != kModelFormatVersion)
        throw std::runtime_error(path + ": unsupported model version " + std::to_string(version));

    SurrogateModel model;
    ArchitectureSpec& spec = model.spec;
    spec.blocks.clear();
    spec.dense_widths.clear();
    std::size_t nblocks = 0, ndense = 0;
    if (!(in >> tag >> spec.m) || tag != "m") throw std::runtime_error(path + ": malformed model");
    if (!(in >> tag >> spec.in_channels) || tag != "in_channels")
        throw std::runtime_error(path + ": malformed model");
    if (!(in >> tag >> nblocks) || tag != "blocks")
        throw std::runtime_error(path + ": malformed model");
    for (std::size_t i = 0; i < nblocks; ++i) {
        ConvBlockSpec b;
        if (!(in >> tag >> b.convs >> b.filters >> b.kernel) || tag != "block")
            throw std::runtime_error(path + ": malformed block list");
        spec.blocks.push_back(b);
    }
    if (!(in >> tag >> ndense) || tag != "dense")
        throw std::runtime_error(path + ": malformed model");
    for (std::size_t i = 0; i < ndense; ++i) {
        int w = 0;
        if (!(in >> w)) throw std::runtime_error(path + ": malformed dense list");
        spec.dense_widths.push_back(w);
    }
    if (!(in >> tag >> model.trained_epochs) || tag != "trained_epochs")
        throw std::runtime_error(path + ": malformed model");
    std::string mse_token;
    if (!(in >> tag >> mse_token) || tag != "best_val_mse")
        throw std::runtime_error(path + ": malformed model");
    model.best_val_mse =
        mse_token == "inf" ? std::numeric_limits<double>::infinity() : std::stod(mse_token);
    if (!(in >> tag >> model.seed) || tag != "seed")
        throw std::runtime_error(path + ": malformed model");
    spec.validate();

    // the expected parameter list comes from the architecture alone
    SurrogateModel reference = make_model(spec, 0);
    while (in >> tag) {
        if (tag == "end") break;
        if (tag != "param") throw std::runtime_error(path + ": unexpected token " + tag);
        ParamArray p;
        std::size_t ndims = 0;
        if (!(in >> p.name >> ndims)) throw std::runtime_error(path + ": malformed param header");
        p.shape.resize(ndims);
        for (std::size_t d = 0; d < ndims; ++d)
            if (!(in >> p.shape[d])) throw std::runtime_error(path + ": malformed param shape");
        p.value.resize(nndetail::shape_size(p.shape));
        for (double& v : p.value)
            if (!(in >> v)) throw std::runtime_error(path + ": truncated parameter " + p.name);
        model.params.push_back(std::move(p));
    }
    if (tag != "end") throw std::runtime_error(path + ": truncated model file");

    if (model.params.size() != reference.params.size()) {
        std::ostringstream os;
        os << path << ": expected " << reference.params.size() << " parameter arrays, found "
           << model.params.size() << "; missing:";
        for (const ParamArray& r : reference.params) {
            bool found = false;
            for (const ParamArray& p : model.params) found = found || p.name == r.name;
            if (!found) os << " " << r.name;
        }
        throw std::runtime_error(os.str());
    }
    for (std::size_t i = 0; i < model.params.size(); ++i) {
        if (model.params[i].name != reference.params[i].name ||
            model.params[i].shape != reference.params[i].shape)
            throw std::runtime_error(path + ": parameter " + model.params[i].name +
                                     " does not match the architecture");
    }
    return model;
}

} // namespace amgtune
