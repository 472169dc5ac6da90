#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "rfl/learning.hpp"

namespace rfl {

namespace {

constexpr char kMagic[8] = {'R', 'F', 'L', 'M', 'L', 'P', '1', '\n'};

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_f64(std::ofstream& out, const double* v, size_t n) {
    out.write(reinterpret_cast<const char*>(v), static_cast<std::streamsize>(n * sizeof(double)));
}

std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw std::runtime_error("model file: truncated");
    return v;
}

void read_f64(std::ifstream& in, double* v, size_t n) {
    in.read(reinterpret_cast<char*>(v), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw std::runtime_error("model file: truncated");
}

} // namespace

void save_model(const MlpModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("model file: cannot write " + path);
    out.write(kMagic, sizeof(kMagic));
    write_u32(out, static_cast<std::uint32_t>(model.dims.size()));
    for (int d : model.dims) write_u32(out, static_cast<std::uint32_t>(d));
    write_f64(out, &model.leaky_alpha, 1);
    for (int l = 0; l < model.layer_count(); ++l) {
        write_f64(out, model.weights[l].data(), model.weights[l].size());
        write_f64(out, model.biases[l].data(), model.biases[l].size());
    }
    write_u32(out, static_cast<std::uint32_t>(model.stats.in_min.size()));
    write_u32(out, static_cast<std::uint32_t>(model.stats.out_min.size()));
    write_f64(out, model.stats.in_min.data(), model.stats.in_min.size());
    write_f64(out, model.stats.in_max.data(), model.stats.in_max.size());
    write_f64(out, model.stats.out_min.data(), model.stats.out_min.size());
    write_f64(out, model.stats.out_max.data(), model.stats.out_max.size());
    if (!out) throw std::runtime_error("model file: write failed for " + path);
}

MlpModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("model file: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("model file: bad magic in " + path);
    const std::uint32_t n_dims = read_u32(in);
    if (n_dims < 2 || n_dims > 64) throw std::runtime_error("model file: invalid layer count");
    MlpModel m;
    for (std::uint32_t i = 0; i < n_dims; ++i) {
        const std::uint32_t d = read_u32(in);
        if (d == 0 || d > 65536) throw std::runtime_error("model file: invalid dimension");
        m.dims.push_back(static_cast<int>(d));
    }
    read_f64(in, &m.leaky_alpha, 1);
    for (size_t l = 0; l + 1 < m.dims.size(); ++l) {
        std::vector<double> w(static_cast<size_t>(m.dims[l]) * m.dims[l + 1]);
        std::vector<double> b(m.dims[l + 1]);
        read_f64(in, w.data(), w.size());
        read_f64(in, b.data(), b.size());
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    const std::uint32_t in_dim = read_u32(in);
    const std::uint32_t out_dim = read_u32(in);
    if (in_dim != static_cast<std::uint32_t>(m.dims.front()) ||
        out_dim != static_cast<std::uint32_t>(m.dims.back()))
        throw std::runtime_error("model file: normalization dims do not match architecture");
    m.stats.in_min.resize(in_dim);
    m.stats.in_max.resize(in_dim);
    m.stats.out_min.resize(out_dim);
    m.stats.out_max.resize(out_dim);
    read_f64(in, m.stats.in_min.data(), in_dim);
    read_f64(in, m.stats.in_max.data(), in_dim);
    read_f64(in, m.stats.out_min.data(), out_dim);
    read_f64(in, m.stats.out_max.data(), out_dim);
    in.peek();
    if (!in.eof()) throw std::runtime_error("model file: trailing bytes in " + path);
    return m;
}

} // namespace rfl
