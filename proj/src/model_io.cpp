#include <bit>
#include <cstring>
#include <fstream>

#include "culinary/classify.hpp"
#include "culinary/error.hpp"

namespace culinary {

namespace {

constexpr const char* kModule = "classify";
constexpr char kMagic[8] = {'C', 'U', 'L', 'M', 'O', 'D', 'E', 'L'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kLinearTag = 1;
constexpr std::uint32_t kMlpTag = 2;

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }
    void strings(const std::vector<std::string>& list) {
        u64(list.size());
        for (const auto& s : list) str(s);
    }
    void doubles(const double* data, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) f64(data[i]);
    }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::uint64_t bytes(int count) {
        std::uint64_t v = 0;
        for (int i = 0; i < count; ++i) {
            const int c = in_.get();
            if (c == std::char_traits<char>::eof()) throw DataError(kModule, "model file is truncated");
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
        }
        return v;
    }
    std::uint32_t u32() { return static_cast<std::uint32_t>(bytes(4)); }
    std::uint64_t u64() { return bytes(8); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const auto n = u32();
        std::string s(n, '\0');
        if (!in_.read(s.data(), n)) throw DataError(kModule, "model file is truncated");
        return s;
    }
    std::vector<std::string> strings() {
        const auto n = u64();
        if (n > (1ULL << 32)) throw DataError(kModule, "model file is corrupt");
        std::vector<std::string> list;
        for (std::uint64_t i = 0; i < n; ++i) list.push_back(str());
        return list;
    }
    void doubles(double* data, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) data[i] = f64();
    }

private:
    std::istream& in_;
};

}  // namespace

void save_model(const Model& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(kModule, "cannot write model file " + path.string());
    out.write(kMagic, sizeof(kMagic));
    Writer w(out);
    w.u32(kVersion);
    if (const auto* linear = std::get_if<LinearModel>(&model)) {
        w.u32(kLinearTag);
        w.strings(linear->feature_names);
        w.strings(linear->class_names);
        w.doubles(linear->weights.data(), linear->weights.size());
        w.doubles(linear->biases.data(), linear->biases.size());
        w.doubles(linear->class_weights.data(), linear->class_weights.size());
    } else {
        const auto& mlp = std::get<MlpModel>(model);
        w.u32(kMlpTag);
        w.strings(mlp.feature_names);
        w.strings(mlp.class_names);
        w.f64(mlp.dropout_rate);
        w.f64(mlp.rho);
        w.f64(mlp.eps);
        const auto sizes = mlp.layer_sizes();
        w.u64(sizes.size());
        for (const auto s : sizes) w.u64(s);
        for (const auto& layer : mlp.layers) {
            w.doubles(layer.weights.data(), static_cast<std::size_t>(layer.weights.size()));
            w.doubles(layer.bias.data(), static_cast<std::size_t>(layer.bias.size()));
        }
    }
    if (!out) throw DataError(kModule, "failed writing model file " + path.string());
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(kModule, "cannot read model file " + path.string());
    char magic[sizeof(kMagic)];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw DataError(kModule, "not a model file: " + path.string());
    }
    Reader r(in);
    if (const auto version = r.u32(); version != kVersion) {
        throw DataError(kModule, "unsupported model version " + std::to_string(version));
    }
    const auto tag = r.u32();
    if (tag == kLinearTag) {
        LinearModel m;
        m.feature_names = r.strings();
        m.class_names = r.strings();
        m.weights.resize(m.feature_names.size() * m.class_names.size());
        r.doubles(m.weights.data(), m.weights.size());
        m.biases.resize(m.class_names.size());
        r.doubles(m.biases.data(), m.biases.size());
        m.class_weights.resize(m.class_names.size());
        r.doubles(m.class_weights.data(), m.class_weights.size());
        return m;
    }
    if (tag != kMlpTag) throw DataError(kModule, "unknown model kind " + std::to_string(tag));
    MlpModel m;
    m.feature_names = r.strings();
    m.class_names = r.strings();
    m.dropout_rate = r.f64();
    m.rho = r.f64();
    m.eps = r.f64();
    const auto count = r.u64();
    if (count < 2 || count > 64) throw DataError(kModule, "model file is corrupt");
    std::vector<std::size_t> sizes;
    for (std::uint64_t i = 0; i < count; ++i) sizes.push_back(r.u64());
    if (sizes.front() != m.feature_names.size() || sizes.back() != m.class_names.size()) {
        throw DataError(kModule, "model layer sizes disagree with its vocabulary or classes");
    }
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const auto in_dim = static_cast<Eigen::Index>(sizes[l]);
        const auto out_dim = static_cast<Eigen::Index>(sizes[l + 1]);
        DenseLayer layer;
        layer.weights.resize(out_dim, in_dim);
        r.doubles(layer.weights.data(), static_cast<std::size_t>(layer.weights.size()));
        layer.bias.resize(out_dim);
        r.doubles(layer.bias.data(), static_cast<std::size_t>(layer.bias.size()));
        layer.mean_sq_grad_w = Eigen::MatrixXd::Zero(out_dim, in_dim);
        layer.mean_sq_update_w = Eigen::MatrixXd::Zero(out_dim, in_dim);
        layer.mean_sq_grad_b = Eigen::VectorXd::Zero(out_dim);
        layer.mean_sq_update_b = Eigen::VectorXd::Zero(out_dim);
        m.layers.push_back(std::move(layer));
    }
    return m;
}

}  // namespace culinary
