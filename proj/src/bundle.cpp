#include "sectlabel/bundle.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "sectlabel/errors.hpp"

using nlohmann::json;

namespace sectlabel {

namespace {

constexpr char kTensorMagic[8] = {'S', 'L', 'T', 'N', 'S', 'R', '0', '1'};
constexpr char kBundleMagic[8] = {'S', 'L', 'B', 'N', 'D', 'L', '0', '1'};

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

void write_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    write_u32(out, bits);
}

std::uint32_t read_u32(std::istream& in, const std::string& origin) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw FormatError(origin + ": truncated file");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t read_u64(std::istream& in, const std::string& origin) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8))
        throw FormatError(origin + ": truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

float read_f32(std::istream& in, const std::string& origin) {
    const std::uint32_t bits = read_u32(in, origin);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

template <typename S>
std::vector<NamedTensor> tensors_from_params(const std::string& prefix,
                                             const std::vector<ParamView<S>>& params) {
    std::vector<NamedTensor> out;
    for (const auto& p : params) {
        NamedTensor t;
        t.name = prefix + p.name;
        t.rows = static_cast<std::uint32_t>(p.rows);
        t.cols = static_cast<std::uint32_t>(p.cols);
        t.data.resize(static_cast<std::size_t>(p.size()));
        // column-major storage -> row-major container layout
        for (Eigen::Index r = 0; r < p.rows; ++r)
            for (Eigen::Index c = 0; c < p.cols; ++c)
                t.data[static_cast<std::size_t>(r * p.cols + c)] =
                    static_cast<float>(p.value[c * p.rows + r]);
        out.push_back(std::move(t));
    }
    return out;
}

template <typename S>
void params_from_tensors(const std::string& prefix, const std::vector<ParamView<S>>& params,
                         const std::map<std::string, const NamedTensor*>& index,
                         const std::string& origin) {
    for (const auto& p : params) {
        const auto it = index.find(prefix + p.name);
        if (it == index.end())
            throw FormatError(origin + ": missing tensor '" + prefix + p.name + "'");
        const NamedTensor& t = *it->second;
        if (static_cast<Eigen::Index>(t.rows) != p.rows ||
            static_cast<Eigen::Index>(t.cols) != p.cols)
            throw FormatError(origin + ": tensor '" + t.name + "' has shape " +
                              std::to_string(t.rows) + "x" + std::to_string(t.cols) +
                              ", expected " + std::to_string(p.rows) + "x" +
                              std::to_string(p.cols));
        for (Eigen::Index r = 0; r < p.rows; ++r)
            for (Eigen::Index c = 0; c < p.cols; ++c)
                p.value[c * p.rows + r] =
                    static_cast<S>(t.data[static_cast<std::size_t>(r * p.cols + c)]);
    }
}

NamedTensor tensor_from_matrix(const std::string& name, const Eigen::MatrixXd& m) {
    NamedTensor t;
    t.name = name;
    t.rows = static_cast<std::uint32_t>(m.rows());
    t.cols = static_cast<std::uint32_t>(m.cols());
    t.data.resize(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            t.data[static_cast<std::size_t>(r) * t.cols + static_cast<std::size_t>(c)] =
                static_cast<float>(m(r, c));
    return t;
}

Eigen::MatrixXd matrix_from_tensor(const NamedTensor& t) {
    Eigen::MatrixXd m(t.rows, t.cols);
    for (std::uint32_t r = 0; r < t.rows; ++r)
        for (std::uint32_t c = 0; c < t.cols; ++c)
            m(r, c) = static_cast<double>(t.data[static_cast<std::size_t>(r) * t.cols + c]);
    return m;
}

std::string join_lines(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += '\n';
        out += items[i];
    }
    return out;
}

std::vector<std::string> split_lines(const std::string& joined) {
    std::vector<std::string> out;
    if (joined.empty()) return out;
    std::istringstream ss(joined);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

const NamedTensor& require_tensor(const std::map<std::string, const NamedTensor*>& index,
                                  const std::string& name, const std::string& origin) {
    const auto it = index.find(name);
    if (it == index.end()) throw FormatError(origin + ": missing tensor '" + name + "'");
    return *it->second;
}

} // namespace

void write_tensor_container(std::ostream& out, const std::vector<NamedTensor>& tensors) {
    out.write(kTensorMagic, 8);
    write_u32(out, static_cast<std::uint32_t>(tensors.size()));
    for (const NamedTensor& t : tensors) {
        write_u32(out, static_cast<std::uint32_t>(t.name.size()));
        out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        write_u32(out, t.rows);
        write_u32(out, t.cols);
        if (t.data.size() != static_cast<std::size_t>(t.rows) * t.cols)
            throw DataError("tensor '" + t.name + "' data does not match its shape");
        for (float v : t.data) write_f32(out, v);
    }
}

std::vector<NamedTensor> read_tensor_container(std::istream& in, const std::string& origin) {
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kTensorMagic, 8) != 0)
        throw FormatError(origin + ": not a tensor container (bad magic)");
    const std::uint32_t count = read_u32(in, origin);
    std::vector<NamedTensor> tensors;
    tensors.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        NamedTensor t;
        const std::uint32_t name_len = read_u32(in, origin);
        t.name.resize(name_len);
        if (!in.read(t.name.data(), name_len)) throw FormatError(origin + ": truncated file");
        t.rows = read_u32(in, origin);
        t.cols = read_u32(in, origin);
        t.data.resize(static_cast<std::size_t>(t.rows) * t.cols);
        for (float& v : t.data) v = read_f32(in, origin);
        tensors.push_back(std::move(t));
    }
    return tensors;
}

void ModelBundle::save(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model bundle: " + path);

    json header;
    header["format_version"] = 1;
    header["feature_version"] = kLayoutFeatureVersion;
    header["labels"] = json::array();
    for (int k = 0; k < kNumLabels; ++k) header["labels"].push_back(to_string(label_from_code(k)));
    header["vocab"] = join_lines(vocab.tokens());
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(vocab.hash()));
    header["vocab_hash"] = hash_hex;
    header["embedding_dim"] = embedding_dim;
    header["embedding_trainable"] = embedding_trainable;
    header["focus"] = {{"lstm_units", focus_config.lstm_units}, {"fc1", focus_config.fc1},
                       {"fc2", focus_config.fc2}, {"fc3", focus_config.fc3},
                       {"drop1", focus_config.drop1}, {"drop2", focus_config.drop2},
                       {"drop3", focus_config.drop3}};
    header["surrounding"] = {{"focus_units", surrounding_config.focus_units},
                             {"neighbor_units", surrounding_config.neighbor_units},
                             {"fc1", surrounding_config.fc1}, {"fc2", surrounding_config.fc2},
                             {"drop1", surrounding_config.drop1},
                             {"drop2", surrounding_config.drop2}};
    header["layout"] = {{"fc1", layout_config.fc1}, {"fc2", layout_config.fc2},
                        {"drop1", layout_config.drop1}, {"drop2", layout_config.drop2}};
    header["layout_options"] = {{"normalize_counts", layout_options.normalize_counts}};
    header["rules"] = json::object();
    header["rules"]["name"] = rules.name;
    header["rules"]["patterns"] = json::array();
    for (const auto& [kw, label] : rules.header_patterns)
        header["rules"]["patterns"].push_back({kw, to_string(label)});
    header["stacker"] = {{"finetuned", stacker.finetuned},
                         {"finetuned_dataset", stacker.finetuned_dataset}};
    header["svm"] = {{"lambda", svm.selected_lambda()}};
    header["tfidf_tokens"] = join_lines(tfidf.tokens());
    header["meta"] = meta;

    std::vector<NamedTensor> tensors;
    if (!embedding_trainable && focus) {
        // one shared frozen table; model params() exclude it
        Mat<float>& v = focus->body().embedding().vectors;
        NamedTensor t;
        t.name = "shared/embedding";
        t.rows = static_cast<std::uint32_t>(v.rows());
        t.cols = static_cast<std::uint32_t>(v.cols());
        t.data.resize(static_cast<std::size_t>(v.size()));
        for (Eigen::Index r = 0; r < v.rows(); ++r)
            for (Eigen::Index c = 0; c < v.cols(); ++c)
                t.data[static_cast<std::size_t>(r * v.cols() + c)] = v(r, c);
        tensors.push_back(std::move(t));
    }
    auto append = [&tensors](std::vector<NamedTensor> more) {
        for (auto& t : more) tensors.push_back(std::move(t));
    };
    if (focus) append(tensors_from_params("focus/", focus->params()));
    if (surrounding) append(tensors_from_params("surrounding/", surrounding->params()));
    if (layout) append(tensors_from_params("layout/", layout->params()));
    if (merged) append(tensors_from_params("merged/", merged->params()));

    tensors.push_back(tensor_from_matrix("stacker/w", stacker.w));
    tensors.push_back(tensor_from_matrix("stacker/b", stacker.b));

    Eigen::MatrixXd svm_w(kNumLabels, svm.dim());
    for (int k = 0; k < kNumLabels; ++k)
        for (int j = 0; j < svm.dim(); ++j)
            svm_w(k, j) = svm.weights()[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    Eigen::MatrixXd svm_b(kNumLabels, 1);
    for (int k = 0; k < kNumLabels; ++k) svm_b(k, 0) = svm.biases()[static_cast<std::size_t>(k)];
    tensors.push_back(tensor_from_matrix("svm/W", svm_w));
    tensors.push_back(tensor_from_matrix("svm/b", svm_b));

    Eigen::MatrixXd idf(1, tfidf.dim());
    for (int j = 0; j < tfidf.dim(); ++j) idf(0, j) = tfidf.idf()[static_cast<std::size_t>(j)];
    tensors.push_back(tensor_from_matrix("tfidf/idf", idf));

    const std::string header_text = header.dump();
    out.write(kBundleMagic, 8);
    write_u64(out, header_text.size());
    out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
    write_tensor_container(out, tensors);
    if (!out) throw IoError("failed writing model bundle: " + path);
}

ModelBundle ModelBundle::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read model bundle: " + path);

    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kBundleMagic, 8) != 0)
        throw FormatError(path + ": not a model bundle (bad magic)");
    const std::uint64_t header_len = read_u64(in, path);
    std::string header_text(header_len, '\0');
    if (!in.read(header_text.data(), static_cast<std::streamsize>(header_len)))
        throw FormatError(path + ": truncated header");
    json header;
    try {
        header = json::parse(header_text);
    } catch (const json::parse_error& e) {
        throw FormatError(path + ": bad bundle header: " + e.what());
    }

    if (header.value("feature_version", -1) != kLayoutFeatureVersion)
        throw FormatError(path + ": layout feature version " +
                          std::to_string(header.value("feature_version", -1)) +
                          " does not match this build (" +
                          std::to_string(kLayoutFeatureVersion) + ")");

    ModelBundle bundle;
    bundle.vocab = Vocabulary(split_lines(header.at("vocab").get<std::string>()));
    bundle.embedding_dim = header.at("embedding_dim").get<int>();
    bundle.embedding_trainable = header.at("embedding_trainable").get<bool>();

    const json& jf = header.at("focus");
    bundle.focus_config = {jf.at("lstm_units"), jf.at("fc1"), jf.at("fc2"), jf.at("fc3"),
                           jf.at("drop1"), jf.at("drop2"), jf.at("drop3")};
    const json& js = header.at("surrounding");
    bundle.surrounding_config = {js.at("focus_units"), js.at("neighbor_units"), js.at("fc1"),
                                 js.at("fc2"), js.at("drop1"), js.at("drop2")};
    const json& jl = header.at("layout");
    bundle.layout_config = {jl.at("fc1"), jl.at("fc2"), jl.at("drop1"), jl.at("drop2")};
    bundle.layout_options.normalize_counts =
        header.at("layout_options").value("normalize_counts", true);

    bundle.rules.name = header.at("rules").value("name", "");
    for (const auto& p : header.at("rules").at("patterns")) {
        const auto label = parse_label(p.at(1).get<std::string>());
        if (!label) throw FormatError(path + ": bad rule label in bundle");
        bundle.rules.header_patterns.emplace_back(p.at(0).get<std::string>(), *label);
    }

    const auto tensors = read_tensor_container(in, path);
    std::map<std::string, const NamedTensor*> index;
    for (const NamedTensor& t : tensors) index[t.name] = &t;

    auto make_table = [&](bool trainable) {
        auto table = std::make_shared<EmbeddingTable<float>>();
        table->dim = bundle.embedding_dim;
        table->trainable = trainable;
        table->vectors = Mat<float>::Zero(bundle.vocab.size(), bundle.embedding_dim);
        if (trainable) table->grad = Mat<float>::Zero(bundle.vocab.size(), bundle.embedding_dim);
        return table;
    };

    std::shared_ptr<EmbeddingTable<float>> shared;
    if (!bundle.embedding_trainable) {
        shared = make_table(false);
        const NamedTensor& t = require_tensor(index, "shared/embedding", path);
        if (static_cast<Eigen::Index>(t.rows) != shared->vectors.rows() ||
            static_cast<Eigen::Index>(t.cols) != shared->vectors.cols())
            throw FormatError(path + ": shared embedding shape mismatch");
        for (std::uint32_t r = 0; r < t.rows; ++r)
            for (std::uint32_t c = 0; c < t.cols; ++c)
                shared->vectors(r, c) = t.data[static_cast<std::size_t>(r) * t.cols + c];
    }

    auto table_for = [&]() {
        return bundle.embedding_trainable ? make_table(true) : shared;
    };

    bundle.focus = std::make_unique<FocusModel<float>>(table_for(), bundle.focus_config, 0);
    bundle.surrounding = std::make_unique<SurroundingModel<float>>(
        table_for(), bundle.surrounding_config, 0);
    bundle.layout = std::make_unique<LayoutModel<float>>(bundle.layout_config, 0);
    bundle.merged = std::make_unique<MergedModel<float>>(table_for(), bundle.focus_config,
                                                         bundle.surrounding_config,
                                                         bundle.layout_config, 0);
    params_from_tensors("focus/", bundle.focus->params(), index, path);
    params_from_tensors("surrounding/", bundle.surrounding->params(), index, path);
    params_from_tensors("layout/", bundle.layout->params(), index, path);
    params_from_tensors("merged/", bundle.merged->params(), index, path);

    bundle.stacker.w = matrix_from_tensor(require_tensor(index, "stacker/w", path));
    bundle.stacker.b = matrix_from_tensor(require_tensor(index, "stacker/b", path));
    if (bundle.stacker.w.rows() != kNumLabels || bundle.stacker.w.cols() != kStackingDim ||
        bundle.stacker.b.size() != kNumLabels)
        throw FormatError(path + ": stacker tensor shape mismatch");
    bundle.stacker.finetuned = header.at("stacker").value("finetuned", false);
    bundle.stacker.finetuned_dataset = header.at("stacker").value("finetuned_dataset", "");

    const Eigen::MatrixXd svm_w = matrix_from_tensor(require_tensor(index, "svm/W", path));
    const Eigen::MatrixXd svm_b = matrix_from_tensor(require_tensor(index, "svm/b", path));
    std::vector<std::vector<double>> w(kNumLabels,
                                       std::vector<double>(static_cast<std::size_t>(svm_w.cols())));
    std::vector<double> b(kNumLabels);
    for (int k = 0; k < kNumLabels; ++k) {
        for (Eigen::Index j = 0; j < svm_w.cols(); ++j)
            w[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = svm_w(k, j);
        b[static_cast<std::size_t>(k)] = svm_b(k, 0);
    }
    bundle.svm = LinearSvm::from_parts(std::move(w), std::move(b),
                                       header.at("svm").value("lambda", 0.0));

    const Eigen::MatrixXd idf = matrix_from_tensor(require_tensor(index, "tfidf/idf", path));
    std::vector<double> idf_values(static_cast<std::size_t>(idf.cols()));
    for (Eigen::Index j = 0; j < idf.cols(); ++j) idf_values[static_cast<std::size_t>(j)] = idf(0, j);
    bundle.tfidf = TfidfVectorizer::from_parts(
        split_lines(header.at("tfidf_tokens").get<std::string>()), std::move(idf_values));

    bundle.meta = header.value("meta", json::object());
    return bundle;
}

std::uint64_t ModelBundle::base_params_hash() {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix_hash = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= static_cast<unsigned char>(v >> (8 * i));
            h *= 1099511628211ULL;
        }
    };
    if (focus) mix_hash(params_hash(focus->params()));
    if (surrounding) mix_hash(params_hash(surrounding->params()));
    if (layout) mix_hash(params_hash(layout->params()));
    if (merged) mix_hash(params_hash(merged->params()));
    return h;
}

} // namespace sectlabel
