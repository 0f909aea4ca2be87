#include "compclass/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

namespace compclass {

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

void write_header(std::ostream& out, const char* kind, const Provenance& prov) {
    out << "# compclass " << kind << "\n";
    out << "# config_hash=" << prov.config_hash << " seed=" << prov.seed << "\n";
}

void write_rows(std::ostream& out, const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << format_real(m(r, c));
        out << "\n";
    }
}

double parse_real(const std::string& token, int line) {
    // strtod accepts "inf"/"nan"; reject those explicitly.
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size() || !std::isfinite(v))
        throw ValidationError("line " + std::to_string(line) + ": cannot parse number '" + token + "'");
    return v;
}

template <class Int>
Int parse_int(const std::string& token, int line) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ValidationError("line " + std::to_string(line) + ": cannot parse integer '" + token + "'");
    return v;
}

// Whitespace-token reader that skips '#' comment lines and tracks lines.
class TokenReader {
public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    std::string next(const char* what) {
        while (pending_.eof() || !(pending_ >> std::ws) || pending_.peek() == EOF) {
            std::string line;
            if (!std::getline(in_, line))
                throw ValidationError("unexpected end of file while reading " + std::string(what));
            ++line_;
            if (!line.empty() && line.front() == '#') continue;
            pending_.clear();
            pending_.str(line);
        }
        std::string tok;
        pending_ >> tok;
        return tok;
    }

    void expect(const std::string& keyword) {
        const auto tok = next(keyword.c_str());
        if (tok != keyword)
            throw ValidationError("line " + std::to_string(line_) + ": expected '" + keyword + "', got '" + tok + "'");
    }

    double real(const char* what) { return parse_real(next(what), line_); }
    int integer(const char* what) { return parse_int<int>(next(what), line_); }
    std::uint64_t u64(const char* what) { return parse_int<std::uint64_t>(next(what), line_); }

    Matrix matrix(int rows, int cols, const char* what) {
        Matrix m(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m(r, c) = real(what);
        return m;
    }

    int line() const { return line_; }

private:
    std::istream& in_;
    std::istringstream pending_;
    int line_ = 0;
};

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <class T, class Reader>
T load_file(const std::string& path, Reader reader) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return reader(in);
}

} // namespace

void write_model(std::ostream& out, const SourceModel& model, const Provenance& prov) {
    write_header(out, "source-model", prov);
    out << "classes " << model.classes() << "\n";
    out << "dimension " << model.ambient_dim() << "\n";
    out << "priors";
    for (double p : model.priors()) out << " " << format_real(p);
    out << "\n";
    for (int i = 0; i < model.classes(); ++i) {
        out << "covariance " << i + 1 << "\n";
        write_rows(out, model.covariance(i));
    }
}

SourceModel read_model(std::istream& in, RankTolerance tol) {
    TokenReader rd(in);
    rd.expect("classes");
    const int classes = rd.integer("class count");
    rd.expect("dimension");
    const int dim = rd.integer("dimension");
    if (classes < 1 || dim < 1) throw ValidationError("model file needs classes >= 1 and dimension >= 1");
    rd.expect("priors");
    std::vector<double> priors;
    for (int i = 0; i < classes; ++i) priors.push_back(rd.real("priors"));
    std::vector<Matrix> covs;
    for (int i = 0; i < classes; ++i) {
        rd.expect("covariance");
        const int idx = rd.integer("covariance index");
        if (idx != i + 1)
            throw ValidationError("line " + std::to_string(rd.line()) + ": expected covariance " + std::to_string(i + 1));
        covs.push_back(rd.matrix(dim, dim, "covariance"));
    }
    return SourceModel(std::move(priors), std::move(covs), tol);
}

void write_kernel(std::ostream& out, const MeasurementKernel& kernel, const Provenance& prov) {
    write_header(out, "measurement-kernel", prov);
    out << "design " << to_string(kernel.tag) << "\n";
    out << "seed " << kernel.seed << "\n";
    out << "rows " << kernel.measurements() << "\n";
    out << "cols " << kernel.ambient_dim() << "\n";
    write_rows(out, kernel.matrix);
}

MeasurementKernel read_kernel(std::istream& in) {
    TokenReader rd(in);
    MeasurementKernel k;
    rd.expect("design");
    k.tag = parse_design_tag(rd.next("design"));
    rd.expect("seed");
    k.seed = rd.u64("seed");
    rd.expect("rows");
    const int rows = rd.integer("rows");
    rd.expect("cols");
    const int cols = rd.integer("cols");
    if (rows < 1 || cols < 1) throw ValidationError("kernel file needs rows >= 1 and cols >= 1");
    k.matrix = rd.matrix(rows, cols, "kernel entries");
    return k;
}

LabeledDataset read_dataset(std::istream& in) {
    std::string line;
    int line_no = 0;
    std::size_t columns = 0;
    std::vector<int> labels;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto cells = split_csv(line);
        if (columns == 0) {
            if (cells.size() < 2 || cells[0] != "label")
                throw ValidationError("line " + std::to_string(line_no) + ": header must be label,f1,...,fN");
            columns = cells.size();
            continue;
        }
        if (cells.size() != columns)
            throw ValidationError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                                  " columns, got " + std::to_string(cells.size()));
        const int label = parse_int<int>(cells[0], line_no);
        if (label < 1) throw ValidationError("line " + std::to_string(line_no) + ": labels start at 1");
        labels.push_back(label - 1);
        for (std::size_t c = 1; c < cells.size(); ++c) values.push_back(parse_real(cells[c], line_no));
    }
    if (columns == 0) throw ValidationError("dataset has no header");
    if (labels.empty()) throw ValidationError("dataset has no samples");
    LabeledDataset data;
    data.labels = std::move(labels);
    const auto n = static_cast<Eigen::Index>(data.labels.size());
    const auto dim = static_cast<Eigen::Index>(columns - 1);
    data.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        values.data(), n, dim);
    return data;
}

void write_dataset(std::ostream& out, const LabeledDataset& data, const Provenance* prov) {
    if (prov) out << "# config_hash=" << prov->config_hash << " seed=" << prov->seed << "\n";
    out << "label";
    for (int c = 0; c < data.dimension(); ++c) out << ",f" << c + 1;
    out << "\n";
    for (int r = 0; r < data.size(); ++r) {
        out << data.labels[static_cast<std::size_t>(r)] + 1;
        for (int c = 0; c < data.dimension(); ++c) out << "," << format_real(data.features(r, c));
        out << "\n";
    }
}

DatasetSplit stratified_split(const LabeledDataset& data, int classes, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ValidationError("split fraction must lie in (0, 1)");
    data.validate(classes);
    const auto counts = data.class_counts(classes);

    // Largest-remainder apportionment of the training total across classes.
    const auto target = static_cast<int>(std::llround(train_fraction * data.size()));
    std::vector<int> take(static_cast<std::size_t>(classes));
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (int c = 0; c < classes; ++c) {
        const double exact = train_fraction * counts[static_cast<std::size_t>(c)];
        take[static_cast<std::size_t>(c)] = static_cast<int>(std::floor(exact));
        assigned += take[static_cast<std::size_t>(c)];
        remainders.emplace_back(exact - std::floor(exact), c);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < target && k < remainders.size(); ++k) {
        const int c = remainders[k].second;
        if (take[static_cast<std::size_t>(c)] < counts[static_cast<std::size_t>(c)]) {
            ++take[static_cast<std::size_t>(c)];
            ++assigned;
        }
    }

    Rng rng(seed);
    std::vector<char> in_train(data.labels.size(), 0);
    for (int c = 0; c < classes; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t k = 0; k < data.labels.size(); ++k)
            if (data.labels[k] == c) members.push_back(k);
        std::shuffle(members.begin(), members.end(), rng);
        for (int k = 0; k < take[static_cast<std::size_t>(c)]; ++k) in_train[members[static_cast<std::size_t>(k)]] = 1;
    }

    DatasetSplit out;
    std::vector<Eigen::Index> train_rows, test_rows;
    for (std::size_t k = 0; k < data.labels.size(); ++k) {
        (in_train[k] ? train_rows : test_rows).push_back(static_cast<Eigen::Index>(k));
        (in_train[k] ? out.train : out.test).labels.push_back(data.labels[k]);
    }
    out.train.features = data.features(train_rows, Eigen::all);
    out.test.features = data.features(test_rows, Eigen::all);
    return out;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, const Provenance& prov) {
    out << "# config_hash=" << prov.config_hash << " seed=" << prov.seed << " trials=" << result.trials << "\n";
    out << "axis,pe,se,bound,d\n";
    for (const auto& p : result.points) {
        out << format_real(p.axis) << "," << format_real(p.pe) << "," << format_real(p.se) << ","
            << format_real(p.bound) << "," << format_real(p.exponent) << "\n";
    }
}

SourceModel load_model(const std::string& path, RankTolerance tol) {
    return load_file<SourceModel>(path, [&](std::istream& in) { return read_model(in, tol); });
}

MeasurementKernel load_kernel(const std::string& path) {
    return load_file<MeasurementKernel>(path, [](std::istream& in) { return read_kernel(in); });
}

LabeledDataset load_dataset(const std::string& path) {
    return load_file<LabeledDataset>(path, [](std::istream& in) { return read_dataset(in); });
}

} // namespace compclass
