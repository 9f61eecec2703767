#include "icdsel/binary_matrix.hpp"

#include <algorithm>
#include <sstream>

#include "icdsel/errors.hpp"
#include "icdsel/io.hpp"

namespace icdsel {

bool BinaryMatrix::get(int r, int c) const {
    const auto& row = rows[static_cast<std::size_t>(r)];
    return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(c));
}

std::size_t BinaryMatrix::nnz() const {
    std::size_t total = 0;
    for (const auto& r : rows) total += r.size();
    return total;
}

std::vector<std::vector<std::uint32_t>> BinaryMatrix::columns() const {
    std::vector<std::vector<std::uint32_t>> cols(static_cast<std::size_t>(n_cols));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (const std::uint32_t c : rows[r]) cols[c].push_back(static_cast<std::uint32_t>(r));
    return cols;
}

std::vector<double> BinaryMatrix::column_means() const {
    std::vector<double> means(static_cast<std::size_t>(n_cols), 0.0);
    for (const auto& r : rows)
        for (const std::uint32_t c : r) means[c] += 1.0;
    if (n_rows > 0)
        for (auto& m : means) m /= n_rows;
    return means;
}

Matrix BinaryMatrix::dense_block(const std::vector<int>& row_ids,
                                 const std::vector<int>& col_ids) const {
    if (col_ids.empty()) {
        Matrix out(static_cast<int>(row_ids.size()), n_cols);
        for (std::size_t i = 0; i < row_ids.size(); ++i) {
            double* dst = out.row_ptr(static_cast<int>(i));
            for (const std::uint32_t c : rows[static_cast<std::size_t>(row_ids[i])]) dst[c] = 1.0;
        }
        return out;
    }
    std::vector<int> col_pos(static_cast<std::size_t>(n_cols), -1);
    for (std::size_t j = 0; j < col_ids.size(); ++j) col_pos[static_cast<std::size_t>(col_ids[j])] = static_cast<int>(j);
    Matrix out(static_cast<int>(row_ids.size()), static_cast<int>(col_ids.size()));
    for (std::size_t i = 0; i < row_ids.size(); ++i) {
        double* dst = out.row_ptr(static_cast<int>(i));
        for (const std::uint32_t c : rows[static_cast<std::size_t>(row_ids[i])]) {
            const int p = col_pos[c];
            if (p >= 0) dst[p] = 1.0;
        }
    }
    return out;
}

BinaryMatrix BinaryMatrix::take_rows(const std::vector<int>& row_ids) const {
    BinaryMatrix out;
    out.n_rows = static_cast<int>(row_ids.size());
    out.n_cols = n_cols;
    out.feature_index = feature_index;
    out.rows.reserve(row_ids.size());
    for (const int r : row_ids) out.rows.push_back(rows[static_cast<std::size_t>(r)]);
    return out;
}

std::string BinaryMatrix::serialize() const {
    std::ostringstream ss;
    for (int c = 0; c < n_cols; ++c) {
        if (c) ss << ',';
        ss << feature_index[static_cast<std::size_t>(c)];
    }
    ss << '\n';
    for (const auto& row : rows) {
        bool first = true;
        for (const std::uint32_t c : row) {
            if (!first) ss << ' ';
            ss << c << ":1";
            first = false;
        }
        ss << '\n';
    }
    return ss.str();
}

BinaryMatrix BinaryMatrix::deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw MalformedRow("matrix file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    BinaryMatrix out;
    out.feature_index = io::split(line, ',');
    out.n_cols = static_cast<int>(out.feature_index.size());
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::uint32_t> row;
        std::size_t pos = 0;
        while (pos < line.size()) {
            const std::size_t sp = line.find(' ', pos);
            const std::string tok = line.substr(pos, sp == std::string::npos ? sp : sp - pos);
            const std::size_t colon = tok.find(':');
            if (colon == std::string::npos || tok.substr(colon + 1) != "1")
                throw MalformedRow("bad matrix entry '" + tok + "'");
            const long c = std::stol(tok.substr(0, colon));
            if (c < 0 || c >= out.n_cols)
                throw MalformedRow("column index " + std::to_string(c) + " out of range");
            row.push_back(static_cast<std::uint32_t>(c));
            if (sp == std::string::npos) break;
            pos = sp + 1;
        }
        if (!std::is_sorted(row.begin(), row.end()))
            throw MalformedRow("matrix row entries must be sorted");
        out.rows.push_back(std::move(row));
    }
    out.n_rows = static_cast<int>(out.rows.size());
    return out;
}

std::string BinaryMatrix::fingerprint() const {
    const std::string text = serialize();
    return io::fingerprint_bytes(text.data(), text.size());
}

}  // namespace icdsel
