#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "icdsel/dense.hpp"

namespace icdsel {

// Sparse row-oriented binary design matrix. Entries are exactly {0,1}; a row
// stores the sorted indices of its set columns. feature_index maps column j
// to its code string (columns are ordered lexicographically by code).
struct BinaryMatrix {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<std::vector<std::uint32_t>> rows;
    std::vector<std::string> feature_index;

    bool get(int r, int c) const;
    std::size_t nnz() const;

    // Column-oriented copy: for each column, sorted row indices.
    std::vector<std::vector<std::uint32_t>> columns() const;

    std::vector<double> column_means() const;

    // Dense m x |cols| block for the given rows/columns (cols empty = all).
    Matrix dense_block(const std::vector<int>& row_ids, const std::vector<int>& col_ids) const;

    BinaryMatrix take_rows(const std::vector<int>& row_ids) const;

    // Text round-trip per the matrix file format: header line of codes, then
    // one "col:1 col:1 ..." line per row.
    std::string serialize() const;
    static BinaryMatrix deserialize(const std::string& text);

    std::string fingerprint() const;
};

}  // namespace icdsel
