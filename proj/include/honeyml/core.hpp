#ifndef HONEYML_CORE_HPP
#define HONEYML_CORE_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace honeyml {

/// Raised when a CSV header does not match the fixed column layout.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised for cells that cannot be read as a concentration or token.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised for values that parse but violate a data invariant.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a model document is malformed or carries an unknown version.
struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when training a fold fails; carries the fold index.
struct TrainingError : std::runtime_error {
    TrainingError(std::size_t fold, const std::string& what)
        : std::runtime_error("fold " + std::to_string(fold) + ": " + what), fold_index(fold) {}
    std::size_t fold_index;
};

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    /// Rows picked by index, in the given order (duplicates allowed).
    Matrix select_rows(std::span<const std::size_t> idx) const {
        Matrix out(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto src = row(idx[i]);
            std::copy(src.begin(), src.end(), out.row(i).begin());
        }
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Class labels are dense integer codes 0..n_classes-1.
using Labels = std::vector<int>;

inline std::size_t count_classes_in(std::span<const int> y, std::size_t n_classes, std::vector<std::size_t>& counts) {
    counts.assign(n_classes, 0);
    std::size_t present = 0;
    for (int v : y) {
        if (v < 0 || static_cast<std::size_t>(v) >= n_classes)
            throw std::invalid_argument("label " + std::to_string(v) + " outside [0, " + std::to_string(n_classes) + ")");
        if (counts[static_cast<std::size_t>(v)]++ == 0) ++present;
    }
    return present;
}

}  // namespace honeyml

#endif  // HONEYML_CORE_HPP
