#pragma once

#include <Eigen/Dense>

#include <vector>

namespace somps {

/// Column-wise z-scoring of a contiguous block of numeric columns. Columns
/// outside the block (flags, one-hots) pass through untouched.
class Standardizer {
public:
    Standardizer() = default;
    Standardizer(Eigen::Index first_column, Eigen::Index column_count)
        : first_(first_column), count_(column_count) {}

    /// Population mean and standard deviation over the sample rows. A column with
    /// zero variance is only centred.
    void fit(const std::vector<Eigen::RowVectorXd>& samples);

    bool fitted() const { return fitted_; }

    /// Standardizes the first `valid_rows` rows; padding rows stay zero.
    void apply_rows(Eigen::MatrixXd& m, std::size_t valid_rows) const;
    void apply(Eigen::VectorXd& v) const;

    Eigen::Index first_column() const { return first_; }
    Eigen::Index column_count() const { return count_; }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::VectorXd& scale() const { return scale_; }

    void restore(Eigen::Index first, Eigen::Index count, Eigen::VectorXd mean, Eigen::VectorXd scale);

    friend bool operator==(const Standardizer& a, const Standardizer& b) {
        return a.first_ == b.first_ && a.count_ == b.count_ && a.fitted_ == b.fitted_ &&
               a.mean_.size() == b.mean_.size() && a.mean_ == b.mean_ && a.scale_.size() == b.scale_.size() &&
               a.scale_ == b.scale_;
    }

private:
    Eigen::Index first_ = 0;
    Eigen::Index count_ = 0;
    Eigen::VectorXd mean_;
    Eigen::VectorXd scale_;
    bool fitted_ = false;
};

} // namespace somps
