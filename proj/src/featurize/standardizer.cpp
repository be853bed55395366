#include "somps/featurize/standardizer.hpp"

#include "somps/error.hpp"

#include <cmath>

namespace somps {

void Standardizer::fit(const std::vector<Eigen::RowVectorXd>& samples) {
    mean_ = Eigen::VectorXd::Zero(count_);
    scale_ = Eigen::VectorXd::Ones(count_);
    if (!samples.empty()) {
        for (const auto& row : samples) {
            if (row.size() < first_ + count_) throw ArgumentError("standardizer: sample row too short");
            mean_ += row.segment(first_, count_).transpose();
        }
        mean_ /= static_cast<double>(samples.size());
        Eigen::VectorXd var = Eigen::VectorXd::Zero(count_);
        for (const auto& row : samples) {
            var += (row.segment(first_, count_).transpose() - mean_).array().square().matrix();
        }
        var /= static_cast<double>(samples.size());
        for (Eigen::Index i = 0; i < count_; ++i) {
            const double sd = std::sqrt(var[i]);
            scale_[i] = sd > 1e-12 ? sd : 1.0;
        }
    }
    fitted_ = true;
}

void Standardizer::apply_rows(Eigen::MatrixXd& m, std::size_t valid_rows) const {
    if (!fitted_) throw StateError("standardizer used before fit");
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(valid_rows) && r < m.rows(); ++r) {
        auto block = m.row(r).segment(first_, count_);
        block = ((block.transpose() - mean_).array() / scale_.array()).matrix().transpose();
    }
}

void Standardizer::apply(Eigen::VectorXd& v) const {
    if (!fitted_) throw StateError("standardizer used before fit");
    auto block = v.segment(first_, count_);
    block = ((block - mean_).array() / scale_.array()).matrix();
}

void Standardizer::restore(Eigen::Index first, Eigen::Index count, Eigen::VectorXd mean, Eigen::VectorXd scale) {
    if (mean.size() != count || scale.size() != count) throw ArgumentError("standardizer: inconsistent restore");
    first_ = first;
    count_ = count;
    mean_ = std::move(mean);
    scale_ = std::move(scale);
    fitted_ = true;
}

} // namespace somps
