#include "somps/featurize/connectivity.hpp"

#include "somps/error.hpp"

#include <algorithm>
#include <iterator>

namespace somps {

namespace {

using Ids = std::vector<std::string>;

Ids intersect(const Ids& a, const Ids& b) {
    Ids out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Ids unite(const Ids& a, const Ids& b) {
    Ids out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace

double connectivity_score(const UserRecord& x, const UserRecord& y) {
    const auto denominator =
        unite(unite(x.follower_ids, y.follower_ids), unite(x.following_ids, y.following_ids)).size();
    if (denominator == 0) return 0.0;
    const auto numerator =
        unite(intersect(x.follower_ids, y.follower_ids), intersect(x.following_ids, y.following_ids)).size();
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

Eigen::MatrixXd build_connectivity_matrix(std::span<const UserRecord* const> users, std::size_t k) {
    if (users.size() > k) throw ArgumentError("build_connectivity_matrix: more users than k");
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(kk, kk);
    for (std::size_t i = 0; i < users.size(); ++i) {
        for (std::size_t j = i + 1; j < users.size(); ++j) {
            const double s = connectivity_score(*users[i], *users[j]);
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
            a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = s;
        }
    }
    return a;
}

} // namespace somps
