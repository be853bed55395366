#pragma once

#include "somps/ingest/types.hpp"

#include <Eigen/Dense>

#include <span>

namespace somps {

/// Overlap of two users' social neighbourhoods:
///
///   |(followers(x) ∩ followers(y)) ∪ (following(x) ∩ following(y))|
///   ---------------------------------------------------------------
///   |followers(x) ∪ followers(y) ∪ following(x) ∪ following(y)|
///
/// Zero when both neighbourhoods are empty. Requires sorted, duplicate-free id
/// lists (the UserRecord invariant).
double connectivity_score(const UserRecord& x, const UserRecord& y);

/// k x k pairwise connectivity matrix over the given users (in order). The
/// diagonal and every row/column beyond users.size() are zero.
Eigen::MatrixXd build_connectivity_matrix(std::span<const UserRecord* const> users, std::size_t k);

} // namespace somps
