#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "jitstar/state.hpp"

namespace jitstar
{

enum class JointType
{
    Revolute,
    Prismatic
};

/** \brief One link in standard (distal) Denavit-Hartenberg convention. */
struct DhLink
{
    double a{0.0};
    double alpha{0.0};
    double d{0.0};
    double thetaOffset{0.0};
    JointType type{JointType::Revolute};
};

/** \brief A serial kinematic chain described by standard DH parameters.

    taskDim selects which rows of the full 6 x n geometric Jacobian define the
    task Jacobian: 2 keeps the planar translational rows, 3 the spatial
    translational rows, 6 the full twist. Joint limits are optional; an empty
    limit vector means unbounded. */
class KinematicChain
{
public:
    KinematicChain(std::vector<DhLink> links, Eigen::Isometry3d baseTransform = Eigen::Isometry3d::Identity(),
                   int taskDim = 3, std::vector<double> jointLower = {}, std::vector<double> jointUpper = {});

    std::size_t jointCount() const
    {
        return links_.size();
    }

    int taskDim() const
    {
        return taskDim_;
    }

    const std::vector<DhLink> &links() const
    {
        return links_;
    }

    const Eigen::Isometry3d &baseTransform() const
    {
        return baseTransform_;
    }

    const std::vector<double> &jointLower() const
    {
        return jointLower_;
    }

    const std::vector<double> &jointUpper() const
    {
        return jointUpper_;
    }

    bool withinLimits(const State &q) const;

    /** \brief All joint frames: index 0 is the base, index i the frame after
        link i, so back() is the end-effector pose. */
    std::vector<Eigen::Isometry3d> jointFrames(const State &q) const;

    Eigen::Isometry3d forwardKinematics(const State &q) const;

    Eigen::Vector3d eePosition(const State &q) const;

    /** \brief Full 6 x n geometric Jacobian: revolute column
        [z_{i-1} x (p_e - p_{i-1}); z_{i-1}], prismatic column [z_{i-1}; 0]. */
    Eigen::MatrixXd geometricJacobian(const State &q) const;

    /** \brief The taskDim rows of the geometric Jacobian used for
        manipulability. */
    Eigen::MatrixXd taskJacobian(const State &q) const;

private:
    std::vector<DhLink> links_;
    Eigen::Isometry3d baseTransform_;
    int taskDim_;
    std::vector<double> jointLower_;
    std::vector<double> jointUpper_;
};

/** \brief Thin singular value decomposition M = U diag(S) V^T with S sorted
    descending, U with orthonormal columns (m x min(m,n)) and V square
    orthogonal (n x n). */
struct SvdResult
{
    Eigen::MatrixXd U;
    Eigen::VectorXd S;
    Eigen::MatrixXd V;
};

/** \brief One-sided Jacobi SVD. Small dense matrices only; reconstruction
    and orthogonality hold to 1e-10 on the sizes used here. */
SvdResult svdDecompose(const Eigen::MatrixXd &m);

double minSingularValue(const Eigen::MatrixXd &m);

/** \brief Rows span the null space of m: the right-singular vectors whose
    singular value is at most 1e-9 times the largest. Returns a d x n matrix;
    d is zero for full-rank square or tall matrices. */
Eigen::MatrixXd nullSpaceBasis(const Eigen::MatrixXd &m);

/** \brief Moore-Penrose pseudo-inverse through svdDecompose with the same
    relative rank tolerance as nullSpaceBasis. */
Eigen::MatrixXd pseudoInverse(const Eigen::MatrixXd &m);

/** \brief Serialize a chain (convention "standard-dh") with 17 significant
    digits; round-trips exactly. */
std::string chainToJson(const KinematicChain &chain);

KinematicChain chainFromJson(const std::string &text);

void chainToFile(const KinematicChain &chain, const std::string &path);

KinematicChain chainFromFile(const std::string &path);

}  // namespace jitstar
