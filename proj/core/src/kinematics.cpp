#include "jitstar/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace jitstar
{

KinematicChain::KinematicChain(std::vector<DhLink> links, Eigen::Isometry3d baseTransform, int taskDim,
                               std::vector<double> jointLower, std::vector<double> jointUpper)
  : links_(std::move(links))
  , baseTransform_(std::move(baseTransform))
  , taskDim_(taskDim)
  , jointLower_(std::move(jointLower))
  , jointUpper_(std::move(jointUpper))
{
    if (links_.empty())
    {
        throw ConfigurationError("KinematicChain: at least one link required");
    }
    if (taskDim_ != 2 && taskDim_ != 3 && taskDim_ != 6)
    {
        throw ConfigurationError("KinematicChain: taskDim must be 2, 3, or 6");
    }
    if (jointLower_.size() != jointUpper_.size() ||
        (!jointLower_.empty() && jointLower_.size() != links_.size()))
    {
        throw ConfigurationError("KinematicChain: joint limit arrays must match the link count");
    }
    for (std::size_t i = 0; i < jointLower_.size(); ++i)
    {
        if (jointLower_[i] > jointUpper_[i])
        {
            throw ConfigurationError("KinematicChain: lower joint limit exceeds upper");
        }
    }
}

bool KinematicChain::withinLimits(const State &q) const
{
    if (q.dim() != jointCount())
    {
        throw DimensionError("withinLimits: joint dimension mismatch");
    }
    for (std::size_t i = 0; i < jointLower_.size(); ++i)
    {
        if (q[i] < jointLower_[i] || q[i] > jointUpper_[i])
        {
            return false;
        }
    }
    return true;
}

std::vector<Eigen::Isometry3d> KinematicChain::jointFrames(const State &q) const
{
    if (q.dim() != jointCount())
    {
        throw DimensionError("jointFrames: joint dimension mismatch");
    }
    std::vector<Eigen::Isometry3d> frames;
    frames.reserve(jointCount() + 1);
    frames.push_back(baseTransform_);
    Eigen::Isometry3d current = baseTransform_;
    for (std::size_t i = 0; i < jointCount(); ++i)
    {
        const DhLink &link = links_[i];
        const double theta = link.thetaOffset + (link.type == JointType::Revolute ? q[i] : 0.0);
        const double d = link.d + (link.type == JointType::Prismatic ? q[i] : 0.0);
        const double ct = std::cos(theta);
        const double st = std::sin(theta);
        const double ca = std::cos(link.alpha);
        const double sa = std::sin(link.alpha);
        Eigen::Matrix4d t;
        t << ct, -st * ca, st * sa, link.a * ct,  //
            st, ct * ca, -ct * sa, link.a * st,   //
            0.0, sa, ca, d,                       //
            0.0, 0.0, 0.0, 1.0;
        current = current * Eigen::Isometry3d(t);
        frames.push_back(current);
    }
    return frames;
}

Eigen::Isometry3d KinematicChain::forwardKinematics(const State &q) const
{
    return jointFrames(q).back();
}

Eigen::Vector3d KinematicChain::eePosition(const State &q) const
{
    return forwardKinematics(q).translation();
}

Eigen::MatrixXd KinematicChain::geometricJacobian(const State &q) const
{
    const auto frames = jointFrames(q);
    const Eigen::Vector3d pe = frames.back().translation();
    Eigen::MatrixXd jac(6, static_cast<Eigen::Index>(jointCount()));
    for (std::size_t i = 0; i < jointCount(); ++i)
    {
        const Eigen::Vector3d z = frames[i].rotation().col(2);
        const Eigen::Vector3d p = frames[i].translation();
        const auto col = static_cast<Eigen::Index>(i);
        if (links_[i].type == JointType::Revolute)
        {
            jac.block<3, 1>(0, col) = z.cross(pe - p);
            jac.block<3, 1>(3, col) = z;
        }
        else
        {
            jac.block<3, 1>(0, col) = z;
            jac.block<3, 1>(3, col).setZero();
        }
    }
    return jac;
}

Eigen::MatrixXd KinematicChain::taskJacobian(const State &q) const
{
    const Eigen::MatrixXd jac = geometricJacobian(q);
    return jac.topRows(taskDim_ == 6 ? 6 : taskDim_);
}

namespace
{

/** \brief Fill in unit columns orthogonal to the ones already present (used
    when a singular value is zero and the data give no left direction). */
void completeColumn(Eigen::MatrixXd &u, Eigen::Index col)
{
    const Eigen::Index m = u.rows();
    for (Eigen::Index candidate = 0; candidate < m; ++candidate)
    {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(m, candidate);
        for (Eigen::Index j = 0; j < col; ++j)
        {
            v -= u.col(j).dot(v) * u.col(j);
        }
        const double norm = v.norm();
        if (norm > 1e-6)
        {
            u.col(col) = v / norm;
            return;
        }
    }
    u.col(col).setZero();
}

}  // namespace

SvdResult svdDecompose(const Eigen::MatrixXd &m)
{
    if (m.size() == 0)
    {
        throw RangeError("svdDecompose: empty matrix");
    }
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();

    // Hestenes one-sided Jacobi: orthogonalize the columns of A by right
    // rotations accumulated into V, then read off singular values as column
    // norms. Robust and dependency-free at the small sizes used here.
    Eigen::MatrixXd a = m;
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(cols, cols);
    constexpr double kOrthTol = 1e-13;
    constexpr int kMaxSweeps = 60;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep)
    {
        bool rotated = false;
        for (Eigen::Index p = 0; p + 1 < cols; ++p)
        {
            for (Eigen::Index q = p + 1; q < cols; ++q)
            {
                const double app = a.col(p).squaredNorm();
                const double aqq = a.col(q).squaredNorm();
                const double apq = a.col(p).dot(a.col(q));
                if (std::abs(apq) <= kOrthTol * std::sqrt(app * aqq) || apq == 0.0)
                {
                    continue;
                }
                rotated = true;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                const Eigen::VectorXd ap = a.col(p);
                a.col(p) = c * ap - s * a.col(q);
                a.col(q) = s * ap + c * a.col(q);
                const Eigen::VectorXd vp = v.col(p);
                v.col(p) = c * vp - s * v.col(q);
                v.col(q) = s * vp + c * v.col(q);
            }
        }
        if (!rotated)
        {
            break;
        }
    }

    // Sort all column norms descending, permuting V alongside.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(cols));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> norms(static_cast<std::size_t>(cols));
    for (Eigen::Index j = 0; j < cols; ++j)
    {
        norms[static_cast<std::size_t>(j)] = a.col(j).norm();
    }
    std::stable_sort(order.begin(), order.end(),
                     [&norms](Eigen::Index x, Eigen::Index y)
                     { return norms[static_cast<std::size_t>(x)] > norms[static_cast<std::size_t>(y)]; });

    const Eigen::Index k = std::min(rows, cols);
    SvdResult result;
    result.S = Eigen::VectorXd(k);
    result.U = Eigen::MatrixXd(rows, k);
    result.V = Eigen::MatrixXd(cols, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
    {
        result.V.col(j) = v.col(order[static_cast<std::size_t>(j)]);
    }
    // Columns whose norm sits at the rounding floor carry no usable left
    // direction; complete those orthogonally instead of normalizing noise.
    const double sigmaMax = norms[static_cast<std::size_t>(order[0])];
    const double zeroTol = sigmaMax * 1e-14 * static_cast<double>(std::max(rows, cols));
    for (Eigen::Index j = 0; j < k; ++j)
    {
        const Eigen::Index src = order[static_cast<std::size_t>(j)];
        const double sigma = norms[static_cast<std::size_t>(src)];
        result.S(j) = sigma;
        if (sigma > zeroTol && sigma > 0.0)
        {
            result.U.col(j) = a.col(src) / sigma;
        }
        else
        {
            completeColumn(result.U, j);
        }
    }
    return result;
}

double minSingularValue(const Eigen::MatrixXd &m)
{
    const SvdResult svd = svdDecompose(m);
    return svd.S(svd.S.size() - 1);
}

Eigen::MatrixXd nullSpaceBasis(const Eigen::MatrixXd &m)
{
    const SvdResult svd = svdDecompose(m);
    const Eigen::Index n = m.cols();
    const double tolRank = 1e-9 * svd.S(0);
    Eigen::Index rank = 0;
    for (Eigen::Index j = 0; j < svd.S.size(); ++j)
    {
        if (svd.S(j) > tolRank)
        {
            ++rank;
        }
    }
    const Eigen::Index d = n - rank;
    Eigen::MatrixXd basis(d, n);
    for (Eigen::Index j = 0; j < d; ++j)
    {
        basis.row(j) = svd.V.col(n - d + j).transpose();
    }
    return basis;
}

Eigen::MatrixXd pseudoInverse(const Eigen::MatrixXd &m)
{
    const SvdResult svd = svdDecompose(m);
    const double tolRank = 1e-9 * svd.S(0);
    Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(m.cols(), m.rows());
    for (Eigen::Index j = 0; j < svd.S.size(); ++j)
    {
        if (svd.S(j) > tolRank)
        {
            pinv += svd.V.col(j) * svd.U.col(j).transpose() / svd.S(j);
        }
    }
    return pinv;
}

}  // namespace jitstar
