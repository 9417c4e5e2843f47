#pragma once

#include <cstddef>
#include <vector>

namespace frontlab {

enum class BoundaryTag { Dirichlet, Neumann };

// Cross-section of the cylinder: a single point (dim 0, scalar problem on the
// line) or an interval with Dirichlet/Neumann endpoint tags (dim 1, strip).
class CrossSectionMesh {
public:
    static CrossSectionMesh point();
    static CrossSectionMesh interval(double y_a, double y_b, std::size_t n_nodes,
                                     BoundaryTag bc_left, BoundaryTag bc_right);

    int dim() const { return dim_; }
    std::size_t n() const { return y_.size(); }
    double hy() const { return hy_; }
    double y(std::size_t i) const { return y_[i]; }
    const std::vector<double>& nodes() const { return y_; }
    BoundaryTag bc_left() const { return bc_left_; }
    BoundaryTag bc_right() const { return bc_right_; }

    // Node is pinned to zero by a Dirichlet tag.
    bool dirichlet_node(std::size_t i) const;
    // Trapezoid quadrature weights; the point mesh carries unit measure.
    const std::vector<double>& quad_weights() const { return qw_; }
    double measure() const { return measure_; }

    bool operator==(const CrossSectionMesh& o) const;

private:
    int dim_ = 0;
    double y_a_ = 0.0, y_b_ = 0.0, hy_ = 0.0;
    BoundaryTag bc_left_ = BoundaryTag::Neumann;
    BoundaryTag bc_right_ = BoundaryTag::Neumann;
    std::vector<double> y_;
    std::vector<double> qw_;
    double measure_ = 1.0;
};

struct EigenPair {
    double nu = 0.0;
    std::vector<double> psi;  // positive interior, sup-normalized to 1
    int iterations = 0;
};

// Principal eigenvalue/eigenfunction of -Lap_y - p(y) with the mesh boundary
// tags. Inverse power iteration with a shift below -||p||_inf; Rayleigh
// tolerance 1e-12, max 10^4 iterations. The point mesh returns nu = -p,
// psi = 1 exactly.
EigenPair principal_eigenpair(const CrossSectionMesh& mesh, const std::vector<double>& potential);

// Discrete Rayleigh quotient of psi for -Lap_y - p on the mesh.
double rayleigh_quotient(const CrossSectionMesh& mesh, const std::vector<double>& potential,
                         const std::vector<double>& psi);

// Residual sup-norm of Lap_y psi + p psi + nu psi at non-Dirichlet nodes.
double eigen_residual(const CrossSectionMesh& mesh, const std::vector<double>& potential,
                      const EigenPair& ep);

// y-Laplacian of v at node i honoring the boundary tags (mirror ghosts for
// Neumann, zero values at Dirichlet nodes).
double lap_y(const CrossSectionMesh& mesh, const std::vector<double>& v, std::size_t i);

} // namespace frontlab
