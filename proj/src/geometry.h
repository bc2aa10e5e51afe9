#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "fields.h"

namespace sharplab {

// Polar finite-volume grid on a disk of radius R: one pole cell plus nr rings
// of nt cells each.  Ring i sits at radius i*dr (the outermost ring lies on the
// rim, where the natural flux condition applies), angle j*dt with no duplicate
// seam.  Cell areas sum to pi R^2 exactly.
struct DiskGrid {
    double R = 0.0;
    int nr = 0, nt = 0;

    double dr() const { return R / nr; }
    double dt() const { return 2.0 * std::acos(-1.0) / nt; }
    long size() const { return 1 + static_cast<long>(nr) * nt; }
    long index(int ring, int j) const {
        j = ((j % nt) + nt) % nt;
        return 1 + static_cast<long>(ring - 1) * nt + j;
    }
    double radius(long idx) const { return idx == 0 ? 0.0 : ((idx - 1) / nt + 1) * dr(); }
    double theta(long idx) const { return idx == 0 ? 0.0 : ((idx - 1) % nt) * dt(); }
    double x1(long idx) const { return radius(idx) * std::cos(theta(idx)); }
    double x2(long idx) const { return radius(idx) * std::sin(theta(idx)); }

    Eigen::ArrayXd weights;               // cell areas
    Eigen::SparseMatrix<double> stiffness; // u^T K u = discrete Dirichlet form
};

enum class Shape { rectangle, disk };

struct BoundaryNode {
    long index;
    double nu1, nu2;  // outward unit normal
    double curvature; // second fundamental form value A(t,t) for unit tangents t
    double weight;    // boundary quadrature weight
};

struct Domain {
    Shape shape = Shape::rectangle;
    Grid rect;     // valid when shape == rectangle
    DiskGrid disk; // valid when shape == disk
    std::vector<BoundaryNode> boundary;

    double min_spacing() const;
};

Domain build_domain_rectangle(double L1, double L2, int n1, int n2);
Domain build_domain_disk(double R, int nr, int nt);

enum class InterfaceKind { segment, diameter, circle };

// Discretized interface with uniform arclength nodes.  Normals point out of
// the phase {u0 = 1}; curvature is stored analytically per kind.  Open curves
// carry endpoint data (outward conormal within the curve, contact-angle
// defect against the domain normal).
struct InterfaceCurve {
    InterfaceKind kind = InterfaceKind::segment;
    bool closed = false;
    double ds = 0.0;
    double length = 0.0;
    Eigen::ArrayXd s;          // arclength parameter per node
    Eigen::ArrayXd x1, x2;     // node positions
    Eigen::ArrayXd n1, n2;     // unit normal
    Eigen::ArrayXd tau1, tau2; // unit tangent
    Eigen::ArrayXd kappa;
    Eigen::ArrayXd w;          // quadrature weights for arclength integrals

    struct Endpoint {
        double x1, x2;
        double conormal1, conormal2;
        double ortho_defect; // |<n, nu>| at the contact point
        double boundary_curvature;
    };
    std::vector<Endpoint> endpoints;

    // analytic shape parameters
    double seg_x = 0.0;               // segment: vertical line x1 = seg_x
    double c1 = 0.0, c2 = 0.0, r = 0.0; // circle
};

InterfaceCurve build_interface_segment(const Domain& dom, double x);
InterfaceCurve build_interface_circle(const Domain& dom, double c1, double c2, double r);
InterfaceCurve build_interface_diameter(const Domain& dom);

struct NormalSpeed {
    Eigen::ArrayXd xi;
    bool mean_zero = false;
};

NormalSpeed make_normal_speed(const InterfaceCurve& curve,
                              const std::function<double(double)>& f);
NormalSpeed make_normal_speed(const InterfaceCurve& curve, const Eigen::ArrayXd& values);

// Signed distance with d < 0 inside {u0 = 1}.
Array2 signed_distance(const InterfaceCurve& curve, const Grid& g);
Eigen::ArrayXd signed_distance_disk(const InterfaceCurve& curve, const DiskGrid& dg);

// Smooth vector field with eta = xi n on the interface, eta . nu = 0 on the
// domain boundary, and vanishing normal-normal derivative on the interface.
// xi is carried constantly along normal lines under a plateau cutoff whose
// width is cutoff_frac times the clearance between interface and boundary.
struct Extension {
    std::function<double(double, double)> e1, e2;
};

Extension normal_speed_extension(const InterfaceCurve& curve, const Domain& dom,
                                 const NormalSpeed& xi, double cutoff_frac = 0.25);

Vec2Field extend_normal_speed(const InterfaceCurve& curve, const Domain& dom,
                              const NormalSpeed& xi, double cutoff_frac = 0.25);

// Disk-domain variant sampled at polar nodes, with exact tangency enforced at
// rim nodes by projection.
void extend_normal_speed_disk(const InterfaceCurve& curve, const Domain& dom,
                              const NormalSpeed& xi, Eigen::ArrayXd& e1,
                              Eigen::ArrayXd& e2, double cutoff_frac = 0.25);

} // namespace sharplab
