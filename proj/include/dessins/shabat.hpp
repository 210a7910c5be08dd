#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dessins/dessin.hpp"

namespace dessins {

using cplx = std::complex<double>;

class ShabatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class DegenerateVerticesError : public ShabatError {
    using ShabatError::ShabatError;
};
class NotAMidpointRootError : public ShabatError {
    using ShabatError::ShabatError;
};
class CriticalChosenPointError : public ShabatError {
    using ShabatError::ShabatError;
};
class LiftDivergenceError : public ShabatError {
    using ShabatError::ShabatError;
};
class AmbiguousVertexAssignmentError : public ShabatError {
    using ShabatError::ShabatError;
};
class NoConvergenceError : public ShabatError {
    using ShabatError::ShabatError;
};
class UnsupportedDegreeError : public ShabatError {
    using ShabatError::ShabatError;
};
class NotShabatError : public ShabatError {
    using ShabatError::ShabatError;
};

// Dense polynomial over complex doubles, constant term first.  Trailing
// coefficients are trimmed at relative tolerance 1e-14, so degree() is the
// index of the last significant coefficient (-1 for the zero polynomial).
class ComplexPoly {
public:
    ComplexPoly() = default;
    explicit ComplexPoly(std::vector<cplx> coeffs);
    static ComplexPoly from_real(const std::vector<double>& coeffs);
    static ComplexPoly variable();  // z

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    cplx coeff(int i) const;  // 0 beyond the stored range

    cplx eval(cplx z) const;
    ComplexPoly derivative() const;
    ComplexPoly antiderivative() const;  // constant term 0

    ComplexPoly operator+(const ComplexPoly& o) const;
    ComplexPoly operator-(const ComplexPoly& o) const;
    ComplexPoly operator*(const ComplexPoly& o) const;
    ComplexPoly operator*(cplx k) const;
    ComplexPoly operator+(cplx k) const;

    // f(a*z + b)
    ComplexPoly compose_affine(cplx a, cplx b) const;

    double scale() const;  // max(1, max |coeff|)

    std::string json() const;  // [[re,im],...], constant first
    static ComplexPoly from_json(const std::string& text);

private:
    std::vector<cplx> coeffs_;
};

// All roots, counted with multiplicity (simultaneous Aberth–Ehrlich
// iteration followed by a Newton polish).  Unordered.
std::vector<cplx> poly_roots(const ComplexPoly& p);

struct RootCluster {
    cplx center;
    int multiplicity;
};

// Roots grouped into multiple-root clusters.  Clusters are refined by Newton
// on the derivative of order (multiplicity - 1), where the multiple root is
// simple, and re-merged at `merge_tol` (relative) until stable.  Ordered by
// (re, im) of the center.
std::vector<RootCluster> clustered_roots(const ComplexPoly& p,
                                         double merge_tol = 1e-7);

struct ShabatCertificate {
    bool accepted = false;
    std::vector<RootCluster> critical_points;  // mult = multiplicity in f'
    std::vector<cplx> critical_values;
    double max_value_residual = 0.0;   // max over u of min |f(u) -+ 1|
    double base_point_residual = 0.0;  // |f(0)|
    double base_deriv_residual = 0.0;  // |f'(0) - 1|
    double worst_residual = 0.0;
    cplx worst_point{0.0, 0.0};

    std::string summary() const;
};

// Accepts iff every critical value is within tol of -1 or +1, |f(0)| <= tol
// and |f'(0) - 1| <= tol.
ShabatCertificate is_biased_shabat(const ComplexPoly& f, double tol = 1e-9);

// The unique changes of coordinates psi(z) = a z + b with psi(vb) = -1,
// psi(vw) = +1, and eta(z) = c z + u with c = 1/(a f'(u)); returns
// psi ∘ f ∘ eta.  Requires f(u) = (vb + vw)/2 and f'(u) != 0.
ComplexPoly bias_normalize(const ComplexPoly& f, cplx vb, cplx vw, cplx u,
                           double tol = 1e-9);

// f^{-1}([-1,1]) as a biased plane tree: edge midpoints are the roots of f,
// endpoint vertices are found by lifting t: 0 -> -+1 through f, alpha/beta
// come from the counterclockwise cyclic order of edge-arrival angles around
// each vertex, and the chosen edge is the midpoint nearest 0.  Returns the
// canonical form.
BiasedDessin extract_tree(const ComplexPoly& f);

inline constexpr int kMaxShabatDegree = 8;
inline constexpr int kMaxSolveDegree = 7;

// Inverse direction at small degree: parametrize f' by the critical vertices
// of the tree, Newton on the critical-value residuals, and accept only when
// extract_tree returns the input tree.  Deterministic for a fixed seed.
ComplexPoly solve_shabat(const BiasedDessin& tree,
                         std::uint64_t seed = 20150621,
                         int max_restarts = 20);

enum class PolyFamily { star, chebyshev };

// Biased normalization of z^n with vertex pair (0,1), u = 2^(-1/n); or of the
// degree-n Chebyshev polynomial with vertex pair (-1,1), u = cos(pi/(2n)).
ComplexPoly family_poly(PolyFamily kind, int n);

}  // namespace dessins
