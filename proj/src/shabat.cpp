#include "dessins/shabat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace dessins {

namespace {

constexpr double kTrimTol = 1e-14;

double safe_abs(cplx z) { return std::abs(z); }

std::string cplx_str(cplx z) {
    std::ostringstream out;
    out.precision(17);
    out << z.real() << "," << z.imag();
    return out.str();
}

}  // namespace

ComplexPoly::ComplexPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    double top = 0.0;
    for (cplx c : coeffs_) top = std::max(top, safe_abs(c));
    if (top == 0.0) {
        coeffs_.clear();
        return;
    }
    while (!coeffs_.empty() && safe_abs(coeffs_.back()) <= kTrimTol * top) {
        coeffs_.pop_back();
    }
}

ComplexPoly ComplexPoly::from_real(const std::vector<double>& coeffs) {
    std::vector<cplx> c(coeffs.begin(), coeffs.end());
    return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::variable() { return from_real({0.0, 1.0}); }

cplx ComplexPoly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return {0.0, 0.0};
    return coeffs_[i];
}

cplx ComplexPoly::eval(cplx z) const {
    cplx acc{0.0, 0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

ComplexPoly ComplexPoly::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<cplx> out(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = coeffs_[i] * cplx(double(i), 0.0);
    return ComplexPoly(std::move(out));
}

ComplexPoly ComplexPoly::antiderivative() const {
    std::vector<cplx> out(coeffs_.size() + 1, cplx{0.0, 0.0});
    for (size_t i = 0; i < coeffs_.size(); ++i) out[i + 1] = coeffs_[i] / cplx(double(i + 1), 0.0);
    return ComplexPoly(std::move(out));
}

ComplexPoly ComplexPoly::operator+(const ComplexPoly& o) const {
    std::vector<cplx> out(std::max(coeffs_.size(), o.coeffs_.size()), cplx{0.0, 0.0});
    for (size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (size_t i = 0; i < o.coeffs_.size(); ++i) out[i] += o.coeffs_[i];
    return ComplexPoly(std::move(out));
}

ComplexPoly ComplexPoly::operator-(const ComplexPoly& o) const {
    return *this + o * cplx(-1.0, 0.0);
}

ComplexPoly ComplexPoly::operator*(const ComplexPoly& o) const {
    if (coeffs_.empty() || o.coeffs_.empty()) return {};
    std::vector<cplx> out(coeffs_.size() + o.coeffs_.size() - 1, cplx{0.0, 0.0});
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        for (size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
    }
    return ComplexPoly(std::move(out));
}

ComplexPoly ComplexPoly::operator*(cplx k) const {
    std::vector<cplx> out = coeffs_;
    for (cplx& c : out) c *= k;
    return ComplexPoly(std::move(out));
}

ComplexPoly ComplexPoly::operator+(cplx k) const {
    std::vector<cplx> out = coeffs_;
    if (out.empty()) out.push_back(k);
    else out[0] += k;
    return ComplexPoly(std::move(out));
}

ComplexPoly ComplexPoly::compose_affine(cplx a, cplx b) const {
    // Horner with the affine argument: acc -> acc*(a z + b) + c_i.
    ComplexPoly acc;
    ComplexPoly linear(std::vector<cplx>{b, a});
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * linear + *it;
    }
    return acc;
}

double ComplexPoly::scale() const {
    double top = 1.0;
    for (cplx c : coeffs_) top = std::max(top, safe_abs(c));
    return top;
}

std::string ComplexPoly::json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (cplx c : coeffs_) arr.push_back({c.real(), c.imag()});
    return arr.dump();
}

ComplexPoly ComplexPoly::from_json(const std::string& text) {
    const nlohmann::json arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw std::invalid_argument("polynomial JSON must be an array");
    std::vector<cplx> out;
    for (const auto& item : arr) {
        if (item.is_number()) {
            out.emplace_back(item.get<double>(), 0.0);
        } else if (item.is_array() && item.size() == 2) {
            out.emplace_back(item.at(0).get<double>(), item.at(1).get<double>());
        } else {
            throw std::invalid_argument("polynomial coefficients must be numbers or [re,im] pairs");
        }
    }
    return ComplexPoly(std::move(out));
}

// ---------------------------------------------------------------------------
// Root finding: simultaneous Aberth–Ehrlich iteration with a Newton polish.

namespace {

void horner_both(const std::vector<cplx>& c, cplx z, cplx& p, cplx& dp) {
    p = c.back();
    dp = {0.0, 0.0};
    for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
        dp = dp * z + p;
        p = p * z + c[static_cast<size_t>(i)];
    }
}

double backward_error(const std::vector<cplx>& c, cplx z, cplx p) {
    double denom = 0.0, zp = 1.0;
    const double az = safe_abs(z);
    for (cplx ci : c) {
        denom += safe_abs(ci) * zp;
        zp *= az;
    }
    return denom > 0.0 ? safe_abs(p) / denom : safe_abs(p);
}

}  // namespace

std::vector<cplx> poly_roots(const ComplexPoly& poly) {
    const int n = poly.degree();
    if (n <= 0) return {};

    std::vector<cplx> c = poly.coeffs();
    const cplx lead = c.back();
    for (cplx& x : c) x /= lead;

    double bound = 0.0;
    for (int i = 0; i < n; ++i) bound = std::max(bound, safe_abs(c[static_cast<size_t>(i)]));
    bound += 1.0;  // Cauchy: all roots inside |z| <= 1 + max |c_i|

    for (int attempt = 0; attempt < 5; ++attempt) {
        std::vector<cplx> z(n);
        const double radius = bound * (0.45 + 0.3 * attempt);
        const double offset = 0.41 + 0.77 * attempt;
        for (int k = 0; k < n; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / n + offset;
            z[static_cast<size_t>(k)] = std::polar(radius * (1.0 + 0.05 * k), theta);
        }

        for (int iter = 0; iter < 400; ++iter) {
            double max_step = 0.0;
            for (int k = 0; k < n; ++k) {
                cplx p, dp;
                horner_both(c, z[k], p, dp);
                if (safe_abs(dp) < 1e-300) {
                    z[k] += cplx(1e-8 * (1.0 + safe_abs(z[k])), 1e-8);
                    max_step = 1.0;
                    continue;
                }
                const cplx newton = p / dp;
                cplx sum{0.0, 0.0};
                for (int j = 0; j < n; ++j) {
                    if (j == k) continue;
                    cplx diff = z[k] - z[j];
                    if (safe_abs(diff) < 1e-300) diff = cplx(1e-300, 0.0);
                    sum += cplx(1.0, 0.0) / diff;
                }
                cplx denom = cplx(1.0, 0.0) - newton * sum;
                if (safe_abs(denom) < 1e-300) denom = cplx(1e-300, 0.0);
                const cplx step = newton / denom;
                z[k] -= step;
                max_step = std::max(max_step, safe_abs(step) / (1.0 + safe_abs(z[k])));
            }
            if (max_step < 1e-14) break;
        }

        // Newton polish (improves simple roots; harmless on clusters).
        for (int k = 0; k < n; ++k) {
            cplx best = z[k];
            cplx p, dp;
            horner_both(c, best, p, dp);
            double best_res = safe_abs(p);
            cplx cur = best;
            for (int it = 0; it < 6; ++it) {
                if (safe_abs(dp) < 1e-300) break;
                cur -= p / dp;
                horner_both(c, cur, p, dp);
                if (safe_abs(p) < best_res) {
                    best = cur;
                    best_res = safe_abs(p);
                }
            }
            z[k] = best;
        }

        bool ok = true;
        for (int k = 0; k < n; ++k) {
            cplx p, dp;
            horner_both(c, z[k], p, dp);
            if (backward_error(c, z[k], p) > 1e-10) {
                ok = false;
                break;
            }
        }
        if (ok) return z;
    }
    throw ShabatError("polynomial root finding did not converge");
}

// ---------------------------------------------------------------------------
// Multiple-root clustering.

namespace {

// Single-linkage grouping of the listed root indices at the given tolerance.
std::vector<std::vector<int>> link_members(const std::vector<cplx>& roots,
                                           const std::vector<int>& members, double tol) {
    const int m = static_cast<int>(members.size());
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if (safe_abs(roots[members[i]] - roots[members[j]]) <= tol) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<std::vector<int>> groups;
    std::vector<int> idx(m, -1);
    for (int i = 0; i < m; ++i) {
        const int r = find(i);
        if (idx[r] < 0) {
            idx[r] = static_cast<int>(groups.size());
            groups.push_back({});
        }
        groups[idx[r]].push_back(members[i]);
    }
    return groups;
}

cplx newton_simple_root(const ComplexPoly& q, const ComplexPoly& dq, cplx z, double scale_x) {
    for (int it = 0; it < 100; ++it) {
        const cplx d = dq.eval(z);
        if (safe_abs(d) < 1e-300) break;
        const cplx step = q.eval(z) / d;
        z -= step;
        if (safe_abs(step) <= 1e-16 * std::max(scale_x, safe_abs(z))) break;
    }
    return z;
}

}  // namespace

std::vector<RootCluster> clustered_roots(const ComplexPoly& p, double merge_tol) {
    std::vector<cplx> roots = poly_roots(p);
    if (roots.empty()) return {};
    const int n = static_cast<int>(roots.size());

    double scale_x = 1.0;
    for (cplx r : roots) scale_x = std::max(scale_x, safe_abs(r));
    const double fine_tol = merge_tol * scale_x;

    // Derivative ladder: derivs[k] = p^(k).  An s-fold root of p is a simple
    // root of p^(s-1), which Newton recovers to full precision; the raw roots
    // of an s-fold root only carry ~eps^(1/s) digits, so grouping must start
    // coarse and the merge tolerance applies to refined centers.
    std::vector<ComplexPoly> derivs{p};
    while (derivs.back().degree() > 0) derivs.push_back(derivs.back().derivative());

    struct Cluster {
        cplx center;
        std::vector<int> members;
    };

    const double coarse = std::max(0.02 * scale_x, fine_tol);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);

    struct Work {
        std::vector<int> members;
        double tol;
    };
    std::vector<Work> queue;
    for (auto& g : link_members(roots, all, coarse)) queue.push_back({std::move(g), coarse});

    std::vector<Cluster> clusters;
    while (!queue.empty()) {
        Work w = std::move(queue.back());
        queue.pop_back();
        const int s = static_cast<int>(w.members.size());
        cplx centroid{0.0, 0.0};
        for (int m : w.members) centroid += roots[m];
        centroid /= cplx(double(s), 0.0);

        const cplx refined = newton_simple_root(derivs[static_cast<size_t>(s - 1)],
                                                derivs[static_cast<size_t>(s)], centroid, scale_x);
        const bool plausible = backward_error(p.coeffs(), refined, p.eval(refined)) <= 1e-8 &&
                               safe_abs(refined - centroid) <= 3.0 * w.tol + fine_tol;
        if (plausible || s == 1) {
            clusters.push_back({plausible ? refined : roots[w.members[0]], std::move(w.members)});
            continue;
        }
        // The group was not a single multiple root: split it and retry.
        auto subgroups = link_members(roots, w.members, w.tol / 4.0);
        if (subgroups.size() == 1) {
            clusters.push_back({centroid, std::move(w.members)});  // cannot split further
        } else {
            for (auto& g : subgroups) queue.push_back({std::move(g), w.tol / 4.0});
        }
    }

    // Merge refined centers that coincide, recomputing the refinement at the
    // combined multiplicity each time.
    for (bool merged = true; merged;) {
        merged = false;
        for (size_t i = 0; i < clusters.size() && !merged; ++i) {
            for (size_t j = i + 1; j < clusters.size() && !merged; ++j) {
                if (safe_abs(clusters[i].center - clusters[j].center) > fine_tol) continue;
                clusters[i].members.insert(clusters[i].members.end(),
                                           clusters[j].members.begin(),
                                           clusters[j].members.end());
                clusters.erase(clusters.begin() + static_cast<long>(j));
                const int s = static_cast<int>(clusters[i].members.size());
                clusters[i].center = newton_simple_root(derivs[static_cast<size_t>(s - 1)],
                                                        derivs[static_cast<size_t>(s)],
                                                        clusters[i].center, scale_x);
                merged = true;
            }
        }
    }

    std::vector<RootCluster> out;
    out.reserve(clusters.size());
    for (const auto& cl : clusters) {
        out.push_back({cl.center, static_cast<int>(cl.members.size())});
    }
    std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
        return a.center.imag() < b.center.imag();
    });
    return out;
}

// ---------------------------------------------------------------------------
// Shabat verification and normalization.

std::string ShabatCertificate::summary() const {
    std::ostringstream out;
    out.precision(3);
    out << (accepted ? "accept" : "reject") << " critical_points=" << critical_points.size()
        << " max_residual=" << std::scientific << worst_residual
        << " at=" << cplx_str(worst_point);
    return out.str();
}

ShabatCertificate is_biased_shabat(const ComplexPoly& f, double tol) {
    if (f.degree() < 1) throw std::invalid_argument("polynomial must have degree >= 1");
    if (f.degree() > kMaxShabatDegree) {
        throw UnsupportedDegreeError("degree " + std::to_string(f.degree()) +
                                     " beyond the supported envelope of " +
                                     std::to_string(kMaxShabatDegree));
    }
    ShabatCertificate cert;
    const ComplexPoly fp = f.derivative();
    cert.base_point_residual = safe_abs(f.eval({0.0, 0.0}));
    cert.base_deriv_residual = safe_abs(fp.eval({0.0, 0.0}) - cplx(1.0, 0.0));
    cert.worst_residual = std::max(cert.base_point_residual, cert.base_deriv_residual);
    cert.worst_point = {0.0, 0.0};

    if (fp.degree() >= 1) {
        cert.critical_points = clustered_roots(fp);
        for (const RootCluster& u : cert.critical_points) {
            const cplx v = f.eval(u.center);
            cert.critical_values.push_back(v);
            const double res = std::min(safe_abs(v + cplx(1.0, 0.0)),
                                        safe_abs(v - cplx(1.0, 0.0)));
            cert.max_value_residual = std::max(cert.max_value_residual, res);
            if (res > cert.worst_residual) {
                cert.worst_residual = res;
                cert.worst_point = u.center;
            }
        }
    }
    cert.accepted = cert.worst_residual <= tol;
    return cert;
}

ComplexPoly bias_normalize(const ComplexPoly& f, cplx vb, cplx vw, cplx u, double tol) {
    if (f.degree() < 1) throw std::invalid_argument("polynomial must have degree >= 1");
    const double vscale = std::max({1.0, safe_abs(vb), safe_abs(vw)});
    if (safe_abs(vw - vb) <= 1e-12 * vscale) {
        throw DegenerateVerticesError("vertex pair is degenerate: vb = vw = " + cplx_str(vb));
    }
    const cplx v0 = (vb + vw) / cplx(2.0, 0.0);
    if (safe_abs(f.eval(u) - v0) > tol * std::max(f.scale(), vscale)) {
        throw NotAMidpointRootError("f(u) != (vb+vw)/2 at u = " + cplx_str(u));
    }
    const cplx a = cplx(2.0, 0.0) / (vw - vb);
    const cplx b = cplx(-1.0, 0.0) - a * vb;
    const cplx fpu = f.derivative().eval(u);
    if (safe_abs(fpu) <= tol * f.scale()) {
        throw CriticalChosenPointError("f'(u) = 0 at the chosen point u = " + cplx_str(u));
    }
    const cplx c = cplx(1.0, 0.0) / (a * fpu);
    return f.compose_affine(c, u) * a + b;
}

// ---------------------------------------------------------------------------
// Tree extraction by path lifting.

namespace {

struct LiftOutcome {
    int vertex;
    double angle;  // measured from the last continuation point before the creep
};

// Follows f(z(t)) = t from (z0, 0) to t = sign * (1 - 1e-8), then assigns the
// nearest vertex.  The arrival angle is taken at |t| = 1 - 1e-3; past that f'
// shrinks near a critical vertex, so the path creeps in by shrinking the
// remaining gap geometrically.
LiftOutcome lift_edge(const ComplexPoly& f, const ComplexPoly& fp, cplx z0,
                      double sign, const std::vector<RootCluster>& vertices,
                      double scale) {
    constexpr double kOuter = 1.0 - 1e-3;
    constexpr double kFinal = 1.0 - 1e-8;

    double s = 0.0;
    double h = 0.05;
    double creep = 0.1;
    cplx z = z0;
    cplx z_outer = z0;
    bool outer_recorded = false;

    int guard = 0;
    while (s < kFinal) {
        if (++guard > 20000) {
            throw LiftDivergenceError("lift stalled from midpoint " + cplx_str(z0) +
                                      " at t = " + std::to_string(sign * s));
        }
        double s_next;
        if (s < kOuter) {
            s_next = std::min(s + h, kOuter);
        } else {
            s_next = 1.0 - std::max((1.0 - s) * creep, 1e-8);
        }
        const cplx t_target(sign * s_next, 0.0);

        const cplx der = fp.eval(z);
        bool ok = false;
        cplx zc = z;
        if (safe_abs(der) > 1e-300) {
            zc = z + (t_target - cplx(sign * s, 0.0)) / der;  // predictor
            for (int it = 0; it < 15; ++it) {                 // corrector
                const cplx val = f.eval(zc) - t_target;
                if (safe_abs(val) <= 1e-12 * scale) {
                    ok = true;
                    break;
                }
                const cplx d = fp.eval(zc);
                if (safe_abs(d) < 1e-300 || safe_abs(zc) > 1e9) break;
                zc -= val / d;
            }
        }
        if (!ok) {
            if (s < kOuter) {
                h /= 2.0;
                if (h < 1e-10) {
                    throw LiftDivergenceError("lift diverged from midpoint " + cplx_str(z0) +
                                              " at t = " + std::to_string(sign * s));
                }
            } else {
                creep = std::sqrt(creep);  // step closer to 1: smaller creep steps
                if (creep > 1.0 - 1e-12) {
                    throw LiftDivergenceError("creep stalled from midpoint " + cplx_str(z0) +
                                              " at t = " + std::to_string(sign * s));
                }
            }
            continue;
        }
        z = zc;
        s = s_next;
        if (!outer_recorded && s >= kOuter - 1e-15) {
            z_outer = z;
            outer_recorded = true;
        }
        if (s < kOuter) h = std::min(h * 1.5, 0.1);
    }

    int best = 0;
    double d1 = safe_abs(z - vertices[0].center);
    for (size_t k = 1; k < vertices.size(); ++k) {
        const double d = safe_abs(z - vertices[k].center);
        if (d < d1) {
            d1 = d;
            best = static_cast<int>(k);
        }
    }
    if (vertices.size() >= 2) {
        double d2 = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < vertices.size(); ++k) {
            if (static_cast<int>(k) == best) continue;
            d2 = std::min(d2, safe_abs(z - vertices[k].center));
        }
        if (d2 < 2.0 * d1) {
            throw AmbiguousVertexAssignmentError(
                "two vertices within matching tolerance of the lift endpoint from midpoint " +
                cplx_str(z0));
        }
    }
    return {best, std::arg(z_outer - vertices[static_cast<size_t>(best)].center)};
}

// Sorted-by-angle counterclockwise successor at each vertex.
void rotation_from_arrivals(const std::vector<std::vector<std::pair<double, int>>>& incident,
                            std::vector<int>& images) {
    for (const auto& list : incident) {
        auto sorted = list;
        std::sort(sorted.begin(), sorted.end());
        const int k = static_cast<int>(sorted.size());
        for (int j = 0; j < k; ++j) {
            images[static_cast<size_t>(sorted[j].second)] = sorted[(j + 1) % k].second;
        }
    }
}

}  // namespace

BiasedDessin extract_tree(const ComplexPoly& f) {
    const int n = f.degree();
    if (n < 1) throw std::invalid_argument("polynomial must have degree >= 1");
    if (n > kMaxShabatDegree) {
        throw UnsupportedDegreeError("degree " + std::to_string(n) +
                                     " beyond the supported envelope of " +
                                     std::to_string(kMaxShabatDegree));
    }
    const ShabatCertificate cert = is_biased_shabat(f);
    if (!cert.accepted) {
        throw NotShabatError("not a biased Shabat polynomial: " + cert.summary());
    }
    const double scale = f.scale();
    const ComplexPoly fp = f.derivative();

    // Edge midpoints: the n distinct roots of f; the chosen edge holds 0.
    const std::vector<cplx> midpoints = poly_roots(f);
    int chosen = 0;
    for (int e = 1; e < n; ++e) {
        if (safe_abs(midpoints[e]) < safe_abs(midpoints[chosen])) chosen = e;
    }

    const std::vector<RootCluster> blacks = clustered_roots(f + cplx(1.0, 0.0));
    const std::vector<RootCluster> whites = clustered_roots(f + cplx(-1.0, 0.0));

    std::vector<std::vector<std::pair<double, int>>> black_incident(blacks.size());
    std::vector<std::vector<std::pair<double, int>>> white_incident(whites.size());
    for (int e = 0; e < n; ++e) {
        const LiftOutcome lb = lift_edge(f, fp, midpoints[e], -1.0, blacks, scale);
        const LiftOutcome lw = lift_edge(f, fp, midpoints[e], +1.0, whites, scale);
        black_incident[static_cast<size_t>(lb.vertex)].push_back({lb.angle, e});
        white_incident[static_cast<size_t>(lw.vertex)].push_back({lw.angle, e});
    }
    for (size_t v = 0; v < blacks.size(); ++v) {
        if (static_cast<int>(black_incident[v].size()) != blacks[v].multiplicity) {
            throw AmbiguousVertexAssignmentError("black vertex degree mismatch at " +
                                                 cplx_str(blacks[v].center));
        }
    }
    for (size_t v = 0; v < whites.size(); ++v) {
        if (static_cast<int>(white_incident[v].size()) != whites[v].multiplicity) {
            throw AmbiguousVertexAssignmentError("white vertex degree mismatch at " +
                                                 cplx_str(whites[v].center));
        }
    }

    std::vector<int> alpha(n), beta(n);
    rotation_from_arrivals(black_incident, alpha);
    rotation_from_arrivals(white_incident, beta);

    BiasedDessin result(PermPair(Permutation(std::move(alpha)), Permutation(std::move(beta))),
                        chosen);
    if (!is_biased_tree(result)) {
        throw AmbiguousVertexAssignmentError("extracted combinatorics is not a biased tree");
    }
    return canonicalize(result).dessin;
}

// ---------------------------------------------------------------------------
// Inverse direction: tree -> polynomial.

namespace {

struct CriticalVertex {
    bool black;
    int mult;      // >= 2
    int rep_edge;  // minimal edge of the orbit
};

// f' = lambda * prod (z - x_i)^(mult_i - 1) with f'(0) = 1; f(0) = 0.
bool build_from_critical(const std::vector<CriticalVertex>& criticals,
                         const std::vector<cplx>& x, ComplexPoly& out) {
    ComplexPoly fp = ComplexPoly::from_real({1.0});
    for (size_t i = 0; i < criticals.size(); ++i) {
        const ComplexPoly factor(std::vector<cplx>{-x[i], cplx(1.0, 0.0)});
        for (int r = 0; r + 1 < criticals[i].mult; ++r) fp = fp * factor;
    }
    const cplx at0 = fp.eval({0.0, 0.0});
    if (safe_abs(at0) < 1e-12) return false;
    out = (fp * (cplx(1.0, 0.0) / at0)).antiderivative();
    return true;
}

std::vector<cplx> residuals(const std::vector<CriticalVertex>& criticals,
                            const ComplexPoly& f, const std::vector<cplx>& x) {
    std::vector<cplx> r(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        r[i] = f.eval(x[i]) - cplx(criticals[i].black ? -1.0 : 1.0, 0.0);
    }
    return r;
}

double inf_norm(const std::vector<cplx>& v) {
    double m = 0.0;
    for (cplx z : v) m = std::max(m, safe_abs(z));
    return m;
}

// Gaussian elimination with partial pivoting; false if near-singular.
bool solve_linear(std::vector<std::vector<cplx>> a, std::vector<cplx> rhs,
                  std::vector<cplx>& out) {
    const int k = static_cast<int>(rhs.size());
    for (int col = 0; col < k; ++col) {
        int pivot = col;
        for (int row = col + 1; row < k; ++row) {
            if (safe_abs(a[row][col]) > safe_abs(a[pivot][col])) pivot = row;
        }
        if (safe_abs(a[pivot][col]) < 1e-14) return false;
        std::swap(a[pivot], a[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (int row = col + 1; row < k; ++row) {
            const cplx factor = a[row][col] / a[col][col];
            for (int j = col; j < k; ++j) a[row][j] -= factor * a[col][j];
            rhs[row] -= factor * rhs[col];
        }
    }
    out.assign(k, {0.0, 0.0});
    for (int row = k - 1; row >= 0; --row) {
        cplx acc = rhs[row];
        for (int j = row + 1; j < k; ++j) acc -= a[row][j] * out[j];
        out[row] = acc / a[row][row];
    }
    return true;
}

bool newton_solve(const std::vector<CriticalVertex>& criticals, std::vector<cplx> x,
                  std::vector<cplx>& solution) {
    const int k = static_cast<int>(x.size());
    ComplexPoly f;
    if (!build_from_critical(criticals, x, f)) return false;
    std::vector<cplx> r = residuals(criticals, f, x);
    double rn = inf_norm(r);
    int stalls = 0;

    for (int iter = 0; iter < 120; ++iter) {
        if (rn <= 1e-12) {
            solution = x;
            return true;
        }
        // Numerical Jacobian; the residual map is holomorphic in the unknowns.
        const double hstep = 1e-7;
        std::vector<std::vector<cplx>> jac(k, std::vector<cplx>(k));
        for (int j = 0; j < k; ++j) {
            std::vector<cplx> xj = x;
            xj[j] += hstep;
            ComplexPoly fj;
            if (!build_from_critical(criticals, xj, fj)) return false;
            const std::vector<cplx> rj = residuals(criticals, fj, xj);
            for (int i = 0; i < k; ++i) jac[i][j] = (rj[i] - r[i]) / hstep;
        }
        std::vector<cplx> neg(r.size());
        for (int i = 0; i < k; ++i) neg[i] = -r[i];
        std::vector<cplx> delta;
        if (!solve_linear(jac, neg, delta)) return false;

        bool improved = false;
        for (double damp = 1.0; damp > 1.0 / 128.0; damp /= 2.0) {
            std::vector<cplx> xt = x;
            for (int i = 0; i < k; ++i) xt[i] += delta[i] * damp;
            double far = 0.0;
            for (cplx v : xt) far = std::max(far, safe_abs(v));
            if (far > 100.0) continue;
            ComplexPoly ft;
            if (!build_from_critical(criticals, xt, ft)) continue;
            const std::vector<cplx> rt = residuals(criticals, ft, xt);
            const double rtn = inf_norm(rt);
            if (rtn < rn) {
                x = std::move(xt);
                r = rt;
                rn = rtn;
                f = std::move(ft);
                improved = true;
                break;
            }
        }
        if (!improved && ++stalls > 6) return false;
    }
    if (rn <= 1e-12) {
        solution = x;
        return true;
    }
    return false;
}

// Crude breadth-first plane embedding used as a Newton start: the chosen
// edge straddles 0 and edges fan out respecting the cyclic orders, with edge
// lengths growing by `growth` per depth level (under f(0) = 0, f'(0) = 1 the
// edge through 0 has unit scale and |f'| grows outward).
std::vector<cplx> embed_guess(const BiasedDessin& T,
                              const std::vector<CriticalVertex>& criticals,
                              double growth) {
    const int n = T.degree();
    std::vector<int> black_of(n), white_of(n);
    const auto black_orbits = T.alpha().orbits();
    const auto white_orbits = T.beta().orbits();
    for (size_t v = 0; v < black_orbits.size(); ++v) {
        for (int e : black_orbits[v]) black_of[e] = static_cast<int>(v);
    }
    for (size_t v = 0; v < white_orbits.size(); ++v) {
        for (int e : white_orbits[v]) white_of[e] = static_cast<int>(v);
    }

    // vertex id: (color, orbit index); positions found by BFS from the chosen
    // edge's endpoints.
    std::vector<cplx> black_pos(black_orbits.size());
    std::vector<char> black_placed(black_orbits.size(), 0);
    std::vector<cplx> white_pos(white_orbits.size());
    std::vector<char> white_placed(white_orbits.size(), 0);

    struct Item {
        bool black;
        int vertex;
        int in_edge;
        double in_angle;  // direction from this vertex toward the far endpoint of in_edge
        int depth;
    };
    std::vector<Item> queue;
    const int e0 = T.chosen();
    black_pos[black_of[e0]] = {-0.5, 0.0};
    black_placed[black_of[e0]] = 1;
    white_pos[white_of[e0]] = {0.5, 0.0};
    white_placed[white_of[e0]] = 1;
    queue.push_back({true, black_of[e0], e0, 0.0, 0});
    queue.push_back({false, white_of[e0], e0, std::numbers::pi, 0});

    for (size_t head = 0; head < queue.size(); ++head) {
        const Item item = queue[head];
        const auto& orbit = item.black ? black_orbits[item.vertex] : white_orbits[item.vertex];
        const int k = static_cast<int>(orbit.size());
        if (k == 1) continue;
        const cplx p = item.black ? black_pos[item.vertex] : white_pos[item.vertex];
        const double len = 0.9 * std::pow(growth, item.depth);
        // walk the rotation cycle starting from the in-edge
        int cursor = item.in_edge;
        for (int j = 1; j < k; ++j) {
            cursor = item.black ? T.alpha()(cursor) : T.beta()(cursor);
            const double theta = item.in_angle + 2.0 * std::numbers::pi * j / k;
            const cplx pos = p + std::polar(len, theta);
            if (item.black) {
                const int w = white_of[cursor];
                if (!white_placed[w]) {
                    white_placed[w] = 1;
                    white_pos[w] = pos;
                    queue.push_back({false, w, cursor, theta + std::numbers::pi, item.depth + 1});
                }
            } else {
                const int b = black_of[cursor];
                if (!black_placed[b]) {
                    black_placed[b] = 1;
                    black_pos[b] = pos;
                    queue.push_back({true, b, cursor, theta + std::numbers::pi, item.depth + 1});
                }
            }
        }
    }

    std::vector<cplx> out;
    out.reserve(criticals.size());
    for (const CriticalVertex& cv : criticals) {
        out.push_back(cv.black ? black_pos[black_of[cv.rep_edge]]
                               : white_pos[white_of[cv.rep_edge]]);
    }
    return out;
}

}  // namespace

ComplexPoly solve_shabat(const BiasedDessin& tree, std::uint64_t seed, int max_restarts) {
    if (!is_biased_tree(tree)) {
        throw std::invalid_argument("input dessin is not a biased tree");
    }
    const int n = tree.degree();
    if (n > kMaxSolveDegree) {
        throw UnsupportedDegreeError("solver supports trees of degree <= " +
                                     std::to_string(kMaxSolveDegree));
    }
    const CanonicalResult canon = canonicalize(tree);
    const BiasedDessin& T = canon.dessin;
    if (n == 1) return ComplexPoly::variable();

    std::vector<CriticalVertex> criticals;
    for (const auto& orbit : T.alpha().orbits()) {
        if (orbit.size() >= 2) criticals.push_back({true, static_cast<int>(orbit.size()), orbit[0]});
    }
    for (const auto& orbit : T.beta().orbits()) {
        if (orbit.size() >= 2) criticals.push_back({false, static_cast<int>(orbit.size()), orbit[0]});
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<cplx> embedded = embed_guess(T, criticals, 1.5);
    for (int attempt = 0; attempt < max_restarts; ++attempt) {
        std::vector<cplx> x0;
        x0.reserve(criticals.size());
        if (attempt == 0) {
            x0 = embedded;
        } else if (attempt % 3 == 1) {
            // Re-layout with a stratified growth factor: the true tree can sit
            // anywhere between compact and steeply geometric (Chebyshev-like)
            // configurations, so walk a growth ladder deterministically and
            // randomize only scale and jitter.
            const double growth = 0.9 + 0.4 * ((attempt / 3) % 8);
            const double scale = std::exp(std::log(0.5) + unit(rng) * std::log(4.0 / 0.5));
            const std::vector<cplx> layout = embed_guess(T, criticals, growth);
            const double amp = 0.1 * scale;
            for (size_t i = 0; i < criticals.size(); ++i) {
                x0.push_back(layout[i] * scale +
                             std::polar(amp * unit(rng), 2.0 * std::numbers::pi * unit(rng)));
            }
        } else if (attempt % 3 == 2) {
            // Rescaled jitter of the base layout; the jitter also lets Newton
            // leave symmetric configurations.
            const double scale = std::exp(std::log(0.6) + unit(rng) * std::log(16.0 / 0.6));
            const double amp = 0.12 * scale;
            for (size_t i = 0; i < criticals.size(); ++i) {
                x0.push_back(embedded[i] * scale +
                             std::polar(amp * unit(rng), 2.0 * std::numbers::pi * unit(rng)));
            }
        } else {
            // Critical vertices of degree <= 7 trees reach radius ~40.
            for (size_t i = 0; i < criticals.size(); ++i) {
                const double radius = std::exp(std::log(0.3) + unit(rng) * std::log(64.0 / 0.3));
                x0.push_back(std::polar(radius, 2.0 * std::numbers::pi * unit(rng)));
            }
        }
        std::vector<cplx> sol;
        if (!newton_solve(criticals, std::move(x0), sol)) continue;
        ComplexPoly f;
        if (!build_from_critical(criticals, sol, f)) continue;
        // Acceptance is combinatorial, never by residuals alone: Newton can
        // land on a different tree with the same critical multiplicities.
        // When it lands on the mirror tree, the coefficient-conjugate
        // polynomial is the solution for the target.
        for (int mirror = 0; mirror < 2; ++mirror) {
            try {
                if (!is_biased_shabat(f).accepted) break;
                if (canonical_key(extract_tree(f)) == canon.key) return f;
            } catch (const ShabatError&) {
                break;
            }
            std::vector<cplx> conj_coeffs = f.coeffs();
            for (cplx& c : conj_coeffs) c = std::conj(c);
            f = ComplexPoly(std::move(conj_coeffs));
        }
    }
    throw NoConvergenceError("no combinatorially verified solution within " +
                             std::to_string(max_restarts) + " restarts");
}

ComplexPoly family_poly(PolyFamily kind, int n) {
    if (n < 1) throw std::invalid_argument("family degree must be >= 1");
    if (n > kMaxShabatDegree) {
        throw UnsupportedDegreeError("family degree beyond the supported envelope");
    }
    if (kind == PolyFamily::star) {
        std::vector<cplx> c(static_cast<size_t>(n) + 1, cplx{0.0, 0.0});
        c.back() = {1.0, 0.0};
        const double u = std::pow(2.0, -1.0 / n);
        return bias_normalize(ComplexPoly(std::move(c)), {0.0, 0.0}, {1.0, 0.0}, {u, 0.0});
    }
    // Chebyshev by recurrence: T_0 = 1, T_1 = z, T_{k+1} = 2 z T_k - T_{k-1}.
    ComplexPoly prev = ComplexPoly::from_real({1.0});
    ComplexPoly cur = ComplexPoly::variable();
    const ComplexPoly two_z = ComplexPoly::from_real({0.0, 2.0});
    for (int k = 1; k < n; ++k) {
        ComplexPoly next = two_z * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    const double u = std::cos(std::numbers::pi / (2.0 * n));
    return bias_normalize(cur, {-1.0, 0.0}, {1.0, 0.0}, {u, 0.0});
}

}  // namespace dessins
