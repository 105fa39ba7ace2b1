// Copyright 2026 The holoflux authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "holoflux/group.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace holoflux {

namespace {

constexpr double kCutLocusTol = 1e-9;

double wrap_0_2pi(double phi) {
    phi = std::fmod(phi, 2.0 * kPi);
    if (phi < 0) phi += 2.0 * kPi;
    // fmod can land exactly on 2*pi after the correction
    if (phi >= 2.0 * kPi) phi -= 2.0 * kPi;
    return phi;
}

/// Wrap to (-pi, pi].
double wrap_pm_pi(double phi) {
    phi = wrap_0_2pi(phi);
    if (phi > kPi) phi -= 2.0 * kPi;
    return phi;
}

Eigen::Matrix2cd pauli(int a) {
    Eigen::Matrix2cd s;
    const cx i(0.0, 1.0);
    switch (a) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, -i, i, 0; break;
    default: s << 1, 0, 0, -1; break;
    }
    return s;
}

/// tau_a = -i sigma_a / 2, the fixed basis of su(2).
Eigen::Matrix2cd su2_tau(int a) { return cx(0.0, -0.5) * pauli(a); }

double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

void require_same_backend(const Backend *self, const GroupElem &g) {
    if (g.backend != self)
        throw BackendMismatch("group element belongs to a different backend");
}

} // namespace

// ---------------------------------------------------------------------------
// Backend base

AlgElem Backend::alg(const Eigen::VectorXd &x) const {
    if (x.size() != alg_dim()) throw DomainError("algebra coordinate length mismatch");
    return AlgElem{this, x};
}

CoAlgElem Backend::coalg(const Eigen::VectorXd &theta) const {
    if (theta.size() != alg_dim()) throw DomainError("dual coordinate length mismatch");
    return CoAlgElem{this, theta};
}

AlgElem Backend::alg_basis(int a) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(alg_dim());
    x(a) = 1.0;
    return AlgElem{this, x};
}

GroupElem Backend::exp(const AlgElem &) const {
    throw Unsupported("exp is not defined on backend " + name());
}

AlgElem Backend::log(const GroupElem &) const {
    throw Unsupported("log is not defined on backend " + name());
}

GroupElem Backend::sqrt(const GroupElem &g) const {
    AlgElem x = log(g);
    x.x *= 0.5;
    return exp(x);
}

Eigen::MatrixXd Backend::ad_matrix(const GroupElem &) const {
    throw Unsupported("adjoint action is not defined on backend " + name());
}

AlgElem Backend::ad(const GroupElem &g, const AlgElem &x) const {
    require_same_backend(this, g);
    return AlgElem{this, ad_matrix(g) * x.x};
}

CoAlgElem Backend::coad(const GroupElem &g, const CoAlgElem &theta) const {
    require_same_backend(this, g);
    // <CoAd(g)theta, X> = <theta, Ad(g^-1)X> and Ad is orthogonal in the
    // tau basis, so the coordinate matrix is again R(g).
    return CoAlgElem{this, ad_matrix(g) * theta.theta};
}

AlgElem Backend::bracket(const AlgElem &, const AlgElem &) const {
    throw Unsupported("Lie bracket is not defined on backend " + name());
}

Eigen::MatrixXcd Backend::irrep_generator(int, int) const {
    throw Unsupported("irrep generators are not defined on backend " + name());
}

const std::vector<std::vector<std::vector<double>>> &Backend::structure_constants() const {
    if (fabc_.empty()) {
        const int n = alg_dim();
        fabc_.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                AlgElem z = bracket(alg_basis(a), alg_basis(b));
                for (int c = 0; c < n; ++c) fabc_[a][b][c] = z.x(c);
            }
    }
    return fabc_;
}

cx Backend::haar_integrate(const std::function<cx(const GroupElem &)> &f, int band) const {
    HaarRule rule = haar_rule(band);
    cx acc(0.0, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

GroupElem Backend::parse_element(const std::string &text) const {
    if (text == "e" || text == "id") return identity();
    if (text.rfind("angle:", 0) == 0 && kind() == Kind::u1) {
        auto *u1 = dynamic_cast<const U1Backend *>(this);
        return u1->make(std::stod(text.substr(6)));
    }
    if (text.rfind("exp:", 0) == 0 && is_lie()) {
        std::stringstream ss(text.substr(4));
        Eigen::VectorXd x(alg_dim());
        std::string tok;
        for (int a = 0; a < alg_dim(); ++a) {
            if (!std::getline(ss, tok, ',')) throw ValidationError("bad exp: element literal");
            x(a) = std::stod(tok);
        }
        return exp(alg(x));
    }
    throw ValidationError("cannot parse element '" + text + "' on backend " + name());
}

// ---------------------------------------------------------------------------
// Finite groups

GroupElem FiniteBackend::multiply(const GroupElem &a, const GroupElem &b) const {
    require_same_backend(this, a);
    require_same_backend(this, b);
    return make(table_[a.index()][b.index()]);
}

GroupElem FiniteBackend::invert(const GroupElem &a) const {
    require_same_backend(this, a);
    return make(inverse_[a.index()]);
}

double FiniteBackend::distance(const GroupElem &a, const GroupElem &b) const {
    return a.index() == b.index() ? 0.0 : 1.0;
}

std::vector<int> FiniteBackend::irrep_labels() const {
    std::vector<int> labels(irreps_.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i);
    return labels;
}

int FiniteBackend::irrep_dim(int label) const {
    return static_cast<int>(irreps_.at(label).front().rows());
}

Eigen::MatrixXcd FiniteBackend::irrep_matrix(int label, const GroupElem &g) const {
    require_same_backend(this, g);
    return irreps_.at(label).at(g.index());
}

HaarRule FiniteBackend::haar_rule(int) const {
    HaarRule rule;
    const int n = order();
    rule.nodes.reserve(n);
    for (int i = 0; i < n; ++i) rule.nodes.push_back(make(i));
    rule.weights.assign(n, 1.0 / n);
    rule.exact_band = 0;
    return rule;
}

GroupElem FiniteBackend::random_element(Rng &rng) const {
    return make(static_cast<int>(rng.below(order())));
}

GroupElem FiniteBackend::parse_element(const std::string &text) const {
    for (int i = 0; i < order(); ++i)
        if (names_[i] == text) return make(i);
    return Backend::parse_element(text);
}

int FiniteBackend::index_by_name(const std::string &name) const {
    for (int i = 0; i < order(); ++i)
        if (names_[i] == name) return i;
    throw ValidationError("unknown element '" + name + "' in " + this->name());
}

void FiniteBackend::finalize() {
    const int n = order();
    inverse_.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (table_[a][b] == identity_) inverse_[a] = b;
}

namespace {

/// Extends generator irrep matrices to the whole group by table closure.
std::vector<Eigen::MatrixXcd> close_irrep(const std::vector<std::vector<int>> &table,
                                          int identity, int dim,
                                          const std::vector<std::pair<int, Eigen::MatrixXcd>> &gens) {
    const int n = static_cast<int>(table.size());
    std::vector<Eigen::MatrixXcd> mats(n);
    std::vector<bool> known(n, false);
    mats[identity] = Eigen::MatrixXcd::Identity(dim, dim);
    known[identity] = true;
    for (const auto &[idx, m] : gens) {
        mats[idx] = m;
        known[idx] = true;
    }
    bool progress = true;
    while (progress) {
        progress = false;
        for (int a = 0; a < n; ++a) {
            if (!known[a]) continue;
            for (const auto &[g, m] : gens) {
                int ag = table[a][g];
                Eigen::MatrixXcd cand = mats[a] * m;
                if (!known[ag]) {
                    mats[ag] = cand;
                    known[ag] = true;
                    progress = true;
                } else if ((mats[ag] - cand).norm() > 1e-10) {
                    throw Error("irrep generator matrices violate the group relations");
                }
            }
        }
    }
    for (int a = 0; a < n; ++a)
        if (!known[a]) throw Error("irrep closure did not reach the whole group");
    return mats;
}

std::vector<int> compose_perm(const std::vector<int> &a, const std::vector<int> &b) {
    std::vector<int> r(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) r[x] = a[b[x]];
    return r;
}

} // namespace

std::unique_ptr<FiniteBackend> FiniteBackend::make_group(const std::string &id) {
    auto be = std::unique_ptr<FiniteBackend>(new FiniteBackend());
    be->id_ = id;
    const cx i1(0.0, 1.0);
    if (id == "Z2" || id == "Z4") {
        const int n = (id == "Z2") ? 2 : 4;
        be->table_.assign(n, std::vector<int>(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) be->table_[a][b] = (a + b) % n;
        be->names_ = (n == 2) ? std::vector<std::string>{"e", "u"}
                              : std::vector<std::string>{"e", "g", "g2", "g3"};
        be->identity_ = 0;
        be->finalize();
        for (int m = 0; m < n; ++m) {
            std::vector<Eigen::MatrixXcd> mats(n);
            for (int k = 0; k < n; ++k) {
                Eigen::MatrixXcd chi(1, 1);
                chi(0, 0) = std::exp(i1 * (2.0 * kPi * m * k / n));
                mats[k] = chi;
            }
            be->irreps_.push_back(std::move(mats));
        }
        return be;
    }
    if (id == "S3") {
        // Permutations of {0,1,2}; r is the 3-cycle, s the (01) transposition.
        std::vector<std::vector<int>> perms = {
            {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}};
        be->names_ = {"e", "r", "r2", "s", "rs", "r2s"};
        const int n = 6;
        be->table_.assign(n, std::vector<int>(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                auto p = compose_perm(perms[a], perms[b]);
                be->table_[a][b] =
                    static_cast<int>(std::find(perms.begin(), perms.end(), p) - perms.begin());
            }
        be->identity_ = 0;
        be->finalize();
        // trivial
        {
            std::vector<Eigen::MatrixXcd> mats(n, Eigen::MatrixXcd::Ones(1, 1));
            be->irreps_.push_back(std::move(mats));
        }
        // sign
        {
            std::vector<Eigen::MatrixXcd> mats(n);
            for (int a = 0; a < n; ++a) {
                Eigen::MatrixXcd m(1, 1);
                m(0, 0) = (a < 3) ? 1.0 : -1.0;
                mats[a] = m;
            }
            be->irreps_.push_back(std::move(mats));
        }
        // standard 2-dim, omega realization
        {
            const cx w = std::exp(i1 * (2.0 * kPi / 3.0));
            Eigen::MatrixXcd r(2, 2), s(2, 2);
            r << w, 0, 0, std::conj(w);
            s << 0, 1, 1, 0;
            be->irreps_.push_back(close_irrep(be->table_, 0, 2, {{1, r}, {3, s}}));
        }
        return be;
    }
    if (id == "Q8") {
        // Elements 1,-1,i,-i,j,-j,k,-k encoded as axis*2 + (sign < 0).
        auto enc = [](int axis, int sign) { return axis * 2 + (sign < 0 ? 1 : 0); };
        auto mul = [&](int a, int b) {
            int ax_a = a / 2, ax_b = b / 2;
            int sign = (a % 2 ? -1 : 1) * (b % 2 ? -1 : 1);
            static const int axis_tab[4][4] = {
                {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
            static const int sign_tab[4][4] = {
                {1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
            return enc(axis_tab[ax_a][ax_b], sign * sign_tab[ax_a][ax_b]);
        };
        const int n = 8;
        be->table_.assign(n, std::vector<int>(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) be->table_[a][b] = mul(a, b);
        be->names_ = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
        be->identity_ = 0;
        be->finalize();
        // four 1-dim characters, kernel {+-1, +-axis}
        for (int which = 0; which < 4; ++which) {
            std::vector<Eigen::MatrixXcd> mats(n);
            for (int a = 0; a < n; ++a) {
                int axis = a / 2;
                double v = (which == 0 || axis == 0 || axis == which) ? 1.0 : -1.0;
                Eigen::MatrixXcd m(1, 1);
                m(0, 0) = v;
                mats[a] = m;
            }
            be->irreps_.push_back(std::move(mats));
        }
        // 2-dim irrep
        {
            Eigen::MatrixXcd mi(2, 2), mj(2, 2);
            mi << i1, 0, 0, -i1;
            mj << 0, 1, -1, 0;
            be->irreps_.push_back(
                close_irrep(be->table_, 0, 2, {{enc(1, 1), mi}, {enc(2, 1), mj}}));
        }
        return be;
    }
    throw ValidationError("unknown finite group '" + id +
                          "' (supported: Z2, Z4, S3, Q8)");
}

// ---------------------------------------------------------------------------
// U(1)

GroupElem U1Backend::make(double phi) const { return GroupElem{this, wrap_0_2pi(phi)}; }

GroupElem U1Backend::multiply(const GroupElem &a, const GroupElem &b) const {
    require_same_backend(this, a);
    require_same_backend(this, b);
    return make(a.angle() + b.angle());
}

GroupElem U1Backend::invert(const GroupElem &a) const {
    require_same_backend(this, a);
    return make(-a.angle());
}

double U1Backend::distance(const GroupElem &a, const GroupElem &b) const {
    return std::abs(2.0 * std::sin(0.5 * (a.angle() - b.angle())));
}

GroupElem U1Backend::exp(const AlgElem &x) const { return make(x.x(0)); }

AlgElem U1Backend::log(const GroupElem &g) const {
    require_same_backend(this, g);
    double phi = wrap_pm_pi(g.angle());
    if (std::abs(std::abs(phi) - kPi) <= kCutLocusTol)
        throw DomainError("log at the U(1) cut locus (angle pi)");
    Eigen::VectorXd x(1);
    x(0) = phi;
    return AlgElem{this, x};
}

Eigen::MatrixXd U1Backend::ad_matrix(const GroupElem &) const {
    return Eigen::MatrixXd::Identity(1, 1);
}

AlgElem U1Backend::bracket(const AlgElem &, const AlgElem &) const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(1);
    return AlgElem{this, z};
}

std::vector<int> U1Backend::irrep_labels() const {
    std::vector<int> labels;
    for (int k = -cutoff_; k <= cutoff_; ++k) labels.push_back(k);
    return labels;
}

Eigen::MatrixXcd U1Backend::irrep_matrix(int label, const GroupElem &g) const {
    require_same_backend(this, g);
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = std::exp(cx(0.0, label * g.angle()));
    return m;
}

Eigen::MatrixXcd U1Backend::irrep_generator(int label, int) const {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = cx(0.0, static_cast<double>(label));
    return m;
}

HaarRule U1Backend::haar_rule(int band) const {
    HaarRule rule;
    const int n = std::max(band + 1, 2 * cutoff_ + 1);
    rule.nodes.reserve(n);
    for (int j = 0; j < n; ++j) rule.nodes.push_back(make(2.0 * kPi * j / n));
    rule.weights.assign(n, 1.0 / n);
    rule.exact_band = n - 1;
    return rule;
}

GroupElem U1Backend::random_element(Rng &rng) const { return make(rng.uniform(0.0, 2.0 * kPi)); }

// ---------------------------------------------------------------------------
// SU(2)

std::string Su2Backend::name() const {
    if (cutoff_ % 2 == 0) return "su2:cutoff=" + std::to_string(cutoff_ / 2);
    return "su2:cutoff=" + std::to_string(cutoff_) + "/2";
}

GroupElem Su2Backend::make(const Eigen::Matrix2cd &u) const {
    Eigen::Matrix2cd v = u;
    double drift = (v.adjoint() * v - Eigen::Matrix2cd::Identity()).norm();
    if (drift > 1e-6) throw DomainError("SU(2) payload is not unitary");
    if (drift > 1e-14) {
        // one Newton step of the polar projection, then fix the determinant
        v = 1.5 * v - 0.5 * v * (v.adjoint() * v);
    }
    cx det = v.determinant();
    if (std::abs(det - cx(1.0, 0.0)) > 1e-6) throw DomainError("SU(2) payload determinant != 1");
    if (std::abs(det - cx(1.0, 0.0)) > 1e-15) v /= std::sqrt(det);
    return GroupElem{this, v};
}

GroupElem Su2Backend::identity() const { return GroupElem{this, Eigen::Matrix2cd::Identity()}; }

GroupElem Su2Backend::multiply(const GroupElem &a, const GroupElem &b) const {
    require_same_backend(this, a);
    require_same_backend(this, b);
    return make(a.matrix() * b.matrix());
}

GroupElem Su2Backend::invert(const GroupElem &a) const {
    require_same_backend(this, a);
    return GroupElem{this, a.matrix().adjoint()};
}

double Su2Backend::distance(const GroupElem &a, const GroupElem &b) const {
    return (a.matrix() - b.matrix()).norm();
}

GroupElem Su2Backend::exp(const AlgElem &x) const {
    const double r = x.x.norm();
    if (r < 1e-300) return identity();
    const double alpha = 0.5 * r;
    Eigen::Matrix2cd nsigma = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 3; ++a) nsigma += (x.x(a) / r) * pauli(a);
    Eigen::Matrix2cd u = std::cos(alpha) * Eigen::Matrix2cd::Identity() -
                         cx(0.0, std::sin(alpha)) * nsigma;
    return make(u);
}

AlgElem Su2Backend::log(const GroupElem &g) const {
    require_same_backend(this, g);
    const Eigen::Matrix2cd &u = g.matrix();
    const double tr = u.trace().real();
    if (std::abs(tr + 2.0) <= kCutLocusTol)
        throw DomainError("log at the SU(2) cut locus (tr = -2)");
    const double c = std::clamp(tr / 2.0, -1.0, 1.0);
    const double alpha = std::acos(c);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
    if (alpha > 1e-12) {
        const double s = std::sin(alpha);
        Eigen::Matrix2cd a = u - c * Eigen::Matrix2cd::Identity();
        for (int k = 0; k < 3; ++k)
            x(k) = 2.0 * alpha * (cx(0.0, 1.0) * (pauli(k) * a).trace()).real() / (2.0 * s);
    }
    return AlgElem{this, x};
}

Eigen::MatrixXd Su2Backend::ad_matrix(const GroupElem &g) const {
    require_same_backend(this, g);
    Eigen::MatrixXd r(3, 3);
    const Eigen::Matrix2cd &u = g.matrix();
    for (int b = 0; b < 3; ++b) {
        Eigen::Matrix2cd m = u * su2_tau(b) * u.adjoint();
        for (int a = 0; a < 3; ++a) r(a, b) = (cx(0.0, 1.0) * (pauli(a) * m).trace()).real();
    }
    return r;
}

AlgElem Su2Backend::bracket(const AlgElem &x, const AlgElem &y) const {
    Eigen::Matrix2cd mx = Eigen::Matrix2cd::Zero(), my = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 3; ++a) {
        mx += x.x(a) * su2_tau(a);
        my += y.x(a) * su2_tau(a);
    }
    Eigen::Matrix2cd mz = mx * my - my * mx;
    Eigen::VectorXd z(3);
    for (int a = 0; a < 3; ++a) z(a) = (cx(0.0, 1.0) * (pauli(a) * mz).trace()).real();
    return AlgElem{this, z};
}

std::vector<int> Su2Backend::irrep_labels() const {
    std::vector<int> labels;
    for (int l = 0; l <= cutoff_; ++l) labels.push_back(l);
    return labels;
}

Eigen::MatrixXcd Su2Backend::irrep_matrix(int label, const GroupElem &g) const {
    require_same_backend(this, g);
    // Spin-j matrix from the polynomial model on C^2: basis index i <-> m = j - i,
    // entries read off the binomial expansion of (a z1 + c z2)^(j+m) (b z1 + d z2)^(j-m).
    const int L = label; // 2j
    const Eigen::Matrix2cd &u = g.matrix();
    const cx a = u(0, 0), b = u(0, 1), c = u(1, 0), d = u(1, 1);
    Eigen::MatrixXcd m(L + 1, L + 1);
    for (int ip = 0; ip <= L; ++ip) {       // row, m' = j - ip (doubled: L - 2 ip)
        for (int iq = 0; iq <= L; ++iq) {   // col, m = j - iq
            const int jm = L - iq;          // j + m
            const int jmm = iq;             // j - m
            const int jmp = L - ip;         // j + m'
            const int jmpm = ip;            // j - m'
            cx acc(0.0, 0.0);
            for (int p = 0; p <= jm; ++p) {
                const int q = jmp - p;
                if (q < 0 || q > jmm) continue;
                acc += binom(jm, p) * binom(jmm, q) * std::pow(a, p) * std::pow(c, jm - p) *
                       std::pow(b, q) * std::pow(d, jmm - q);
            }
            m(ip, iq) = acc * std::sqrt(factorial(jmp) * factorial(jmpm) /
                                        (factorial(jm) * factorial(jmm)));
        }
    }
    return m;
}

Eigen::MatrixXcd Su2Backend::irrep_generator(int label, int a) const {
    const int L = label;
    const int dim = L + 1;
    Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd j3 = Eigen::MatrixXcd::Zero(dim, dim);
    const double j = L / 2.0;
    for (int i = 0; i <= L; ++i) {
        const double m = j - i;
        j3(i, i) = m;
        if (i >= 1) jp(i - 1, i) = std::sqrt(j * (j + 1) - m * (m + 1)); // raises m
    }
    Eigen::MatrixXcd jm = jp.adjoint();
    Eigen::MatrixXcd ja;
    if (a == 0)
        ja = 0.5 * (jp + jm);
    else if (a == 1)
        ja = cx(0.0, -0.5) * (jp - jm);
    else
        ja = j3;
    return cx(0.0, -1.0) * ja; // d pi(tau_a) = -i J_a
}

HaarRule Su2Backend::haar_rule(int band) const {
    // Product quadrature on S^3: spin-j entries are degree-2j polynomials in
    // the embedding coordinates, so a rule exact to polynomial degree `band`
    // integrates every function of band <= band exactly.
    HaarRule rule;
    const int deg = std::max(band, 1);
    const int n_phi = deg + 1;
    const int n_leg = (deg + 2) / 2 + 1;
    const int n_cheb = deg / 2 + 1; // Chebyshev-U with n nodes is exact to 2n-1
    std::vector<double> leg_nodes, leg_weights;
    gauss_legendre(n_leg, leg_nodes, leg_weights);
    std::vector<double> cheb_nodes(n_cheb), cheb_weights(n_cheb);
    for (int k = 1; k <= n_cheb; ++k) {
        const double t = kPi * k / (n_cheb + 1);
        cheb_nodes[k - 1] = std::cos(t);
        cheb_weights[k - 1] = kPi / (n_cheb + 1) * std::sin(t) * std::sin(t);
    }
    const double norm = 1.0 / (2.0 * kPi * kPi);
    for (int ic = 0; ic < n_cheb; ++ic) {
        const double t1 = cheb_nodes[ic];
        const double s1 = std::sqrt(std::max(0.0, 1.0 - t1 * t1));
        for (int il = 0; il < n_leg; ++il) {
            const double t2 = leg_nodes[il];
            const double s2 = std::sqrt(std::max(0.0, 1.0 - t2 * t2));
            for (int ip = 0; ip < n_phi; ++ip) {
                const double phi = 2.0 * kPi * ip / n_phi;
                const double x0 = t1;
                const double x1 = s1 * t2;
                const double x2 = s1 * s2 * std::cos(phi);
                const double x3 = s1 * s2 * std::sin(phi);
                Eigen::Matrix2cd u;
                u << cx(x0, x1), cx(x2, x3), cx(-x2, x3), cx(x0, -x1);
                rule.nodes.push_back(GroupElem{this, u});
                rule.weights.push_back(norm * cheb_weights[ic] * leg_weights[il] *
                                       (2.0 * kPi / n_phi));
            }
        }
    }
    rule.exact_band = deg;
    return rule;
}

GroupElem Su2Backend::random_element(Rng &rng) const {
    Eigen::Vector4d q;
    for (int i = 0; i < 4; ++i) q(i) = rng.gaussian();
    q.normalize();
    Eigen::Matrix2cd u;
    u << cx(q(0), q(1)), cx(q(2), q(3)), cx(-q(2), q(3)), cx(q(0), -q(1));
    return GroupElem{this, u};
}

// ---------------------------------------------------------------------------

std::unique_ptr<Backend> make_backend(const std::string &selector) {
    auto colon = selector.find(':');
    const std::string head = selector.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : selector.substr(colon + 1);
    if (head == "finite") return FiniteBackend::make_group(rest);
    if (head == "u1") {
        if (rest.rfind("modes=", 0) != 0)
            throw ValidationError("u1 selector must look like 'u1:modes=<K>'");
        return std::make_unique<U1Backend>(std::stoi(rest.substr(6)));
    }
    if (head == "su2") {
        if (rest.rfind("cutoff=", 0) != 0)
            throw ValidationError("su2 selector must look like 'su2:cutoff=<J>'");
        std::string j = rest.substr(7);
        auto slash = j.find('/');
        int twice;
        if (slash == std::string::npos) {
            twice = 2 * std::stoi(j);
        } else {
            if (j.substr(slash + 1) != "2") throw ValidationError("su2 cutoff must be k or k/2");
            twice = std::stoi(j.substr(0, slash));
        }
        return std::make_unique<Su2Backend>(twice);
    }
    throw ValidationError("unknown backend '" + selector +
                          "' (supported: finite:{Z2,Z4,S3,Q8}, u1:modes=<K>, su2:cutoff=<J>)");
}

void gauss_legendre(int n, std::vector<double> &nodes, std::vector<double> &weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

} // namespace holoflux
