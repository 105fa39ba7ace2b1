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

#include "holoflux/pw.hpp"

#include <cmath>

namespace holoflux {

namespace {

std::vector<int> labels_up_to_band(const Backend *be, int band) {
    if (be->kind() == Backend::Kind::finite) return be->irrep_labels();
    std::vector<int> labels;
    if (be->kind() == Backend::Kind::u1) {
        for (int k = -band; k <= band; ++k) labels.push_back(k);
    } else {
        for (int l = 0; l <= band; ++l) labels.push_back(l);
    }
    return labels;
}

} // namespace

PWFunction PWFunction::constant(const Backend *be, cx value) {
    PWFunction f(be);
    int trivial = 0;
    if (be->kind() == Backend::Kind::finite) trivial = be->irrep_labels().front();
    f.add(trivial, 0, 0, value);
    return f;
}

PWFunction PWFunction::basis(const Backend *be, int label, int m, int n, cx scale) {
    PWFunction f(be);
    f.add(label, m, n, scale);
    return f;
}

PWFunction PWFunction::delta(const Backend *be, int band) {
    PWFunction f(be);
    for (int l : labels_up_to_band(be, band)) {
        const int d = be->irrep_dim(l);
        for (int m = 0; m < d; ++m) f.add(l, m, m, static_cast<double>(d));
    }
    return f;
}

PWFunction PWFunction::project(const Backend *be, const std::function<cx(const GroupElem &)> &fn,
                               int band) {
    // coef[l](m,n) = d_l * integral f(g) conj(pi^l_mn(g)); the rule must be
    // exact for integrands of band band(f) + band(l).
    PWFunction out(be);
    const int rule_band = be->kind() == Backend::Kind::finite ? 0 : 2 * band;
    HaarRule rule = be->haar_rule(rule_band);
    std::vector<cx> values(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) values[i] = fn(rule.nodes[i]);
    for (int l : labels_up_to_band(be, band)) {
        const int d = be->irrep_dim(l);
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * values[i] * be->irrep_matrix(l, rule.nodes[i]).conjugate();
        acc *= static_cast<double>(d);
        if (acc.norm() > 1e-13) out.coef_[l] = acc;
    }
    return out;
}

int PWFunction::band() const {
    int band = 0;
    for (const auto &[l, c] : coef_) band = std::max(band, be_->band_of_label(l));
    return band;
}

cx PWFunction::eval(const GroupElem &g) const {
    cx acc(0.0, 0.0);
    for (const auto &[l, c] : coef_)
        acc += (c.cwiseProduct(be_->irrep_matrix(l, g))).sum();
    return acc;
}

void PWFunction::add(int label, int m, int n, cx value) {
    auto it = coef_.find(label);
    if (it == coef_.end()) {
        const int d = be_->irrep_dim(label);
        it = coef_.emplace(label, Eigen::MatrixXcd::Zero(d, d)).first;
    }
    it->second(m, n) += value;
}

PWFunction &PWFunction::operator+=(const PWFunction &other) {
    if (be_ == nullptr) be_ = other.be_;
    if (other.be_ != nullptr && other.be_ != be_)
        throw BackendMismatch("adding PW functions from different backends");
    for (const auto &[l, c] : other.coef_) {
        auto it = coef_.find(l);
        if (it == coef_.end())
            coef_[l] = c;
        else
            it->second += c;
    }
    return *this;
}

PWFunction &PWFunction::operator*=(cx scale) {
    for (auto &[l, c] : coef_) c *= scale;
    return *this;
}

PWFunction PWFunction::product(const PWFunction &other) const {
    if (be_ != other.be_) throw BackendMismatch("multiplying PW functions from different backends");
    if (coef_.empty() || other.coef_.empty()) return PWFunction(be_);
    // Entry-pair products come from the per-backend cache, so repeated
    // products inside bracket and pullback loops cost coefficient sums only.
    auto &cache = HarmonicCache::for_backend(be_);
    PWFunction out(be_);
    for (const auto &[la, ca] : coef_) {
        const int da = be_->irrep_dim(la);
        for (int ma = 0; ma < da; ++ma)
            for (int na = 0; na < da; ++na) {
                const cx a = ca(ma, na);
                if (a == cx(0.0)) continue;
                for (const auto &[lb, cb] : other.coef_) {
                    const int db = be_->irrep_dim(lb);
                    for (int mb = 0; mb < db; ++mb)
                        for (int nb = 0; nb < db; ++nb) {
                            const cx b = cb(mb, nb);
                            if (b == cx(0.0)) continue;
                            PWFunction p =
                                cache.prod_entry(EntryIdx{la, ma, na}, EntryIdx{lb, mb, nb});
                            p *= a * b;
                            out += p;
                        }
                }
            }
    }
    return out;
}

PWFunction PWFunction::conjugated() const {
    auto &cache = HarmonicCache::for_backend(be_);
    PWFunction out(be_);
    for (const auto &[l, c] : coef_) {
        const int d = be_->irrep_dim(l);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                if (c(m, n) == cx(0.0)) continue;
                PWFunction p = cache.conj_entry(EntryIdx{l, m, n});
                p *= std::conj(c(m, n));
                out += p;
            }
    }
    return out;
}

PWFunction PWFunction::arg_inverted() const {
    auto &cache = HarmonicCache::for_backend(be_);
    PWFunction out(be_);
    for (const auto &[l, c] : coef_) {
        const int d = be_->irrep_dim(l);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                if (c(m, n) == cx(0.0)) continue;
                PWFunction p = cache.inv_entry(EntryIdx{l, m, n});
                p *= c(m, n);
                out += p;
            }
    }
    return out;
}

PWFunction PWFunction::left_translated(const GroupElem &a) const {
    // f(ag): pi_mn(ag) = sum_k pi_mk(a) pi_kn(g), coef' = pi(a)^T coef
    PWFunction out(be_);
    for (const auto &[l, c] : coef_) {
        Eigen::MatrixXcd pa = be_->irrep_matrix(l, a);
        out.coef_[l] = pa.transpose() * c;
    }
    return out;
}

PWFunction PWFunction::right_translated(const GroupElem &a) const {
    PWFunction out(be_);
    for (const auto &[l, c] : coef_) {
        Eigen::MatrixXcd pa = be_->irrep_matrix(l, a);
        out.coef_[l] = c * pa.transpose();
    }
    return out;
}

PWFunction PWFunction::right_invariant_derivative(int a) const {
    if (!be_->is_lie()) throw Unsupported("right-invariant derivative needs a Lie backend");
    // d/dt pi_mn(exp(t tau_a) g) = sum_k dpi(tau_a)_mk pi_kn(g)
    PWFunction out(be_);
    for (const auto &[l, c] : coef_) {
        Eigen::MatrixXcd gen = be_->irrep_generator(l, a);
        out.coef_[l] = gen.transpose() * c;
    }
    return out;
}

cx PWFunction::inner(const PWFunction &other) const {
    // Schur orthogonality: <pi^l_mn, pi^l'_m'n'> = delta delta delta / d_l
    cx acc(0.0, 0.0);
    for (const auto &[l, c] : coef_) {
        auto it = other.coef_.find(l);
        if (it == other.coef_.end()) continue;
        acc += (c.conjugate().cwiseProduct(it->second)).sum() / static_cast<double>(be_->irrep_dim(l));
    }
    return acc;
}

double PWFunction::norm2() const { return inner(*this).real(); }

cx PWFunction::integral() const {
    int trivial = 0;
    if (be_->kind() == Backend::Kind::finite) trivial = be_->irrep_labels().front();
    auto it = coef_.find(trivial);
    return it == coef_.end() ? cx(0.0) : it->second(0, 0);
}

void PWFunction::prune(double tol) {
    for (auto it = coef_.begin(); it != coef_.end();) {
        if (it->second.norm() <= tol)
            it = coef_.erase(it);
        else
            ++it;
    }
}

// ---------------------------------------------------------------------------

std::vector<EntryIdx> pw_basis(const Backend *be, int cutoff) {
    std::vector<EntryIdx> basis;
    for (int l : labels_up_to_band(be, cutoff)) {
        const int d = be->irrep_dim(l);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) basis.push_back(EntryIdx{l, m, n});
    }
    return basis;
}

HarmonicCache::NodeTable &HarmonicCache::table_unlocked(int rule_band) {
    auto it = tables_.find(rule_band);
    if (it == tables_.end()) {
        NodeTable t;
        t.rule = be_->haar_rule(rule_band);
        it = tables_.emplace(rule_band, std::move(t)).first;
    }
    return it->second;
}

void HarmonicCache::ensure_labels_unlocked(NodeTable &t, int max_label_band) {
    for (int l : labels_up_to_band(be_, max_label_band)) {
        if (t.by_label.count(l)) continue;
        std::vector<Eigen::MatrixXcd> mats;
        mats.reserve(t.rule.nodes.size());
        for (const GroupElem &g : t.rule.nodes) mats.push_back(be_->irrep_matrix(l, g));
        t.by_label.emplace(l, std::move(mats));
    }
}

PWFunction HarmonicCache::project_unlocked(const std::vector<cx> &values, NodeTable &t,
                                           int out_band) {
    ensure_labels_unlocked(t, out_band);
    PWFunction out(be_);
    for (int l : labels_up_to_band(be_, out_band)) {
        const int d = be_->irrep_dim(l);
        const auto &mats = t.by_label.at(l);
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] != cx(0.0)) acc += t.rule.weights[i] * values[i] * mats[i].conjugate();
        acc *= static_cast<double>(d);
        if (acc.norm() > 1e-13) {
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n)
                    if (std::abs(acc(m, n)) > 1e-14) out.add(l, m, n, acc(m, n));
        }
    }
    return out;
}

const PWFunction &HarmonicCache::inv_entry(const EntryIdx &e) {
    std::lock_guard lock(mu_);
    auto it = inv_.find(e);
    if (it == inv_.end()) {
        const int band = be_->band_of_label(e.label);
        NodeTable &t = table_unlocked(2 * band);
        ensure_labels_unlocked(t, band);
        const auto &mats = t.by_label.at(e.label);
        std::vector<cx> values(t.rule.nodes.size());
        // pi(g^-1) = pi(g)^dagger for unitary irreps
        for (std::size_t i = 0; i < values.size(); ++i)
            values[i] = std::conj(mats[i](e.n, e.m));
        it = inv_.emplace(e, project_unlocked(values, t, band)).first;
    }
    return it->second;
}

const PWFunction &HarmonicCache::conj_entry(const EntryIdx &e) {
    std::lock_guard lock(mu_);
    auto it = conj_.find(e);
    if (it == conj_.end()) {
        const int band = be_->band_of_label(e.label);
        NodeTable &t = table_unlocked(2 * band);
        ensure_labels_unlocked(t, band);
        const auto &mats = t.by_label.at(e.label);
        std::vector<cx> values(t.rule.nodes.size());
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::conj(mats[i](e.m, e.n));
        it = conj_.emplace(e, project_unlocked(values, t, band)).first;
    }
    return it->second;
}

namespace {

Eigen::MatrixXcd kron2(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace

const HarmonicCache::Coupling &HarmonicCache::coupling_unlocked(int l1, int l2) {
    auto it = couplings_.find({l1, l2});
    if (it != couplings_.end()) return it->second;
    // Build the coupled orthonormal basis from highest-weight vectors and
    // lowering chains of the total angular momentum acting on l1 (x) l2.
    // Each total spin occurs once, so the basis is unique up to a per-J
    // phase, which cancels in the product decomposition below.
    const int d1 = l1 + 1, d2 = l2 + 1;
    const int dim = d1 * d2;
    auto jmat = [&](int label, int axis) {
        return (cx(0.0, 1.0) * be_->irrep_generator(label, axis)).eval();
    };
    Eigen::MatrixXcd id1 = Eigen::MatrixXcd::Identity(d1, d1);
    Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(d2, d2);
    Eigen::MatrixXcd jminus =
        kron2((jmat(l1, 0) - cx(0.0, 1.0) * jmat(l1, 1)).eval(), id2) +
        kron2(id1, (jmat(l2, 0) - cx(0.0, 1.0) * jmat(l2, 1)).eval());
    Coupling cp;
    cp.c = Eigen::MatrixXcd::Zero(dim, dim);
    auto twice_m = [&](int p) {
        const int i1 = p / d2, i2 = p % d2;
        return (l1 - 2 * i1) + (l2 - 2 * i2);
    };
    int col = 0;
    std::vector<std::pair<int, Eigen::VectorXcd>> placed; // (twice-M, vector)
    for (int lj = l1 + l2; lj >= std::abs(l1 - l2); lj -= 2) {
        Eigen::VectorXcd hw = Eigen::VectorXcd::Zero(dim);
        for (int cand = 0; cand < dim; ++cand) {
            if (twice_m(cand) != lj) continue;
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
            v(cand) = 1.0;
            for (const auto &[tm, u] : placed)
                if (tm == lj) v -= u.dot(v) * u;
            if (v.norm() > 1e-8) {
                hw = v.normalized();
                break;
            }
        }
        Eigen::VectorXcd v = hw;
        for (int twom = lj; twom >= -lj; twom -= 2) {
            cp.c.col(col) = v;
            cp.col_block.emplace_back(lj, (lj - twom) / 2);
            placed.emplace_back(twom, v);
            ++col;
            if (twom > -lj) v = (jminus * v).normalized();
        }
    }
    auto ins = couplings_.emplace(std::make_pair(l1, l2), std::move(cp));
    return ins.first->second;
}

PWFunction HarmonicCache::product_entry_unlocked(const EntryIdx &a, const EntryIdx &b) {
    if (be_->kind() == Backend::Kind::u1) {
        // e^{i k phi} e^{i k' phi} = e^{i (k + k') phi}
        PWFunction f(be_);
        f.add(a.label + b.label, 0, 0, cx(1.0));
        return f;
    }
    if (be_->kind() == Backend::Kind::su2) {
        // (pi1 (x) pi2)(g) = C (oplus_J pi^J(g)) C^dagger
        const Coupling &cp = coupling_unlocked(a.label, b.label);
        const int d2 = b.label + 1;
        const int row = a.m * d2 + b.m;
        const int rcol = a.n * d2 + b.n;
        PWFunction f(be_);
        for (int x = 0; x < cp.c.cols(); ++x) {
            const cx cl = cp.c(row, x);
            if (cl == cx(0.0)) continue;
            for (int y = 0; y < cp.c.cols(); ++y) {
                if (cp.col_block[y].first != cp.col_block[x].first) continue;
                cx amp = cl * std::conj(cp.c(rcol, y));
                if (amp != cx(0.0))
                    f.add(cp.col_block[x].first, cp.col_block[x].second, cp.col_block[y].second,
                          amp);
            }
        }
        f.prune(1e-15);
        return f;
    }
    // finite groups: exact group-average projection
    NodeTable &t = table_unlocked(0);
    ensure_labels_unlocked(t, 0);
    const auto &ma = t.by_label.at(a.label);
    const auto &mb = t.by_label.at(b.label);
    std::vector<cx> values(t.rule.nodes.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = ma[i](a.m, a.n) * mb[i](b.m, b.n);
    return project_unlocked(values, t, 0);
}

const PWFunction &HarmonicCache::prod_entry(const EntryIdx &a, const EntryIdx &b) {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(a, b);
    auto it = prod_.find(key);
    if (it == prod_.end()) it = prod_.emplace(key, product_entry_unlocked(a, b)).first;
    return it->second;
}

const std::vector<std::pair<EntryIdx, cx>> &HarmonicCache::prod_entry_sparse(const EntryIdx &a,
                                                                             const EntryIdx &b) {
    {
        std::lock_guard lock(mu_);
        auto it = prod_sparse_.find({a, b});
        if (it != prod_sparse_.end()) return it->second;
    }
    const PWFunction &f = prod_entry(a, b);
    std::lock_guard lock(mu_);
    auto it = prod_sparse_.find({a, b});
    if (it == prod_sparse_.end()) {
        std::vector<std::pair<EntryIdx, cx>> sparse;
        for (const auto &[l, c] : f.coef())
            for (int m = 0; m < c.rows(); ++m)
                for (int n = 0; n < c.cols(); ++n)
                    if (c(m, n) != cx(0.0)) sparse.push_back({EntryIdx{l, m, n}, c(m, n)});
        it = prod_sparse_.emplace(std::make_pair(a, b), std::move(sparse)).first;
    }
    return it->second;
}

const PWFunction &HarmonicCache::adjoint_entry(int i, int j, bool inverted) {
    std::lock_guard lock(mu_);
    auto key = std::make_tuple(i, j, inverted);
    auto it = adj_.find(key);
    if (it == adj_.end()) {
        // R(g) has band 0 on U(1) (trivial adjoint) and band 2 on SU(2)
        // (entries of the spin-1 representation).
        const int band = be_->kind() == Backend::Kind::su2 ? 2 : 0;
        NodeTable &t = table_unlocked(2 * band);
        std::vector<cx> values(t.rule.nodes.size());
        for (std::size_t n = 0; n < values.size(); ++n) {
            const GroupElem &g = t.rule.nodes[n];
            values[n] = cx(be_->ad_matrix(inverted ? be_->invert(g) : g)(i, j), 0.0);
        }
        it = adj_.emplace(key, project_unlocked(values, t, band)).first;
    }
    return it->second;
}

cx HarmonicCache::entry_product_integral(const std::vector<std::pair<EntryIdx, bool>> &factors) {
    std::lock_guard lock(mu_);
    return entry_product_integral_unlocked(factors);
}

cx HarmonicCache::entry_product_integral_unlocked(
    const std::vector<std::pair<EntryIdx, bool>> &factors) {
    auto it = integrals_.find(factors);
    if (it == integrals_.end()) {
        int band = 0;
        int max_label = 0;
        for (const auto &[e, inv] : factors) {
            band += be_->band_of_label(e.label);
            max_label = std::max(max_label, be_->band_of_label(e.label));
        }
        NodeTable &t = table_unlocked(band);
        ensure_labels_unlocked(t, max_label);
        cx value(0.0, 0.0);
        for (std::size_t i = 0; i < t.rule.nodes.size(); ++i) {
            cx prod(1.0, 0.0);
            for (const auto &[e, inv] : factors) {
                const Eigen::MatrixXcd &m = t.by_label.at(e.label)[i];
                prod *= inv ? std::conj(m(e.n, e.m)) : m(e.m, e.n);
            }
            value += t.rule.weights[i] * prod;
        }
        it = integrals_.emplace(factors, value).first;
    }
    return it->second;
}

const Eigen::MatrixXcd &HarmonicCache::mult_entry_matrix(const EntryIdx &e, int from_cutoff,
                                                         int to_cutoff) {
    std::lock_guard lock(mu_);
    auto key = std::make_tuple(e, from_cutoff, to_cutoff);
    auto it = mult_.find(key);
    if (it == mult_.end()) {
        // <Phi_b2, pi^e Phi_b1> with conj(pi_mn) = pi_nm(g^-1) for unitary irreps.
        std::vector<EntryIdx> from = pw_basis(be_, from_cutoff);
        std::vector<EntryIdx> to = pw_basis(be_, to_cutoff);
        Eigen::MatrixXcd m(to.size(), from.size());
        for (std::size_t r = 0; r < to.size(); ++r) {
            const EntryIdx &b2 = to[r];
            const double d2 = be_->irrep_dim(b2.label);
            for (std::size_t c = 0; c < from.size(); ++c) {
                const EntryIdx &b1 = from[c];
                const double d1 = be_->irrep_dim(b1.label);
                cx val = entry_product_integral_unlocked(
                    {{EntryIdx{b2.label, b2.n, b2.m}, true}, {e, false}, {b1, false}});
                m(r, c) = std::sqrt(d1 * d2) * val;
            }
        }
        it = mult_.emplace(key, std::move(m)).first;
    }
    return it->second;
}

HarmonicCache &HarmonicCache::for_backend(const Backend *be) {
    std::lock_guard lock(be->cache_mu_);
    if (!be->harmonic_cache_)
        be->harmonic_cache_ = std::shared_ptr<void>(
            new HarmonicCache(be), [](void *p) { delete static_cast<HarmonicCache *>(p); });
    return *static_cast<HarmonicCache *>(be->harmonic_cache_.get());
}

} // namespace holoflux
