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

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "holoflux/common.hpp"

namespace holoflux {

class Backend;

/// Element of the structure group. Payload depends on the backend:
/// finite groups index into a multiplication table, U(1) stores an angle in
/// [0, 2pi), SU(2) a unitary 2x2 matrix with unit determinant.
struct GroupElem {
    const Backend *backend = nullptr;
    std::variant<int, double, Eigen::Matrix2cd> payload;

    int index() const { return std::get<int>(payload); }
    double angle() const { return std::get<double>(payload); }
    const Eigen::Matrix2cd &matrix() const { return std::get<Eigen::Matrix2cd>(payload); }
};

/// Lie algebra element in the fixed basis tau_a. Empty for finite backends.
struct AlgElem {
    const Backend *backend = nullptr;
    Eigen::VectorXd x;
};

/// Element of the dual g*, coordinates theta_a in the dual basis.
/// The pairing is <theta, X> = sum_a theta_a x_a.
struct CoAlgElem {
    const Backend *backend = nullptr;
    Eigen::VectorXd theta;
};

inline double pairing(const CoAlgElem &th, const AlgElem &x) { return th.theta.dot(x.x); }

/// Quadrature rule computing the normalized Haar integral exactly on
/// harmonically finite functions up to a stated band.
struct HaarRule {
    std::vector<GroupElem> nodes;
    std::vector<double> weights;
    int exact_band = 0;
};

/// Compact-group arithmetic behind a uniform interface. Irreducible
/// representations are addressed by integer labels: the mode k for U(1)
/// (possibly negative), twice the spin for SU(2), a table index for finite
/// groups. Bands add under pointwise products: band(k) = |k|, band(2j) = 2j.
class Backend {
  public:
    enum class Kind { finite, u1, su2 };

    virtual ~Backend() = default;

    virtual Kind kind() const = 0;
    virtual std::string name() const = 0;
    /// Dimension of the Lie algebra (0 for finite backends).
    virtual int alg_dim() const = 0;
    /// Group order for finite backends, 0 otherwise.
    virtual int order() const { return 0; }
    bool is_lie() const { return kind() != Kind::finite; }

    virtual GroupElem identity() const = 0;
    virtual GroupElem multiply(const GroupElem &a, const GroupElem &b) const = 0;
    virtual GroupElem invert(const GroupElem &a) const = 0;
    GroupElem conjugate(const GroupElem &a, const GroupElem &b) const {
        return multiply(multiply(a, b), invert(a));
    }
    virtual double distance(const GroupElem &a, const GroupElem &b) const = 0;
    bool approx_equal(const GroupElem &a, const GroupElem &b, double tol = 1e-12) const {
        return distance(a, b) <= tol;
    }

    AlgElem alg(const Eigen::VectorXd &x) const;
    CoAlgElem coalg(const Eigen::VectorXd &theta) const;
    AlgElem alg_basis(int a) const;

    virtual GroupElem exp(const AlgElem &x) const;
    /// Principal branch; throws DomainError at the cut locus.
    virtual AlgElem log(const GroupElem &g) const;
    GroupElem sqrt(const GroupElem &g) const;

    /// Matrix R of the adjoint action, Ad_g tau_b = sum_a R_ab tau_a.
    virtual Eigen::MatrixXd ad_matrix(const GroupElem &g) const;
    AlgElem ad(const GroupElem &g, const AlgElem &x) const;
    /// Convention: <CoAd(g, theta), X> = <theta, Ad(g^-1, X)>. In coordinates
    /// this is the same orthogonal matrix R(g) that realizes Ad.
    CoAlgElem coad(const GroupElem &g, const CoAlgElem &theta) const;
    virtual AlgElem bracket(const AlgElem &x, const AlgElem &y) const;
    /// Structure constants, bracket(tau_a, tau_b) = sum_c f[a][b][c] tau_c.
    const std::vector<std::vector<std::vector<double>>> &structure_constants() const;

    /// Labels within the backend's configured cutoff.
    virtual std::vector<int> irrep_labels() const = 0;
    virtual int irrep_dim(int label) const = 0;
    virtual int band_of_label(int label) const = 0;
    virtual Eigen::MatrixXcd irrep_matrix(int label, const GroupElem &g) const = 0;
    /// d pi(tau_a); Lie backends only.
    virtual Eigen::MatrixXcd irrep_generator(int label, int a) const;
    /// Largest band within the configured cutoff (K for U(1), 2J for SU(2),
    /// 0 for finite backends, whose tables are always complete).
    virtual int cutoff_band() const = 0;

    /// Nodes and weights for a rule exact on functions of band <= band.
    virtual HaarRule haar_rule(int band) const = 0;
    cx haar_integrate(const std::function<cx(const GroupElem &)> &f, int band) const;

    virtual GroupElem random_element(Rng &rng) const = 0;
    /// Parses a textual element description (finite element names,
    /// "angle:<radians>", "exp:<x1,..,xn>").
    virtual GroupElem parse_element(const std::string &text) const;

  private:
    friend class HarmonicCache;
    mutable std::vector<std::vector<std::vector<double>>> fabc_;
    // Opaque per-instance cache slot owned by the harmonic layer.
    mutable std::shared_ptr<void> harmonic_cache_;
    mutable std::mutex cache_mu_;
};

/// Finite group defined by an explicit multiplication table plus named
/// elements and a complete unitary irrep list.
class FiniteBackend : public Backend {
  public:
    Kind kind() const override { return Kind::finite; }
    int alg_dim() const override { return 0; }
    int order() const override { return static_cast<int>(table_.size()); }
    std::string name() const override { return "finite:" + id_; }

    GroupElem identity() const override { return make(identity_); }
    GroupElem multiply(const GroupElem &a, const GroupElem &b) const override;
    GroupElem invert(const GroupElem &a) const override;
    double distance(const GroupElem &a, const GroupElem &b) const override;

    std::vector<int> irrep_labels() const override;
    int irrep_dim(int label) const override;
    int band_of_label(int) const override { return 0; }
    Eigen::MatrixXcd irrep_matrix(int label, const GroupElem &g) const override;
    int cutoff_band() const override { return 0; }

    HaarRule haar_rule(int band) const override;
    GroupElem random_element(Rng &rng) const override;
    GroupElem parse_element(const std::string &text) const override;

    GroupElem element(int idx) const { return make(idx); }
    const std::string &element_name(int idx) const { return names_[idx]; }
    int index_by_name(const std::string &name) const;
    int mul_index(int a, int b) const { return table_[a][b]; }
    int inv_index(int a) const { return inverse_[a]; }

    static std::unique_ptr<FiniteBackend> make_group(const std::string &id);

  private:
    GroupElem make(int idx) const { return GroupElem{this, idx}; }
    void finalize();

    std::string id_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    std::vector<std::string> names_;
    int identity_ = 0;
    // Irreps: matrices per element, built from generator assignments.
    std::vector<std::vector<Eigen::MatrixXcd>> irreps_;
};

class U1Backend : public Backend {
  public:
    explicit U1Backend(int mode_cutoff) : cutoff_(mode_cutoff) {}

    Kind kind() const override { return Kind::u1; }
    int alg_dim() const override { return 1; }
    std::string name() const override { return "u1:modes=" + std::to_string(cutoff_); }

    GroupElem identity() const override { return make(0.0); }
    GroupElem multiply(const GroupElem &a, const GroupElem &b) const override;
    GroupElem invert(const GroupElem &a) const override;
    double distance(const GroupElem &a, const GroupElem &b) const override;

    GroupElem exp(const AlgElem &x) const override;
    AlgElem log(const GroupElem &g) const override;
    Eigen::MatrixXd ad_matrix(const GroupElem &g) const override;
    AlgElem bracket(const AlgElem &x, const AlgElem &y) const override;

    std::vector<int> irrep_labels() const override;
    int irrep_dim(int) const override { return 1; }
    int band_of_label(int label) const override { return label < 0 ? -label : label; }
    Eigen::MatrixXcd irrep_matrix(int label, const GroupElem &g) const override;
    Eigen::MatrixXcd irrep_generator(int label, int a) const override;
    int cutoff_band() const override { return cutoff_; }

    HaarRule haar_rule(int band) const override;
    GroupElem random_element(Rng &rng) const override;

    GroupElem make(double phi) const;

  private:
    int cutoff_;
};

class Su2Backend : public Backend {
  public:
    /// twice_spin_cutoff = 2J; the selector string accepts "1/2", "1", "3/2", ...
    explicit Su2Backend(int twice_spin_cutoff) : cutoff_(twice_spin_cutoff) {}

    Kind kind() const override { return Kind::su2; }
    int alg_dim() const override { return 3; }
    std::string name() const override;

    GroupElem identity() const override;
    GroupElem multiply(const GroupElem &a, const GroupElem &b) const override;
    GroupElem invert(const GroupElem &a) const override;
    double distance(const GroupElem &a, const GroupElem &b) const override;

    GroupElem exp(const AlgElem &x) const override;
    AlgElem log(const GroupElem &g) const override;
    Eigen::MatrixXd ad_matrix(const GroupElem &g) const override;
    AlgElem bracket(const AlgElem &x, const AlgElem &y) const override;

    std::vector<int> irrep_labels() const override;
    int irrep_dim(int label) const override { return label + 1; }
    int band_of_label(int label) const override { return label; }
    Eigen::MatrixXcd irrep_matrix(int label, const GroupElem &g) const override;
    Eigen::MatrixXcd irrep_generator(int label, int a) const override;
    int cutoff_band() const override { return cutoff_; }

    HaarRule haar_rule(int band) const override;
    GroupElem random_element(Rng &rng) const override;

    GroupElem make(const Eigen::Matrix2cd &u) const;

  private:
    int cutoff_;
};

/// Creates a backend from a selector string: "finite:S3", "finite:Z4",
/// "u1:modes=8", "su2:cutoff=1", "su2:cutoff=3/2".
std::unique_ptr<Backend> make_backend(const std::string &selector);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double> &nodes, std::vector<double> &weights);

} // namespace holoflux
