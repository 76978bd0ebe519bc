#pragma once

#include "folwerk/ring.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace folwerk {

class AlgebraPresentation;
using AlgebraPtr = std::shared_ptr<const AlgebraPresentation>;

/// Finitely presented (dg-)algebra over Q or over another presentation.
///
/// The ring carries the base generators first (same names, same relations),
/// followed by the own generators. The structure map base -> this is the
/// inclusion of those leading generators.
class AlgebraPresentation {
public:
    struct Spec {
        std::string name;
        AlgebraPtr base;                     // null: over Q
        std::vector<Generator> generators;   // own generators, degree <= 0
        std::vector<std::string> relations;  // polynomials in all generators
        std::map<std::string, std::string> differential; // own generator -> d(g)
        bool smooth = false; // user asserts B smooth over the base
        bool lci = false;    // user asserts own relations form a regular sequence
        Budget budget = Budget::defaults();
    };

    static AlgebraPtr make(const Spec& spec);
    /// Same data with relations given directly as polynomials over the free ring.
    static AlgebraPtr make(std::string name, AlgebraPtr base, std::vector<Generator> generators,
                           std::vector<Poly> relations, std::vector<Poly> differential = {},
                           bool smooth = false, bool lci = false,
                           const Budget& budget = Budget::defaults());
    static AlgebraPtr rationals();

    const std::string& name() const { return name_; }
    const AlgebraPtr& base() const { return base_; }
    const Ring& ring() const { return *ring_; }
    const RingPtr& ring_ptr() const { return ring_; }

    std::size_t base_size() const { return base_size_; }
    std::size_t own_size() const { return ring_->size() - base_size_; }
    std::size_t own_index(std::size_t k) const { return base_size_ + k; }
    bool is_base_generator(std::size_t i) const { return i < base_size_; }

    /// Own relations (reduced by nothing; as written) in the ring's variables.
    const std::vector<Poly>& own_relations() const { return own_relations_; }
    /// d on every ring generator (zero polynomial when absent).
    const std::vector<Poly>& differential() const { return differential_; }
    bool is_dg() const;
    Poly d(const Poly& p) const;

    bool smooth_flag() const { return smooth_; }
    bool lci_flag() const { return lci_; }
    bool has_own_relations() const { return !own_relations_.empty(); }

    /// The relation-free ring on the same generators.
    const Ring& free_ring() const { return *free_ring_; }

    /// Every degree-0 generator; the owner of ordinary complexes.
    bool concentrated_in_degree_zero() const;

    /// Name chain "B/A" used in reports.
    std::string describe() const;

private:
    AlgebraPresentation() = default;

    std::string name_;
    AlgebraPtr base_;
    RingPtr ring_;
    RingPtr free_ring_;
    std::size_t base_size_ = 0;
    std::vector<Poly> own_relations_;
    std::vector<Poly> differential_;
    bool smooth_ = false;
    bool lci_ = false;
};

/// Algebra map: each ring generator of the source goes to a polynomial of the
/// target ring.
class AlgebraMap {
public:
    AlgebraMap() = default;
    AlgebraMap(std::string name, AlgebraPtr source, AlgebraPtr target, std::vector<Poly> images);

    static AlgebraMap identity(const AlgebraPtr& a);
    /// The structure inclusion base(a) -> a.
    static AlgebraMap structure(const AlgebraPtr& a);
    /// Builds images from "generator -> expression" pairs; base generators
    /// shared by name default to themselves.
    static AlgebraMap parse(std::string name, AlgebraPtr source, AlgebraPtr target,
                            const std::map<std::string, std::string>& images);

    const std::string& name() const { return name_; }
    const AlgebraPtr& source() const { return source_; }
    const AlgebraPtr& target() const { return target_; }
    const std::vector<Poly>& images() const { return images_; }

    Poly apply(const Poly& p) const;

    /// Empty string when the map is well defined (relations go to zero,
    /// degrees preserved, commutes with d); otherwise a reason.
    std::string defect() const;
    void validate() const;

    /// `this` then `next`.
    AlgebraMap then(const AlgebraMap& next) const;

    bool is_identity() const;

private:
    std::string name_;
    AlgebraPtr source_;
    AlgebraPtr target_;
    std::vector<Poly> images_;
};

} // namespace folwerk
