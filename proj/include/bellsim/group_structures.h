#ifndef BELLSIM_GROUP_STRUCTURES_H
#define BELLSIM_GROUP_STRUCTURES_H

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bellsim {

/// Permutation in one-line notation: p[i] is the image of point i.
using Permutation = std::vector<size_t>;

Permutation identity_permutation(size_t n);
/// (a * b)(i) = a(b(i)); b acts first.
Permutation compose(const Permutation &a, const Permutation &b);
Permutation inverse(const Permutation &p);
bool is_bijection(const Permutation &p, size_t n);

inline constexpr size_t kDefaultGroupCap = 1'000'000;

/// A finite set {0, ..., n-1} with a group of permutations generated by
/// `generators`. The closure is computed eagerly on construction.
class FiniteAction {
   public:
    /// Throws InvalidConfig if a generator is not a bijection of the points,
    /// GroupTooLarge if the closure exceeds `cap` elements.
    FiniteAction(size_t points, std::vector<Permutation> generators, size_t cap = kDefaultGroupCap);

    size_t points() const noexcept {
        return points_;
    }
    const std::vector<Permutation> &generators() const noexcept {
        return generators_;
    }
    /// Identity first, then breadth-first order of discovery.
    const std::vector<Permutation> &elements() const noexcept {
        return elements_;
    }
    std::optional<size_t> index_of(const Permutation &p) const;
    bool is_transitive() const;

   private:
    size_t points_;
    std::vector<Permutation> generators_;
    std::vector<Permutation> elements_;
    std::map<Permutation, size_t> index_;
};

/// A total labeling of the points {0, ..., n-1}.
class LabeledVariable {
   public:
    LabeledVariable(std::string name, std::vector<std::string> labels);

    const std::string &name() const noexcept {
        return name_;
    }
    size_t points() const noexcept {
        return labels_.size();
    }
    const std::string &operator[](size_t point) const {
        return labels_[point];
    }
    const std::vector<std::string> &labels() const noexcept {
        return labels_;
    }
    /// Distinct labels in first-appearance order.
    std::vector<std::string> label_set() const;
    /// label -> points carrying it.
    std::map<std::string, std::vector<size_t>> fibers() const;
    /// Every label has exactly one preimage.
    bool is_injective() const;

   private:
    std::string name_;
    std::vector<std::string> labels_;
};

struct PermissibilityWitness {
    size_t point1;
    size_t point2;
    /// Group element separating the two points' labels.
    Permutation k;
};

struct PermissibilityResult {
    bool permissible;
    std::optional<PermissibilityWitness> counterexample;
};

/// theta(p1) = theta(p2) implies theta(k p1) = theta(k p2) for all k in the group.
PermissibilityResult is_permissible(const FiniteAction &act, const LabeledVariable &theta);

struct InducedGroup {
    /// Label alphabet; induced maps act on indices into it.
    std::vector<std::string> labels;
    /// label_maps[i] is g_k for k = act.elements()[i].
    std::vector<Permutation> label_maps;
    /// Distinct induced maps (the image group G).
    std::vector<Permutation> image;
    /// g_{k1 k2} = g_{k1} o g_{k2} held for every pair.
    bool homomorphism_verified;
    bool source_transitive;
    bool image_transitive;
};

/// Induced action g_k(theta(p)) = theta(k p). Throws NotPermissible.
InducedGroup induced_group(const FiniteAction &act, const LabeledVariable &theta);

struct RelatedResult {
    bool related;
    /// k with eta(p) = theta(k p) for all p.
    std::optional<Permutation> witness;
};

/// Whether eta = theta o k for some bijection k. Without `within` the
/// decision is by fiber counting (equal fiber size per label) and the
/// witness pairs fibers point by point; with `within` only elements of the
/// generated group are candidates. Throws DimensionMismatch.
RelatedResult are_related(
    const LabeledVariable &theta, const LabeledVariable &eta, const FiniteAction *within = nullptr);

/// Exhaustive search over all n! bijections. Reference decision for tests.
RelatedResult are_related_brute_force(const LabeledVariable &theta, const LabeledVariable &eta);

struct RelationMatrix {
    std::vector<std::string> names;
    /// related[i][j]: variables j = variables i o k for some k.
    std::vector<std::vector<bool>> related;
    std::vector<std::vector<std::optional<Permutation>>> witnesses;
};

/// Pairwise are_related; needs at least two variables (InvalidConfig).
RelationMatrix classify_pairs(const std::vector<LabeledVariable> &variables, const FiniteAction *within = nullptr);

/// Parsed model file.
struct FiniteModel {
    size_t points = 0;
    std::vector<std::string> generator_names;
    std::vector<Permutation> generators;
    std::vector<LabeledVariable> variables;

    FiniteAction action(size_t cap = kDefaultGroupCap) const;
};

/// Grammar (one directive per line, `#` starts a comment):
///   points <N>
///   generator <name> <image of 0> ... <image of N-1>
///   variable <name>
///   <point> <label>        (one line per point, any order, all points)
///   end
/// Throws ParseFailure.
FiniteModel parse_model(std::string_view text);
FiniteModel load_model(const std::filesystem::path &path);
std::string model_to_text(const FiniteModel &model);

/// 2N equally spaced planar directions phi_j = j pi / N, generated by the
/// rotation j -> j + 1; variables "theta" = sign(cos phi) and
/// "eta" = sign(sin phi), ties to +1.
FiniteModel spin_plane_model(size_t half_points);

/// Discretized plane of Alice's spin direction phi (Bob's is -phi) with
/// M = 360/step_degrees points at offsets step/2, the dihedral group
/// generated by the one-step rotation and the reflection phi -> -phi, and
/// the pair variables C=(A,B), D=(A,B'), E=(A',B), F=(A',B') for the
/// given settings in degrees. A = sign(phi.a), B = -sign(phi.b).
FiniteModel chsh_pairs_model(
    double step_degrees = 5.0, double a = 0, double a_prime = 90, double b = 225, double b_prime = 135);

}  // namespace bellsim

#endif
