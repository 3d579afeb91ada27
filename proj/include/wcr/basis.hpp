#ifndef WCR_BASIS_HPP
#define WCR_BASIS_HPP

#include <Eigen/Core>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace wcr {

struct TrigFactor {
    enum class Kind { cos, sin };
    Kind kind = Kind::cos;
    int frequency = 0;
    int coordinate = 0;
};

// One dictionary term: a monomial given by its multi-index, optionally
// multiplied by cos(k x_i) or sin(k x_i).
struct TermDescriptor {
    std::vector<int> powers;
    std::optional<TrigFactor> trig;

    double eval(const Eigen::VectorXd& x) const;
    int total_degree() const;
    std::string to_string() const;
};

// Ordered term library. Construction fixes the order permanently so
// coefficient indices are reproducible.
class Basis {
public:
    Basis(int dimension, std::vector<TermDescriptor> terms);

    int dimension() const { return dimension_; }
    int size() const { return static_cast<int>(terms_.size()); }
    const std::vector<TermDescriptor>& terms() const { return terms_; }

    Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
    // Row n holds the term values at X.row(n); power tables are shared
    // across terms so cost is O(N (b + d p)).
    Eigen::MatrixXd eval_rows(const Eigen::MatrixXd& X) const;

    // Index of the term with the given multi-index and no trig factor, or -1.
    int find_monomial(const std::vector<int>& powers) const;

    nlohmann::json to_json() const;
    static Basis from_json(const nlohmann::json& j);

    bool operator==(const Basis& other) const;

private:
    int dimension_;
    std::vector<TermDescriptor> terms_;
};

// All monomials of total degree <= p in d variables, graded lexicographic:
// degree ascending, first coordinate's exponent descending within a degree.
Basis complete_polynomial_basis(int d, int p);

// 1d terms x^a * cos(k x) for a = 0..poly_max_degree and k over the given
// frequencies, polynomial-major.
Basis tensor_product_basis(int poly_max_degree, const std::vector<int>& cos_frequencies,
                           int d = 1);

inline Eigen::VectorXd eval_basis(const Basis& basis, const Eigen::VectorXd& x) {
    return basis.eval(x);
}

}  // namespace wcr

#endif
