#include "wcr/basis.hpp"

#include <cmath>

#include "wcr/errors.hpp"

namespace wcr {

double TermDescriptor::eval(const Eigen::VectorXd& x) const {
    double v = 1.0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        for (int k = 0; k < powers[i]; ++k) v *= x[static_cast<Eigen::Index>(i)];
    }
    if (trig) {
        double arg = trig->frequency * x[trig->coordinate];
        v *= trig->kind == TrigFactor::Kind::cos ? std::cos(arg) : std::sin(arg);
    }
    return v;
}

int TermDescriptor::total_degree() const {
    int g = 0;
    for (int p : powers) g += p;
    return g;
}

std::string TermDescriptor::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (powers[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += "x" + std::to_string(i + 1);
        if (powers[i] > 1) s += "^" + std::to_string(powers[i]);
    }
    if (trig) {
        if (!s.empty()) s += "*";
        s += trig->kind == TrigFactor::Kind::cos ? "cos(" : "sin(";
        s += std::to_string(trig->frequency) + "x" + std::to_string(trig->coordinate + 1) + ")";
    }
    return s.empty() ? "1" : s;
}

Basis::Basis(int dimension, std::vector<TermDescriptor> terms)
    : dimension_(dimension), terms_(std::move(terms)) {
    if (dimension_ < 1) throw ConfigError("basis dimension must be >= 1");
    for (const auto& t : terms_) {
        if (static_cast<int>(t.powers.size()) != dimension_)
            throw ConfigError("term multi-index length does not match basis dimension");
        if (t.trig && (t.trig->coordinate < 0 || t.trig->coordinate >= dimension_))
            throw ConfigError("trig factor coordinate out of range");
        if (t.trig && t.trig->frequency < 0)
            throw ConfigError("trig factor frequency must be non-negative");
    }
}

Eigen::VectorXd Basis::eval(const Eigen::VectorXd& x) const {
    if (x.size() != dimension_) throw ConfigError("basis evaluation dimension mismatch");
    if (!x.allFinite()) throw ConfigError("basis evaluation at non-finite point");
    Eigen::VectorXd out(size());
    for (int j = 0; j < size(); ++j) out[j] = terms_[static_cast<std::size_t>(j)].eval(x);
    return out;
}

Eigen::MatrixXd Basis::eval_rows(const Eigen::MatrixXd& X) const {
    if (X.cols() != dimension_) throw ConfigError("basis evaluation dimension mismatch");
    const Eigen::Index n = X.rows();
    int max_degree = 0;
    for (const auto& t : terms_)
        for (int p : t.powers) max_degree = std::max(max_degree, p);

    // pow_table[i] columns: x_i^1 .. x_i^max_degree
    std::vector<Eigen::MatrixXd> pow_table(static_cast<std::size_t>(dimension_));
    for (int i = 0; i < dimension_; ++i) {
        auto& P = pow_table[static_cast<std::size_t>(i)];
        P.resize(n, max_degree);
        if (max_degree > 0) {
            P.col(0) = X.col(i);
            for (int k = 1; k < max_degree; ++k)
                P.col(k) = P.col(k - 1).cwiseProduct(X.col(i));
        }
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Ones(n, size());
    for (int j = 0; j < size(); ++j) {
        const auto& term = terms_[static_cast<std::size_t>(j)];
        for (int i = 0; i < dimension_; ++i) {
            int p = term.powers[static_cast<std::size_t>(i)];
            if (p > 0) out.col(j) = out.col(j).cwiseProduct(pow_table[static_cast<std::size_t>(i)].col(p - 1));
        }
        if (term.trig) {
            Eigen::ArrayXd arg = term.trig->frequency * X.col(term.trig->coordinate).array();
            Eigen::ArrayXd factor =
                term.trig->kind == TrigFactor::Kind::cos ? arg.cos().eval() : arg.sin().eval();
            out.col(j) = out.col(j).array() * factor;
        }
    }
    return out;
}

int Basis::find_monomial(const std::vector<int>& powers) const {
    for (int j = 0; j < size(); ++j) {
        const auto& t = terms_[static_cast<std::size_t>(j)];
        if (!t.trig && t.powers == powers) return j;
    }
    return -1;
}

nlohmann::json Basis::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : terms_) {
        nlohmann::json jt;
        jt["powers"] = t.powers;
        if (t.trig) {
            jt["trig"] = {{"kind", t.trig->kind == TrigFactor::Kind::cos ? "cos" : "sin"},
                          {"frequency", t.trig->frequency},
                          {"coordinate", t.trig->coordinate}};
        }
        terms.push_back(jt);
    }
    return {{"dimension", dimension_}, {"terms", terms}};
}

Basis Basis::from_json(const nlohmann::json& j) {
    int d = j.at("dimension").get<int>();
    std::vector<TermDescriptor> terms;
    for (const auto& jt : j.at("terms")) {
        TermDescriptor t;
        t.powers = jt.at("powers").get<std::vector<int>>();
        if (jt.contains("trig")) {
            TrigFactor f;
            f.kind = jt["trig"].at("kind") == "sin" ? TrigFactor::Kind::sin : TrigFactor::Kind::cos;
            f.frequency = jt["trig"].at("frequency").get<int>();
            f.coordinate = jt["trig"].at("coordinate").get<int>();
            t.trig = f;
        }
        terms.push_back(std::move(t));
    }
    return Basis(d, std::move(terms));
}

bool Basis::operator==(const Basis& other) const {
    if (dimension_ != other.dimension_ || terms_.size() != other.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const auto& a = terms_[i];
        const auto& b = other.terms_[i];
        if (a.powers != b.powers) return false;
        if (a.trig.has_value() != b.trig.has_value()) return false;
        if (a.trig && (a.trig->kind != b.trig->kind || a.trig->frequency != b.trig->frequency ||
                       a.trig->coordinate != b.trig->coordinate))
            return false;
    }
    return true;
}

namespace {
void monomials_of_degree(int d, int degree, std::vector<int>& current,
                         std::vector<TermDescriptor>& out) {
    const int axis = static_cast<int>(current.size());
    if (axis == d - 1) {
        current.push_back(degree);
        out.push_back(TermDescriptor{current, std::nullopt});
        current.pop_back();
        return;
    }
    for (int e = degree; e >= 0; --e) {
        current.push_back(e);
        monomials_of_degree(d, degree - e, current, out);
        current.pop_back();
    }
}
}  // namespace

Basis complete_polynomial_basis(int d, int p) {
    if (d < 1) throw ConfigError("dimension must be >= 1");
    if (p < 0) throw ConfigError("order must be >= 0");
    std::vector<TermDescriptor> terms;
    std::vector<int> current;
    for (int g = 0; g <= p; ++g) monomials_of_degree(d, g, current, terms);
    return Basis(d, std::move(terms));
}

Basis tensor_product_basis(int poly_max_degree, const std::vector<int>& cos_frequencies, int d) {
    if (d != 1) throw ConfigError("tensor product basis is only supported in 1d");
    if (poly_max_degree < 0) throw ConfigError("order must be >= 0");
    std::vector<TermDescriptor> terms;
    for (int a = 0; a <= poly_max_degree; ++a) {
        for (int k : cos_frequencies) {
            if (k < 0) throw ConfigError("cos frequency must be non-negative");
            TermDescriptor t;
            t.powers = {a};
            if (k != 0) t.trig = TrigFactor{TrigFactor::Kind::cos, k, 0};
            terms.push_back(std::move(t));
        }
    }
    return Basis(1, std::move(terms));
}

}  // namespace wcr
